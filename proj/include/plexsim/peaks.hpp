#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

namespace plexsim {

struct Peak {
  std::size_t index;
  double position;  // parabolic-interpolated abscissa
  double height;
  double prominence = 0.0;  // height above the higher of the two flanking minima
};

/// Strict interior local maxima of a sampled curve, refined by a three-point
/// parabola. Plateaus count once (at their left edge).
inline std::vector<Peak> local_maxima(std::span<const double> x, std::span<const double> y) {
  std::vector<Peak> peaks;
  const std::size_t n = std::min(x.size(), y.size());
  for (std::size_t k = 1; k + 1 < n; ++k) {
    if (!(y[k] > y[k - 1] && y[k] >= y[k + 1])) continue;
    if (y[k] == y[k + 1]) {
      // plateau: only a maximum if it eventually falls
      std::size_t j = k + 1;
      while (j + 1 < n && y[j + 1] == y[k]) ++j;
      if (j + 1 >= n || y[j + 1] > y[k]) continue;
    }
    double pos = x[k];
    double height = y[k];
    const double denom = y[k - 1] - 2.0 * y[k] + y[k + 1];
    if (denom < 0.0) {
      const double shift = 0.5 * (y[k - 1] - y[k + 1]) / denom;  // in units of the local step
      const double h = shift >= 0.0 ? x[k + 1] - x[k] : x[k] - x[k - 1];
      pos = x[k] + shift * h;
      height = y[k] - 0.25 * (y[k - 1] - y[k + 1]) * shift;
    }
    peaks.push_back({k, pos, height});
  }
  // Walk outwards to the first higher sample (or the edge) on each side.
  for (auto& p : peaks) {
    double left = y[p.index], right = y[p.index];
    for (std::size_t j = p.index; j-- > 0 && y[j] <= y[p.index];) left = std::min(left, y[j]);
    for (std::size_t j = p.index + 1; j < n && y[j] <= y[p.index]; ++j) right = std::min(right, y[j]);
    p.prominence = y[p.index] - std::max(left, right);
  }
  return peaks;
}

/// Maxima standing out by at least `rel` times the global maximum; this is
/// what a reader counts as a peak on a linear plot.
inline std::vector<Peak> resolved_maxima(std::span<const double> x, std::span<const double> y, double rel = 1e-3) {
  const std::size_t n = std::min(x.size(), y.size());
  if (n == 0) return {};
  const double top = *std::max_element(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(n));
  std::vector<Peak> out;
  for (const auto& p : local_maxima(x, y))
    if (p.prominence >= rel * top) out.push_back(p);
  return out;
}

/// Maxima whose position lies inside [lo, hi].
inline std::vector<Peak> maxima_in(std::span<const double> x, std::span<const double> y, double lo, double hi) {
  std::vector<Peak> out;
  for (const auto& p : local_maxima(x, y))
    if (p.position >= lo && p.position <= hi) out.push_back(p);
  return out;
}

}  // namespace plexsim
