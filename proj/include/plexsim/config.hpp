#pragma once

// Run configuration: one flat parameter tree shared by every model, read
// from and written to a line-oriented key/value file:
//
//   # comment
//   schema_version = 1
//   [cmt]
//   g_D = 0.4          # same as "cmt.g_D = 0.4" outside a section
//
// Every key is validated on load; unknown keys are rejected with the
// closest known key as a suggestion.

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "plexsim/analytics.hpp"
#include "plexsim/cmt.hpp"
#include "plexsim/errors.hpp"
#include "plexsim/nanosphere.hpp"
#include "plexsim/quantum.hpp"

namespace plexsim::config {

inline constexpr int schema_version = 1;

enum class QuantumSource { manual, sphere };
enum class EmitterTracking { fixed, dark, optimal };
enum class DriveTracking { fixed, lp };
enum class QuantumSolver { weak_pump, lindblad };

struct QuantumSection {
  quantum::QuantumParams params;
  double drive_amplitude = 1e-4;  // max(|ℰ_E|, |ℰ_B|), eV
  int n_B = 2;
  int n_D = 2;
  QuantumSource source = QuantumSource::manual;
  EmitterTracking omega_E_mode = EmitterTracking::fixed;
  DriveTracking omega_L_mode = DriveTracking::fixed;
  QuantumSolver solver = QuantumSolver::weak_pump;
};

struct GridSection {
  double omega_start = 2.6;
  double omega_stop = 4.0;
  int omega_points = 701;
  double delta_E_start = -0.2;
  double delta_E_stop = 0.8;
  int delta_E_points = 201;
};

struct RunConfig {
  cmt::CmtParams cmt;
  double cmt_omega = 3.0;  // probe frequency for single-point evaluations
  nanosphere::SphereSystem sphere;
  double sphere_omega = 3.0;
  QuantumSection quantum;
  GridSection grid;

  RunConfig() {
    // The bright-mode dipole defaults to the one of the default sphere.
    const double w1 = nanosphere::mode_frequency(sphere.metal, sphere.eps_b, 1);
    const double rad = nanosphere::bright_radiative_decay(sphere.metal, sphere.eps_b, sphere.R, w1);
    quantum.params.mu_B = nanosphere::bright_dipole_moment(rad, w1, sphere.eps_b);
    quantum.params.with_drive_amplitude(quantum.drive_amplitude);
  }

  void validate() const;
};

// --- field registry -------------------------------------------------------

enum class FieldKind { real, integer, choice };

struct Field {
  std::string key;
  FieldKind kind;
  std::string unit;
  std::function<double(const RunConfig&)> get;     // numeric fields
  std::function<void(RunConfig&, double)> set;     // numeric fields
  std::vector<std::string> choices;                 // choice fields
  std::function<std::string(const RunConfig&)> get_text;
  std::function<void(RunConfig&, const std::string&)> set_text;
  bool serialized = true;  // aliases are settable but not written out
};

namespace detail {

template <class M>
Field real_field(std::string key, std::string unit, M member) {
  Field f{std::move(key), FieldKind::real, std::move(unit), {}, {}, {}, {}, {}, true};
  f.get = [member](const RunConfig& c) { return member(const_cast<RunConfig&>(c)); };
  f.set = [member](RunConfig& c, double v) { member(c) = v; };
  return f;
}

template <class M>
Field int_field(std::string key, M member) {
  Field f{std::move(key), FieldKind::integer, "", {}, {}, {}, {}, {}, true};
  f.get = [member](const RunConfig& c) { return static_cast<double>(member(const_cast<RunConfig&>(c))); };
  f.set = [member](RunConfig& c, double v) { member(c) = static_cast<int>(v); };
  return f;
}

template <class E, class M>
Field choice_field(std::string key, std::vector<std::string> names, M member) {
  Field f{std::move(key), FieldKind::choice, "", {}, {}, names, {}, {}, true};
  f.get_text = [member, names](const RunConfig& c) {
    return names[static_cast<std::size_t>(member(const_cast<RunConfig&>(c)))];
  };
  f.set_text = [member, names, key = f.key](RunConfig& c, const std::string& v) {
    const auto it = std::find(names.begin(), names.end(), v);
    if (it == names.end()) {
      std::string all;
      for (const auto& n : names) all += (all.empty() ? "" : "|") + n;
      throw ConfigError("key '" + key + "': value '" + v + "' is not one of " + all);
    }
    member(c) = static_cast<E>(it - names.begin());
  };
  return f;
}

}  // namespace detail

inline const std::vector<Field>& fields() {
  using detail::choice_field;
  using detail::int_field;
  using detail::real_field;
  static const std::vector<Field> table = [] {
    std::vector<Field> t;
#define PLEXSIM_REAL(key, unit, expr) t.push_back(real_field(key, unit, [](RunConfig& c) -> double& { return expr; }))
    PLEXSIM_REAL("cmt.omega_B", "eV", c.cmt.omega_B);
    PLEXSIM_REAL("cmt.omega_D", "eV", c.cmt.omega_D);
    PLEXSIM_REAL("cmt.omega_E", "eV", c.cmt.omega_E);
    PLEXSIM_REAL("cmt.gamma_B_rad", "eV", c.cmt.gamma_B_rad);
    PLEXSIM_REAL("cmt.gamma_B_nonrad", "eV", c.cmt.gamma_B_nonrad);
    PLEXSIM_REAL("cmt.gamma_D_rad", "eV", c.cmt.gamma_D_rad);
    PLEXSIM_REAL("cmt.gamma_D_nonrad", "eV", c.cmt.gamma_D_nonrad);
    PLEXSIM_REAL("cmt.gamma_E_rad", "eV", c.cmt.gamma_E_rad);
    PLEXSIM_REAL("cmt.gamma_E_nonrad", "eV", c.cmt.gamma_E_nonrad);
    PLEXSIM_REAL("cmt.g_B", "eV", c.cmt.g_B);
    PLEXSIM_REAL("cmt.g_D", "eV", c.cmt.g_D);
    PLEXSIM_REAL("cmt.omega", "eV", c.cmt_omega);
    {
      // δ_E = ω_E − ω_B, an alias that moves the emitter frequency.
      Field f{"cmt.delta_E", FieldKind::real, "eV", {}, {}, {}, {}, {}, false};
      f.get = [](const RunConfig& c) { return c.cmt.omega_E - c.cmt.omega_B; };
      f.set = [](RunConfig& c, double v) { c.cmt.omega_E = c.cmt.omega_B + v; };
      t.push_back(f);
    }
    PLEXSIM_REAL("sphere.R", "nm", c.sphere.R);
    PLEXSIM_REAL("sphere.h", "nm", c.sphere.h);
    PLEXSIM_REAL("sphere.eps_b", "", c.sphere.eps_b);
    PLEXSIM_REAL("sphere.eps_inf", "", c.sphere.metal.eps_inf);
    PLEXSIM_REAL("sphere.omega_p", "eV", c.sphere.metal.omega_p);
    PLEXSIM_REAL("sphere.gamma_p", "eV", c.sphere.metal.gamma_p);
    PLEXSIM_REAL("sphere.mu_E", "D", c.sphere.mu_E);
    PLEXSIM_REAL("sphere.omega_E", "eV", c.sphere.omega_E);
    t.push_back(int_field("sphere.n_max", [](RunConfig& c) -> int& { return c.sphere.n_max; }));
    PLEXSIM_REAL("sphere.omega", "eV", c.sphere_omega);
    PLEXSIM_REAL("quantum.omega_E", "eV", c.quantum.params.omega_E);
    PLEXSIM_REAL("quantum.omega_B", "eV", c.quantum.params.omega_B);
    PLEXSIM_REAL("quantum.omega_D", "eV", c.quantum.params.omega_D);
    PLEXSIM_REAL("quantum.gamma_E", "eV", c.quantum.params.gamma_E);
    PLEXSIM_REAL("quantum.gamma_B", "eV", c.quantum.params.gamma_B);
    PLEXSIM_REAL("quantum.gamma_D", "eV", c.quantum.params.gamma_D);
    PLEXSIM_REAL("quantum.g_B", "eV", c.quantum.params.g_B);
    PLEXSIM_REAL("quantum.g_D", "eV", c.quantum.params.g_D);
    PLEXSIM_REAL("quantum.mu_E", "D", c.quantum.params.mu_E);
    PLEXSIM_REAL("quantum.mu_B", "D", c.quantum.params.mu_B);
    PLEXSIM_REAL("quantum.mu_D", "D", c.quantum.params.mu_D);
    PLEXSIM_REAL("quantum.drive_amplitude", "eV", c.quantum.drive_amplitude);
    PLEXSIM_REAL("quantum.omega_L", "eV", c.quantum.params.omega_L);
    t.push_back(int_field("quantum.n_B", [](RunConfig& c) -> int& { return c.quantum.n_B; }));
    t.push_back(int_field("quantum.n_D", [](RunConfig& c) -> int& { return c.quantum.n_D; }));
    t.push_back(choice_field<QuantumSource>("quantum.source", {"manual", "sphere"},
                                            [](RunConfig& c) -> QuantumSource& { return c.quantum.source; }));
    t.push_back(choice_field<EmitterTracking>(
        "quantum.omega_E_mode", {"fixed", "dark", "optimal"},
        [](RunConfig& c) -> EmitterTracking& { return c.quantum.omega_E_mode; }));
    t.push_back(choice_field<DriveTracking>("quantum.omega_L_mode", {"fixed", "lp"},
                                            [](RunConfig& c) -> DriveTracking& { return c.quantum.omega_L_mode; }));
    t.push_back(choice_field<QuantumSolver>("quantum.solver", {"weak_pump", "lindblad"},
                                            [](RunConfig& c) -> QuantumSolver& { return c.quantum.solver; }));
    PLEXSIM_REAL("grid.omega_start", "eV", c.grid.omega_start);
    PLEXSIM_REAL("grid.omega_stop", "eV", c.grid.omega_stop);
    t.push_back(int_field("grid.omega_points", [](RunConfig& c) -> int& { return c.grid.omega_points; }));
    PLEXSIM_REAL("grid.delta_E_start", "eV", c.grid.delta_E_start);
    PLEXSIM_REAL("grid.delta_E_stop", "eV", c.grid.delta_E_stop);
    t.push_back(int_field("grid.delta_E_points", [](RunConfig& c) -> int& { return c.grid.delta_E_points; }));
#undef PLEXSIM_REAL
    return t;
  }();
  return table;
}

/// Levenshtein distance, used for "did you mean" suggestions.
inline std::size_t edit_distance(std::string_view a, std::string_view b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

inline std::string nearest_key(std::string_view key) {
  std::string best;
  std::size_t best_d = static_cast<std::size_t>(-1);
  // Compare both the full dotted key and the bare leaf name.
  for (const auto& f : fields()) {
    const std::string_view leaf = std::string_view(f.key).substr(f.key.find('.') + 1);
    const std::size_t d = std::min(edit_distance(key, f.key), edit_distance(key, leaf));
    if (d < best_d) {
      best_d = d;
      best = f.key;
    }
  }
  return best;
}

inline const Field* find_field(std::string_view key) {
  for (const auto& f : fields())
    if (f.key == key) return &f;
  return nullptr;
}

inline const Field& require_field(std::string_view key) {
  if (const Field* f = find_field(key)) return *f;
  throw ConfigError("unknown key '" + std::string(key) + "' (did you mean '" + nearest_key(key) + "'?)");
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

inline double parse_number(std::string_view text, const std::string& key) {
  text = trim(text);
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, v);
  if (res.ec != std::errc{} || res.ptr != end || text.empty())
    throw ConfigError("key '" + key + "': '" + std::string(text) + "' is not a number");
  return v;
}

/// Assigns one key from its textual value; throws ConfigError on unknown
/// keys or malformed values.
inline void set_value(RunConfig& c, std::string_view key, std::string_view value) {
  const Field& f = require_field(key);
  value = trim(value);
  switch (f.kind) {
    case FieldKind::choice:
      f.set_text(c, std::string(value));
      break;
    case FieldKind::integer: {
      const double v = parse_number(value, f.key);
      if (v != std::floor(v)) throw ConfigError("key '" + f.key + "': expected an integer");
      f.set(c, v);
      break;
    }
    case FieldKind::real:
      f.set(c, parse_number(value, f.key));
      break;
  }
}

inline void set_value(RunConfig& c, std::string_view key, double value) {
  const Field& f = require_field(key);
  if (f.kind == FieldKind::choice) throw ConfigError("key '" + f.key + "' is not numeric");
  f.set(c, value);
}

inline double get_value(const RunConfig& c, std::string_view key) {
  const Field& f = require_field(key);
  if (f.kind == FieldKind::choice) throw ConfigError("key '" + f.key + "' is not numeric");
  return f.get(c);
}

inline void RunConfig::validate() const {
  auto wrap = [](const char* section, auto&& fn) {
    try {
      fn();
    } catch (const InvalidInput& e) {
      throw ConfigError(std::string("validation failed in [") + section + "]: " + e.what());
    }
  };
  wrap("cmt", [&] { cmt.validate(); });
  wrap("sphere", [&] { sphere.validate(); });
  wrap("quantum", [&] {
    quantum.params.validate();
    quantum::HilbertSpace(quantum.n_B, quantum.n_D);
  });
  if (!(quantum.drive_amplitude >= 0.0)) throw ConfigError("quantum.drive_amplitude must be >= 0");
  if (quantum.n_B < 2 || quantum.n_D < 2)
    throw ConfigError("quantum.n_B and quantum.n_D must be >= 2 for second-order correlations");
  if (!(grid.omega_stop > grid.omega_start) || grid.omega_points < 2)
    throw ConfigError("grid: omega range needs start < stop and at least 2 points");
  if (!(grid.delta_E_stop > grid.delta_E_start) || grid.delta_E_points < 2)
    throw ConfigError("grid: delta_E range needs start < stop and at least 2 points");
  if (!(cmt_omega > 0.0) || !(sphere_omega > 0.0)) throw ConfigError("probe frequencies must be > 0");
}

/// Parses the key/value text. `origin` names the source in error messages.
inline RunConfig parse_config(std::string_view text, const std::string& origin = "<config>") {
  RunConfig c;
  std::string section;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = origin + ":" + std::to_string(line_no) + ": ";
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where + "unterminated section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(where + "expected 'key = value'");
    std::string key(trim(line.substr(0, eq)));
    const std::string_view value = line.substr(eq + 1);
    if (key.empty()) throw ConfigError(where + "empty key");
    try {
      if (key == "schema_version" && section.empty()) {
        if (parse_number(value, key) != schema_version)
          throw ConfigError("unsupported schema_version (expected " + std::to_string(schema_version) + ")");
        continue;
      }
      if (!section.empty() && key.find('.') == std::string::npos) key = section + "." + key;
      set_value(c, key, value);
    } catch (const ConfigError& e) {
      throw ConfigError(where + e.what());
    }
  }
  c.quantum.params.with_drive_amplitude(c.quantum.drive_amplitude);
  c.validate();
  return c;
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

/// Applies "key=value" overrides, then re-derives dependent values and validates.
inline void apply_overrides(RunConfig& c, const std::vector<std::string>& overrides) {
  for (const auto& o : overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos) throw ConfigError("override '" + o + "' is not key=value");
    set_value(c, trim(std::string_view(o).substr(0, eq)), std::string_view(o).substr(eq + 1));
  }
  c.quantum.params.with_drive_amplitude(c.quantum.drive_amplitude);
  c.validate();
}

inline std::string format_real(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

inline std::string value_text(const RunConfig& c, const Field& f) {
  if (f.kind == FieldKind::choice) return f.get_text(c);
  if (f.kind == FieldKind::integer) return std::to_string(static_cast<long long>(f.get(c)));
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, f.get(c));  // shortest round-trip form
  return std::string(buf, res.ptr);
}

/// Writes every serializable key; `parse_config(serialize_config(c))` reproduces `c`.
inline std::string serialize_config(const RunConfig& c) {
  std::ostringstream os;
  os << "schema_version = " << schema_version << "\n";
  std::string section;
  for (const auto& f : fields()) {
    if (!f.serialized) continue;
    const auto dot = f.key.find('.');
    const std::string sec = f.key.substr(0, dot);
    if (sec != section) {
      section = sec;
      os << "\n[" << section << "]\n";
    }
    os << f.key.substr(dot + 1) << " = " << value_text(c, f) << "\n";
  }
  return os.str();
}

// --- model parameter resolution ------------------------------------------

/// Quantum parameters with the tracking rules applied. When the source is
/// the sphere, couplings, frequencies, widths and μ_B come from the
/// nanosphere model (`effective` may be passed in to reuse a cached fit).
inline quantum::QuantumParams resolve_quantum(const RunConfig& c,
                                              const nanosphere::EffectiveParams* effective = nullptr) {
  quantum::QuantumParams q = c.quantum.params;
  if (c.quantum.source == QuantumSource::sphere) {
    const nanosphere::EffectiveParams e = effective ? *effective : nanosphere::effective_parameters(c.sphere);
    q.omega_B = e.omega_B;
    q.omega_D = e.omega_D;
    q.gamma_B = e.gamma_B;
    q.gamma_D = e.gamma_D;
    q.g_B = e.g_B;
    q.g_D = e.g_D;
    q.mu_B = e.mu_B;
    q.mu_E = c.sphere.mu_E;
    q.omega_E = c.sphere.omega_E;
  }
  switch (c.quantum.omega_E_mode) {
    case EmitterTracking::fixed: break;
    case EmitterTracking::dark: q.omega_E = q.omega_D; break;
    case EmitterTracking::optimal:
      q.omega_E = q.omega_B + analytics::optimal_detuning(q.g_D, q.omega_B, q.omega_D);
      break;
  }
  q.with_drive_amplitude(c.quantum.drive_amplitude);
  if (c.quantum.omega_L_mode == DriveTracking::lp)
    q.omega_L = cmt::eigenmodes(quantum::to_cmt_params(q)).lower().real();
  return q;
}

}  // namespace plexsim::config
