#pragma once

// Parameter sweeps over the run configuration. An axis moves one or more
// configuration keys linearly and together; an optional second axis is the
// inner loop. Each grid point is a full model evaluation, so every preset is
// just a sweep with fixed ranges.
//
// Sweep files use the same key/value syntax as configs:
//
//   model = quantum
//   axis1.target = quantum.g_D, quantum.g_B
//   axis1.start  = 0, 0
//   axis1.stop   = 1, 0.3
//   axis1.points = 21
//   axis2.target = quantum.omega_L
//   axis2.start  = 2.0
//   axis2.stop   = 4.2
//   axis2.points = 51
//   output = figS1.csv

#include <array>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "plexsim/analytics.hpp"
#include "plexsim/cmt.hpp"
#include "plexsim/config.hpp"
#include "plexsim/nanosphere.hpp"
#include "plexsim/quantum.hpp"

#ifndef PLEXSIM_VERSION
#define PLEXSIM_VERSION "unknown"
#endif

namespace plexsim::sweep {

enum class Model { cmt, nanosphere, quantum };

inline const char* model_name(Model m) {
  switch (m) {
    case Model::cmt: return "cmt";
    case Model::nanosphere: return "nanosphere";
    case Model::quantum: return "quantum";
  }
  return "?";
}

inline Model parse_model(const std::string& s) {
  if (s == "cmt") return Model::cmt;
  if (s == "nanosphere") return Model::nanosphere;
  if (s == "quantum") return Model::quantum;
  throw ConfigError("model '" + s + "' is not one of cmt|nanosphere|quantum");
}

struct Axis {
  std::vector<std::string> targets;
  std::vector<double> start;
  std::vector<double> stop;
  int points = 0;

  double value(std::size_t target, int k) const {
    return start[target] + (stop[target] - start[target]) * static_cast<double>(k) / static_cast<double>(points - 1);
  }
};

struct SweepSpec {
  Model model = Model::cmt;
  Axis axis1;
  std::optional<Axis> axis2;
  std::string output;
  std::string preset;

  /// Throws ConfigError before any computation if the spec is unusable.
  void validate(const config::RunConfig& c) const {
    auto check_axis = [&](const Axis& a, const char* name) {
      if (a.targets.empty()) throw ConfigError(std::string(name) + ": no target");
      if (a.start.size() != a.targets.size() || a.stop.size() != a.targets.size())
        throw ConfigError(std::string(name) + ": start/stop need one value per target");
      if (a.points < 2) throw ConfigError(std::string(name) + ": points must be >= 2");
      if (!(a.stop[0] > a.start[0])) throw ConfigError(std::string(name) + ": start must be < stop");
      for (const auto& t : a.targets) {
        const config::Field& f = config::require_field(t);
        if (f.kind == config::FieldKind::choice) throw ConfigError(std::string(name) + ": '" + t + "' is not numeric");
        (void)config::get_value(c, t);
      }
    };
    check_axis(axis1, "axis1");
    if (axis2) check_axis(*axis2, "axis2");
  }

  std::size_t size() const { return static_cast<std::size_t>(axis1.points) * (axis2 ? axis2->points : 1); }
};

namespace detail {

inline std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    const std::size_t comma = std::min(s.find(',', pos), s.size());
    out.emplace_back(config::trim(s.substr(pos, comma - pos)));
    pos = comma + 1;
  }
  return out;
}

inline std::vector<double> parse_list(std::string_view s, const std::string& key) {
  std::vector<double> out;
  for (const auto& item : split_list(s)) out.push_back(config::parse_number(item, key));
  return out;
}

}  // namespace detail

inline SweepSpec parse_sweep(std::string_view text, const std::string& origin = "<sweep>") {
  SweepSpec spec;
  Axis a1, a2;
  bool has_a2 = false, has_model = false;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = config::trim(line);
    if (line.empty()) continue;
    const std::string where = origin + ":" + std::to_string(line_no) + ": ";
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(where + "expected 'key = value'");
    const std::string key(config::trim(line.substr(0, eq)));
    const std::string_view value = config::trim(line.substr(eq + 1));
    try {
      if (key == "model") {
        spec.model = parse_model(std::string(value));
        has_model = true;
      } else if (key == "output") {
        spec.output = std::string(value);
      } else if (key == "preset") {
        spec.preset = std::string(value);
      } else if (key.rfind("axis1.", 0) == 0 || key.rfind("axis2.", 0) == 0) {
        Axis& a = key[4] == '1' ? a1 : a2;
        if (key[4] == '2') has_a2 = true;
        const std::string field = key.substr(6);
        if (field == "target") a.targets = detail::split_list(value);
        else if (field == "start") a.start = detail::parse_list(value, key);
        else if (field == "stop") a.stop = detail::parse_list(value, key);
        else if (field == "points") {
          const double p = config::parse_number(value, key);
          if (p != std::floor(p)) throw ConfigError("'" + key + "' must be an integer");
          a.points = static_cast<int>(p);
        } else
          throw ConfigError("unknown sweep key '" + key + "'");
      } else {
        throw ConfigError("unknown sweep key '" + key + "'");
      }
    } catch (const ConfigError& e) {
      throw ConfigError(where + e.what());
    }
  }
  if (!has_model) throw ConfigError(origin + ": missing 'model'");
  spec.axis1 = a1;
  if (has_a2) spec.axis2 = a2;
  return spec;
}

inline SweepSpec load_sweep(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open sweep file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_sweep(ss.str(), path);
}

// --- model evaluation ------------------------------------------------------

struct Column {
  std::string name;
  std::string unit;
};

inline std::vector<Column> model_columns(Model m) {
  switch (m) {
    case Model::cmt: {
      std::vector<Column> cols = {{"s_minus_re", "sqrt(eV)"}, {"s_minus_im", "sqrt(eV)"}, {"intensity", "a.u."}};
      for (const char* p : {"LP", "MP", "UP"}) {
        cols.push_back({std::string(p) + "_re", "eV"});
        cols.push_back({std::string(p) + "_im", "eV"});
      }
      for (const char* p : {"LP", "MP", "UP"})
        for (const char* b : {"B", "D", "E"}) cols.push_back({std::string("hopfield_") + p + "_" + b, ""});
      cols.push_back({"omega_bright", "eV"});
      return cols;
    }
    case Model::nanosphere:
      return {{"J_total", "eV"},    {"J_dipole", "eV"}, {"J_dark", "eV"},  {"purcell", ""},
              {"g_B", "eV"},        {"g_D", "eV"},      {"omega_B", "eV"}, {"omega_D", "eV"},
              {"gamma_B", "eV"},    {"gamma_D", "eV"},  {"mu_B", "D"},     {"gamma_E_rad", "eV"},
              {"gamma_B_rad", "eV"}, {"truncation_warning", "flag"}};
    case Model::quantum:
      return {{"omega_L", "eV"}, {"S", "D^2"},    {"g2", ""},      {"weak_pump_ok", "flag"},
              {"omega_E", "eV"}, {"g_B", "eV"},   {"g_D", "eV"},   {"LP_re", "eV"},
              {"MP_re", "eV"},   {"UP_re", "eV"}};
  }
  return {};
}

/// Memoizes pseudomode fits, which dominate the cost of sphere-backed points.
class EffectiveCache {
 public:
  nanosphere::EffectiveParams get(const nanosphere::SphereSystem& s) {
    const Key k{s.R, s.h, s.eps_b, s.metal.eps_inf, s.metal.omega_p, s.metal.gamma_p, s.mu_E, s.omega_E,
                static_cast<double>(s.n_max)};
    {
      std::lock_guard lock(mutex_);
      if (auto it = cache_.find(k); it != cache_.end()) return it->second;
    }
    const auto e = nanosphere::effective_parameters(s);
    std::lock_guard lock(mutex_);
    cache_.emplace(k, e);
    return e;
  }

 private:
  using Key = std::array<double, 9>;
  std::mutex mutex_;
  std::map<Key, nanosphere::EffectiveParams> cache_;
};

struct RowResult {
  std::vector<double> values;
  std::string error;
};

inline constexpr double nan = std::numeric_limits<double>::quiet_NaN();

inline RowResult evaluate_cmt(const config::RunConfig& c) {
  RowResult r;
  r.values.assign(model_columns(Model::cmt).size(), nan);
  const auto resp = cmt::steady_state_response(c.cmt, c.cmt_omega);
  r.values[0] = resp.s_minus.real();
  r.values[1] = resp.s_minus.imag();
  r.values[2] = std::norm(resp.s_minus);
  const EigenSet es = cmt::eigenmodes(c.cmt);
  for (int k = 0; k < 3; ++k) {
    r.values[3 + 2 * k] = es.values[k].real();
    r.values[4 + 2 * k] = es.values[k].imag();
    const auto w = hopfield(es.vectors[k]);
    for (int j = 0; j < 3; ++j) r.values[9 + 3 * k + j] = w[j];
  }
  try {
    r.values[18] = analytics::bright_rabi_splitting(c.cmt.g_B, c.cmt.g_D, c.cmt.omega_D, c.cmt.omega_E);
  } catch (const UndefinedLimit&) {
  }
  return r;
}

inline RowResult evaluate_nanosphere(const config::RunConfig& c, EffectiveCache& cache) {
  RowResult r;
  const auto ladder = nanosphere::mode_ladder(c.sphere);
  const auto j = nanosphere::spectral_density(ladder, c.sphere_omega);
  const auto e = cache.get(c.sphere);
  r.values = {j.total,   j.dipole,  j.dark,    nanosphere::purcell_factor(c.sphere, j.total, c.sphere_omega),
              e.g_B,     e.g_D,     e.omega_B, e.omega_D,
              e.gamma_B, e.gamma_D, e.mu_B,    e.gamma_E_rad,
              e.gamma_B_rad, e.truncation_warning ? 1.0 : 0.0};
  return r;
}

inline RowResult evaluate_quantum(const config::RunConfig& c, EffectiveCache& cache) {
  RowResult r;
  r.values.assign(model_columns(Model::quantum).size(), nan);
  std::optional<nanosphere::EffectiveParams> eff;
  if (c.quantum.source == config::QuantumSource::sphere) eff = cache.get(c.sphere);
  const quantum::QuantumParams q = config::resolve_quantum(c, eff ? &*eff : nullptr);
  const quantum::HilbertSpace space(c.quantum.n_B, c.quantum.n_D);
  r.values[0] = q.omega_L;
  r.values[4] = q.omega_E;
  r.values[5] = q.g_B;
  r.values[6] = q.g_D;
  const EigenSet es = cmt::eigenmodes(quantum::to_cmt_params(q));
  for (int k = 0; k < 3; ++k) r.values[7 + k] = es.values[k].real();

  if (c.quantum.solver == config::QuantumSolver::lindblad) {
    const auto rho = quantum::lindblad_steady_state(q, space);
    const auto o = quantum::observables_from_rho(rho, q.mu_E, q.mu_B);
    r.values[1] = o.S;
    r.values[2] = o.g2;
    r.values[3] = 1.0;
  } else {
    const quantum::ScanPoint pt = quantum::scan_point(q, q.omega_L, space);
    r.values[1] = pt.S;
    r.values[2] = pt.g2;
    r.values[3] = pt.weak_pump_ok ? 1.0 : 0.0;
    r.error = pt.error;
  }
  return r;
}

// --- output ----------------------------------------------------------------

struct Table {
  std::vector<Column> columns;  // axis columns first, then observables, then "error"
  std::vector<std::vector<double>> rows;
  std::vector<std::string> errors;
  std::vector<double> seconds;  // wall clock per point
  std::size_t failed = 0;
};

/// Fixed 9-significant-digit formatting; NaN is written as "nan".
inline std::string format_value(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

/// Keeps an error message inside one unquoted CSV field.
inline std::string sanitize(std::string s) {
  for (char& ch : s) {
    if (ch == ',') ch = ';';
    else if (ch == '\n' || ch == '\r') ch = ' ';
    else if (ch == '"') ch = '\'';
  }
  return s;
}

inline std::string to_csv(const Table& t, const std::string& title) {
  std::string out;
  out += "# plexsim " + title + "\n";
  out += "# columns: ";
  for (std::size_t k = 0; k < t.columns.size(); ++k) out += (k ? "," : "") + t.columns[k].name;
  out += ",error\n# units: ";
  for (std::size_t k = 0; k < t.columns.size(); ++k) out += (k ? "," : "") + t.columns[k].unit;
  out += ",\n";
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    for (std::size_t k = 0; k < t.rows[r].size(); ++k) out += (k ? "," : "") + format_value(t.rows[r][k]);
    out += "," + sanitize(t.errors[r]) + "\n";
  }
  return out;
}

inline nlohmann::json to_json(const Table& t) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    nlohmann::json row = nlohmann::json::object();
    for (std::size_t k = 0; k < t.columns.size(); ++k) {
      const double v = t.rows[r][k];
      row[t.columns[k].name] = std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
    }
    row["error"] = t.errors[r];
    rows.push_back(std::move(row));
  }
  return rows;
}

inline int default_threads() {
  if (const char* env = std::getenv("PLEXSIM_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

/// Evaluates every grid point (axis1 outer, axis2 inner). Rows are stored
/// by grid index regardless of which worker produced them.
inline Table run_sweep(const SweepSpec& spec, const config::RunConfig& base, int threads = 1) {
  spec.validate(base);
  Table t;
  for (const auto& tgt : spec.axis1.targets) t.columns.push_back({tgt, config::require_field(tgt).unit});
  if (spec.axis2)
    for (const auto& tgt : spec.axis2->targets) t.columns.push_back({tgt, config::require_field(tgt).unit});
  for (auto& col : model_columns(spec.model)) t.columns.push_back(col);

  const std::size_t n = spec.size();
  const int inner = spec.axis2 ? spec.axis2->points : 1;
  t.rows.assign(n, {});
  t.errors.assign(n, {});
  t.seconds.assign(n, 0.0);
  EffectiveCache cache;

  // Lindblad points hold a dim^2 x dim^2 dense matrix; keep to one worker.
  if (spec.model == Model::quantum && base.quantum.solver == config::QuantumSolver::lindblad) threads = 1;

  auto work = [&](std::size_t idx) {
    const auto t0 = std::chrono::steady_clock::now();
    const int i = static_cast<int>(idx / inner);
    const int j = static_cast<int>(idx % inner);
    config::RunConfig c = base;
    std::vector<double> axis_values;
    for (std::size_t k = 0; k < spec.axis1.targets.size(); ++k) {
      const double v = spec.axis1.value(k, i);
      config::set_value(c, spec.axis1.targets[k], v);
      axis_values.push_back(v);
    }
    if (spec.axis2)
      for (std::size_t k = 0; k < spec.axis2->targets.size(); ++k) {
        const double v = spec.axis2->value(k, j);
        config::set_value(c, spec.axis2->targets[k], v);
        axis_values.push_back(v);
      }
    RowResult r;
    try {
      c.validate();
      switch (spec.model) {
        case Model::cmt: r = evaluate_cmt(c); break;
        case Model::nanosphere: r = evaluate_nanosphere(c, cache); break;
        case Model::quantum: r = evaluate_quantum(c, cache); break;
      }
    } catch (const std::exception& e) {
      r.values.assign(model_columns(spec.model).size(), nan);
      r.error = e.what();
    }
    axis_values.insert(axis_values.end(), r.values.begin(), r.values.end());
    t.rows[idx] = std::move(axis_values);
    t.errors[idx] = std::move(r.error);
    t.seconds[idx] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  };

  threads = std::max(1, std::min<int>(threads, static_cast<int>(n)));
  if (threads == 1) {
    for (std::size_t k = 0; k < n; ++k) work(k);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < threads; ++w)
      pool.emplace_back([&] {
        for (std::size_t k = next++; k < n; k = next++) work(k);
      });
    for (auto& th : pool) th.join();
  }
  for (const auto& e : t.errors)
    if (!e.empty()) ++t.failed;
  return t;
}

inline nlohmann::json spec_json(const SweepSpec& s) {
  auto axis = [](const Axis& a) {
    return nlohmann::json{{"target", a.targets}, {"start", a.start}, {"stop", a.stop}, {"points", a.points}};
  };
  nlohmann::json j{{"model", model_name(s.model)}, {"axis1", axis(s.axis1)}, {"output", s.output}};
  if (s.axis2) j["axis2"] = axis(*s.axis2);
  if (!s.preset.empty()) j["preset"] = s.preset;
  return j;
}

inline nlohmann::json config_json(const config::RunConfig& c) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& f : config::fields()) {
    if (!f.serialized) continue;
    if (f.kind == config::FieldKind::choice) j[f.key] = f.get_text(c);
    else if (f.kind == config::FieldKind::integer) j[f.key] = static_cast<long long>(f.get(c));
    else j[f.key] = f.get(c);
  }
  return j;
}

/// Metadata written next to every data file.
inline nlohmann::json sidecar(const SweepSpec& spec, const config::RunConfig& c, const Table& t) {
  return nlohmann::json{{"version", PLEXSIM_VERSION},
                        {"schema_version", config::schema_version},
                        {"sweep", spec_json(spec)},
                        {"config", config_json(c)},
                        {"rows", t.rows.size()},
                        {"failed_points", t.failed},
                        {"wall_clock_s", t.seconds}};
}

enum class Format { csv, json };

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << text;
}

/// Writes the data file (CSV or JSON) and its `<path>.json` sidecar.
inline void write_outputs(const std::string& path, const SweepSpec& spec, const config::RunConfig& c,
                          const Table& t, Format fmt) {
  if (fmt == Format::csv) write_text(path, to_csv(t, spec.preset.empty() ? model_name(spec.model) : spec.preset));
  else write_text(path, to_json(t).dump(1) + "\n");
  write_text(path + ".json", sidecar(spec, c, t).dump(1) + "\n");
}

}  // namespace plexsim::sweep
