#pragma once

// Figure presets. Each preset is a fixed set of configuration overrides and
// one or more sweeps at fixed resolution, plus a matplotlib script that
// reads the resulting CSVs.

#include <filesystem>
#include <string>
#include <vector>

#include "plexsim/config.hpp"
#include "plexsim/nanosphere.hpp"
#include "plexsim/sweep.hpp"

namespace plexsim::presets {

struct PresetOutput {
  std::string suffix;                  // appended to the preset name for the file stem
  std::vector<std::string> overrides;  // applied on top of the preset overrides
  sweep::SweepSpec spec;
};

struct Preset {
  std::string name;
  std::string description;
  std::vector<std::string> overrides;
  std::vector<PresetOutput> outputs;
  bool write_modes = false;  // also emit the multipole ladder
  std::string plot;          // python body; CSV stems are available as `files`
};

namespace detail {

inline sweep::Axis axis(std::vector<std::string> targets, std::vector<double> start, std::vector<double> stop,
                        int points) {
  return sweep::Axis{std::move(targets), std::move(start), std::move(stop), points};
}

inline sweep::SweepSpec spec(sweep::Model m, sweep::Axis a1, std::optional<sweep::Axis> a2 = std::nullopt) {
  sweep::SweepSpec s;
  s.model = m;
  s.axis1 = std::move(a1);
  s.axis2 = std::move(a2);
  return s;
}

inline const char* map_plot = R"(d = load(files[0])
x, y = sorted(set(d[cols[0]])), sorted(set(d[cols[1]]))
z = d[value].reshape(len(x), len(y))
fig, ax = plt.subplots()
m = ax.pcolormesh(y, x, np.log10(np.maximum(z, 1e-12)) if log else z, shading="auto")
fig.colorbar(m, ax=ax, label=value)
ax.set_xlabel(cols[1]); ax.set_ylabel(cols[0])
)";

inline const char* line_plot = R"(fig, ax = plt.subplots()
for f in files:
    d = load(f)
    for v in values:
        ax.plot(d[cols[0]], d[v], label=f + ":" + v)
ax.set_xlabel(cols[0]); ax.legend()
)";

inline std::string map_script(const std::string& value, bool log) {
  return "value = \"" + value + "\"\nlog = " + (log ? "True" : "False") + "\n" + map_plot;
}

inline std::string line_script(std::initializer_list<const char*> values) {
  std::string s = "values = [";
  for (const char* v : values) s += std::string("\"") + v + "\", ";
  return s + "]\n" + line_plot;
}

}  // namespace detail

inline const std::vector<Preset>& all() {
  using sweep::Model;
  using detail::axis;
  using detail::spec;
  static const std::vector<Preset> table = [] {
    std::vector<Preset> t;
    const std::vector<std::string> s1 = {"quantum.omega_E=3.5", "quantum.omega_D=3.5", "quantum.omega_B=3",
                                         "quantum.gamma_B=0.2", "quantum.gamma_D=0.2", "quantum.gamma_E=0.1"};
    const auto s1_axes = [] {
      return spec(Model::quantum, axis({"quantum.g_D", "quantum.g_B"}, {0, 0}, {1, 0.3}, 41),
                  axis({"quantum.omega_L"}, {2.0}, {4.6}, 261));
    };

    t.push_back({"fig1c", "spectral density of a 10 nm sphere with the emitter 1 nm from the surface",
                 {"sphere.R=5", "sphere.h=1"},
                 {{"", {}, spec(Model::nanosphere, axis({"sphere.omega"}, {2.6}, {4.0}, 701))}},
                 true,
                 detail::line_script({"J_total", "J_dipole", "J_dark"})});
    t.push_back({"fig2a", "three-mode scattering spectrum with and without the dark coupling",
                 {},
                 {{"", {}, spec(Model::cmt, axis({"cmt.omega"}, {2.6}, {4.0}, 701))},
                  {"_gD0", {"cmt.g_D=0"}, spec(Model::cmt, axis({"cmt.omega"}, {2.6}, {4.0}, 701))}},
                 false,
                 detail::line_script({"intensity"})});
    t.push_back({"fig2b", "scattering map versus emitter detuning, with eigenvalue overlay",
                 {},
                 {{"", {}, spec(Model::cmt, axis({"cmt.delta_E"}, {-0.2}, {0.8}, 201),
                                axis({"cmt.omega"}, {2.6}, {4.0}, 601))}},
                 false,
                 detail::map_script("intensity", false)});
    t.push_back({"fig2c", "Hopfield fractions of the polaritons versus emitter detuning",
                 {},
                 {{"", {}, spec(Model::cmt, axis({"cmt.delta_E"}, {-0.2}, {0.8}, 201))}},
                 false,
                 detail::line_script({"hopfield_LP_B", "hopfield_LP_D", "hopfield_LP_E", "hopfield_MP_B",
                                      "hopfield_MP_D", "hopfield_MP_E"})});
    t.push_back({"fig3a", "scattering map versus sphere radius, emitter at the dark mode, h = 1.5 nm",
                 {"quantum.source=sphere", "quantum.omega_E_mode=dark", "sphere.h=1.5"},
                 {{"", {}, spec(Model::quantum, axis({"sphere.R"}, {5}, {20}, 31),
                                axis({"quantum.omega_L"}, {2.4}, {4.0}, 321))}},
                 false,
                 detail::map_script("S", true)});
    t.push_back({"fig3b", "g2(0) on the lower polariton versus sphere radius, h = 1.5 nm",
                 {"quantum.source=sphere", "quantum.omega_E_mode=dark", "quantum.omega_L_mode=lp", "sphere.h=1.5"},
                 {{"", {}, spec(Model::quantum, axis({"sphere.R"}, {5}, {20}, 61))}},
                 false,
                 detail::line_script({"g2"})});
    t.push_back({"fig3c", "scattering map versus emitter-surface distance, R = 5 nm",
                 {"quantum.source=sphere", "quantum.omega_E_mode=dark", "sphere.R=5"},
                 {{"", {}, spec(Model::quantum, axis({"sphere.h"}, {1}, {5}, 41),
                                axis({"quantum.omega_L"}, {2.4}, {4.0}, 321))}},
                 false,
                 detail::map_script("S", true)});
    t.push_back({"fig3d", "g2(0) on the lower polariton versus emitter-surface distance, R = 5 nm",
                 {"quantum.source=sphere", "quantum.omega_E_mode=dark", "quantum.omega_L_mode=lp", "sphere.R=5"},
                 {{"", {}, spec(Model::quantum, axis({"sphere.h"}, {1}, {5}, 81))}},
                 false,
                 detail::line_script({"g2"})});
    t.push_back({"figS1", "manual Hamiltonian, couplings co-swept, emitter at the dark mode",
                 s1,
                 {{"", {}, s1_axes()}},
                 false,
                 detail::map_script("S", true) + "plt.figure()\n" + detail::map_script("g2", false)});
    auto s2 = s1;
    s2.push_back("quantum.omega_E_mode=optimal");
    t.push_back({"figS2", "as figS1 with the emitter held at the optimal detuning",
                 s2,
                 {{"", {}, s1_axes()}},
                 false,
                 detail::map_script("S", true) + "plt.figure()\n" + detail::map_script("g2", false)});
    return t;
  }();
  return table;
}

inline const Preset& find(const std::string& name) {
  for (const auto& p : all())
    if (p.name == name) return p;
  std::string known;
  for (const auto& p : all()) known += (known.empty() ? "" : ", ") + p.name;
  throw ConfigError("unknown preset '" + name + "' (known: " + known + ")");
}

/// Config and sweep for one preset output, fully resolved.
struct Resolved {
  config::RunConfig config;
  sweep::SweepSpec spec;
  std::string stem;
};

inline std::vector<Resolved> resolve(const Preset& p, const config::RunConfig& base) {
  std::vector<Resolved> out;
  for (const auto& o : p.outputs) {
    Resolved r{base, o.spec, p.name + o.suffix};
    config::apply_overrides(r.config, p.overrides);
    config::apply_overrides(r.config, o.overrides);
    r.spec.preset = p.name;
    r.spec.output = r.stem + ".csv";
    out.push_back(std::move(r));
  }
  return out;
}

inline std::string modes_csv(const nanosphere::SphereSystem& s, int n_show = 20) {
  const auto ladder = nanosphere::mode_ladder(s);
  std::string out = "# plexsim multipole ladder\n# columns: n,omega_n,gamma_n,g_n,error\n# units: ,eV,eV,eV,\n";
  for (const auto& m : ladder) {
    if (m.n > n_show) break;
    out += std::to_string(m.n) + "," + sweep::format_value(m.omega) + "," + sweep::format_value(m.gamma) + "," +
           sweep::format_value(m.g) + ",\n";
  }
  return out;
}

inline std::string plot_script(const Preset& p, const std::vector<Resolved>& parts) {
  std::string files;
  for (const auto& r : parts) files += "\"" + r.spec.output + "\", ";
  std::string cols;
  const auto& s = parts.front().spec;
  cols += "\"" + s.axis1.targets.front() + "\", ";
  if (s.axis2) cols += "\"" + s.axis2->targets.front() + "\", ";
  return "# " + p.description + "\n"
         "import csv\nimport numpy as np\nimport matplotlib.pyplot as plt\n\n"
         "def load(path):\n"
         "    with open(path) as fh:\n"
         "        lines = fh.read().splitlines()\n"
         "    names = next(l for l in lines if l.startswith(\"# columns: \"))[11:].split(\",\")\n"
         "    rows = list(csv.reader(l for l in lines if not l.startswith(\"#\")))\n"
         "    return {n: np.array([float(r[i]) if r[i] else np.nan for r in rows]) if n != \"error\" else\n"
         "            [r[i] for r in rows] for i, n in enumerate(names)}\n\n"
         "files = [" + files + "]\ncols = [" + cols + "]\n" + p.plot +
         "plt.savefig(\"" + p.name + ".png\", dpi=150)\n";
}

struct PresetRun {
  std::vector<std::string> written;
  std::size_t failed = 0;
};

/// Runs every sweep of the preset and writes its data, sidecars and plot
/// script into `dir`. Module errors are rethrown with the preset name.
inline PresetRun run_preset(const std::string& name, const config::RunConfig& base,
                            const std::filesystem::path& dir, int threads = 1,
                            sweep::Format fmt = sweep::Format::csv) {
  const Preset& p = find(name);
  std::vector<Resolved> parts;
  try {
    parts = resolve(p, base);
  } catch (const ConfigError& e) {
    throw ConfigError("preset " + name + ": " + e.what());
  }
  std::filesystem::create_directories(dir);
  PresetRun run;
  for (auto& r : parts) {
    sweep::Table table;
    try {
      table = sweep::run_sweep(r.spec, r.config, threads);
    } catch (const ConfigError& e) {
      throw ConfigError("preset " + name + ": " + e.what());
    }
    const std::string ext = fmt == sweep::Format::csv ? ".csv" : ".json";
    r.spec.output = r.stem + ext;
    const auto path = (dir / r.spec.output).string();
    sweep::write_outputs(path, r.spec, r.config, table, fmt);
    run.written.push_back(path);
    run.failed += table.failed;
  }
  if (p.write_modes) {
    const auto path = (dir / (p.name + "_modes.csv")).string();
    sweep::write_text(path, modes_csv(parts.front().config.sphere));
    run.written.push_back(path);
  }
  const auto script = (dir / (p.name + "_plot.py")).string();
  sweep::write_text(script, plot_script(p, parts));
  run.written.push_back(script);
  return run;
}

}  // namespace plexsim::presets
