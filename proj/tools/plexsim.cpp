// plexsim command-line front end.
//
// Exit codes: 0 success, 2 configuration error, 3 numerical failure,
// 4 sweep finished with failed points.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "plexsim/config.hpp"
#include "plexsim/errors.hpp"
#include "plexsim/presets.hpp"
#include "plexsim/sweep.hpp"

namespace {

using namespace plexsim;

struct Common {
  std::string config_path;
  std::string out;
  std::vector<std::string> overrides;
  int threads = 0;
  std::string format = "csv";

  config::RunConfig load() const {
    config::RunConfig c = config_path.empty() ? config::RunConfig{} : config::load_config(config_path);
    config::apply_overrides(c, overrides);
    return c;
  }
  int thread_count() const { return threads > 0 ? threads : sweep::default_threads(); }
  sweep::Format fmt() const { return format == "json" ? sweep::Format::json : sweep::Format::csv; }
};

int emit(const sweep::SweepSpec& spec, const config::RunConfig& c, const Common& opt) {
  const sweep::Table t = sweep::run_sweep(spec, c, opt.thread_count());
  if (opt.out.empty()) {
    std::cout << (opt.fmt() == sweep::Format::csv ? sweep::to_csv(t, sweep::model_name(spec.model))
                                                  : sweep::to_json(t).dump(1) + "\n");
  } else {
    sweep::write_outputs(opt.out, spec, c, t, opt.fmt());
  }
  if (t.failed) {
    std::fprintf(stderr, "plexsim: %zu of %zu points failed (see the error column)\n", t.failed, t.rows.size());
    return 4;
  }
  return 0;
}

sweep::SweepSpec grid_sweep(sweep::Model m, const std::string& key, const config::RunConfig& c) {
  sweep::SweepSpec s;
  s.model = m;
  s.axis1 = {{key}, {c.grid.omega_start}, {c.grid.omega_stop}, c.grid.omega_points};
  return s;
}

void add_common(CLI::App* app, Common& opt) {
  app->add_option("--config", opt.config_path, "configuration file (key = value, [section] headers)");
  app->add_option("--out", opt.out, "output file, or directory for presets");
  app->add_option("--set", opt.overrides, "override a key, e.g. --set cmt.g_D=0.3 (repeatable)");
  app->add_option("--threads", opt.threads, "worker threads (default: PLEXSIM_THREADS or hardware)");
  app->add_option("--format", opt.format, "data format")->check(CLI::IsMember({"csv", "json"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bright/dark plasmon mode coupling to a single emitter: spectra, maps and photon statistics"};
  app.require_subcommand(1);
  Common opt;
  std::string preset_name, sweep_file;

  auto* spectrum = app.add_subcommand("spectrum", "three-mode scattering spectrum |s-|^2 over grid.omega_*");
  auto* map = app.add_subcommand("map", "scattering map over emitter detuning (grid.delta_E_*) x frequency");
  auto* modes = app.add_subcommand("modes", "multipole ladder and effective parameters of the sphere");
  auto* quantum = app.add_subcommand("quantum", "scattering and g2(0) versus drive frequency over grid.omega_*");
  auto* g2 = app.add_subcommand("g2", "scattering and g2(0) at quantum.omega_L");
  auto* preset = app.add_subcommand("preset", "reproduce a figure panel");
  preset->add_option("name", preset_name, "preset name")->required();
  auto* sweep_cmd = app.add_subcommand("sweep", "run a sweep file");
  sweep_cmd->add_option("spec-file", sweep_file, "sweep specification")->required();
  for (auto* sub : {spectrum, map, modes, quantum, g2, preset, sweep_cmd}) add_common(sub, opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    const config::RunConfig c = opt.load();
    if (spectrum->parsed()) return emit(grid_sweep(sweep::Model::cmt, "cmt.omega", c), c, opt);
    if (quantum->parsed()) return emit(grid_sweep(sweep::Model::quantum, "quantum.omega_L", c), c, opt);
    if (map->parsed()) {
      sweep::SweepSpec s = grid_sweep(sweep::Model::cmt, "cmt.omega", c);
      s.axis2 = s.axis1;
      s.axis1 = {{"cmt.delta_E"}, {c.grid.delta_E_start}, {c.grid.delta_E_stop}, c.grid.delta_E_points};
      return emit(s, c, opt);
    }
    if (modes->parsed()) {
      const auto e = nanosphere::effective_parameters(c.sphere);
      std::string text = presets::modes_csv(c.sphere);
      const std::pair<const char*, double> rows[] = {
          {"g_B", e.g_B},         {"g_D", e.g_D},         {"omega_B", e.omega_B},
          {"omega_D", e.omega_D}, {"gamma_B", e.gamma_B}, {"gamma_D", e.gamma_D},
          {"mu_B", e.mu_B},       {"gamma_E_rad", e.gamma_E_rad}, {"gamma_B_rad", e.gamma_B_rad}};
      for (auto [k, v] : rows) text += std::string("# ") + k + " = " + sweep::format_value(v) + "\n";
      if (e.truncation_warning) text += "# warning: multipole series not converged at n_max\n";
      if (opt.out.empty()) std::cout << text;
      else sweep::write_text(opt.out, text);
      return 0;
    }
    if (g2->parsed()) {
      sweep::EffectiveCache cache;
      const auto r = sweep::evaluate_quantum(c, cache);
      const auto cols = sweep::model_columns(sweep::Model::quantum);
      for (std::size_t k = 0; k < cols.size(); ++k)
        std::printf("%s = %s\n", cols[k].name.c_str(), sweep::format_value(r.values[k]).c_str());
      if (!r.error.empty()) {
        std::fprintf(stderr, "plexsim: %s\n", r.error.c_str());
        return 3;
      }
      return 0;
    }
    if (preset->parsed()) {
      const auto run = presets::run_preset(preset_name, c, opt.out.empty() ? "." : opt.out, opt.thread_count(),
                                           opt.fmt());
      for (const auto& f : run.written) std::printf("%s\n", f.c_str());
      if (run.failed) {
        std::fprintf(stderr, "plexsim: %zu points failed\n", run.failed);
        return 4;
      }
      return 0;
    }
    if (sweep_cmd->parsed()) {
      sweep::SweepSpec s = sweep::load_sweep(sweep_file);
      if (opt.out.empty() && !s.output.empty()) opt.out = s.output;
      return emit(s, c, opt);
    }
  } catch (const plexsim::Error& e) {
    std::fprintf(stderr, "plexsim: %s\n", e.what());
    return e.exit_code();
  } catch (const std::exception& e) {
    std::fprintf(stderr, "plexsim: %s\n", e.what());
    return 3;
  }
  return 0;
}
