#include "cssr/cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>

#include "cssr/config.hpp"
#include "cssr/dynamics.hpp"
#include "cssr/errors.hpp"
#include "cssr/reduction.hpp"
#include "cssr/snapshot.hpp"
#include "cssr/verify.hpp"

namespace cssr {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Overrides {
  std::string config_path;
  std::optional<double> beta, epsilon, dt, t_final, l_x;
  std::optional<int> n_x, m_y;
  std::optional<unsigned> threads;
  std::optional<std::string> out;
  std::vector<std::string> sets;
};

void add_common_options(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config_path, "Configuration file (key = value lines)");
  cmd->add_option("--beta", o.beta, "physics.beta");
  cmd->add_option("--epsilon", o.epsilon, "physics.epsilon");
  cmd->add_option("--dt", o.dt, "time.dt");
  cmd->add_option("--t-final", o.t_final, "time.t_final");
  cmd->add_option("--n-x", o.n_x, "grid.n_x");
  cmd->add_option("--l-x", o.l_x, "grid.l_x");
  cmd->add_option("--m-y", o.m_y, "grid.m_y");
  cmd->add_option("--threads", o.threads, "sweep.threads");
  cmd->add_option("--out", o.out, "output.dir");
  cmd->add_option("--set", o.sets, "Any config key, as key=value (repeatable)");
}

SimulationConfig resolve_config(const Overrides& o, std::ostream& err) {
  SimulationConfig cfg;
  if (!o.config_path.empty()) {
    ParsedConfig parsed = parse_config(o.config_path);
    for (const auto& w : parsed.warnings) err << "warning: " << w << "\n";
    cfg = std::move(parsed.config);
  }
  if (const char* env = std::getenv("CSSR_OUTPUT_DIR"); env != nullptr && *env != '\0') {
    cfg.output_dir = env;
  }
  for (const auto& s : o.sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError("--set: expected key=value, got '" + s + "'");
    const std::string key = s.substr(0, eq);
    if (!apply_setting(cfg, key, s.substr(eq + 1))) {
      err << "warning: unknown key '" << key << "' ignored\n";
    }
  }
  if (o.beta) cfg.beta = *o.beta;
  if (o.epsilon) cfg.epsilon = *o.epsilon;
  if (o.dt) cfg.dt = *o.dt;
  if (o.t_final) cfg.t_final = *o.t_final;
  if (o.n_x) cfg.grid.n_x = *o.n_x;
  if (o.l_x) cfg.grid.l_x = *o.l_x;
  if (o.m_y) cfg.grid.m_y = *o.m_y;
  if (o.threads) cfg.threads = *o.threads;
  if (o.out) cfg.output_dir = *o.out;
  cfg.validate();
  return cfg;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

json energy_json(const EnergyBreakdown& e) {
  return {{"kinetic_x", e.kinetic_x},
          {"interaction", e.interaction},
          {"potential_x", e.potential_x},
          {"transverse", e.transverse},
          {"total", e.total}};
}

json rate_json(const std::optional<RateFit>& r) {
  if (!r) return nullptr;
  return {{"slope", r->slope}, {"intercept", r->intercept}, {"stderr", r->stderr_slope}};
}

SnapshotMeta meta_for(const SimulationConfig& cfg, int m_y, double time, double eps) {
  SnapshotMeta m;
  m.n_x = static_cast<std::uint32_t>(cfg.grid.n_x);
  m.m_y = static_cast<std::uint32_t>(m_y);
  m.l_x = cfg.grid.l_x;
  m.time = time;
  m.epsilon = eps;
  m.beta = cfg.beta;
  return m;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("output.dir: cannot write '" + path.string() + "'");
  f << text;
}

struct Outcome {
  json results;
  int code = kExitOk;
};

template <class Result>
json ground_json(const Result& g) {
  return {{"energy", energy_json(g.energy)},
          {"chemical_potential", g.chemical_potential},
          {"residual", g.residual},
          {"iterations", g.iterations},
          {"converged", g.converged}};
}

Outcome cmd_ground1d(const SimulationConfig& cfg, const SpectralWorkspace& ws, const fs::path& dir) {
  const GroundState1D g = minimize_1d(cfg.beta, cfg.flow, ws);
  if (cfg.write_fields) {
    write_snapshot((dir / "ground1d.snap").string(), g.state, meta_for(cfg, 1, 0.0, 0.0));
  }
  return {ground_json(g), g.converged ? kExitOk : kExitNotConverged};
}

Outcome cmd_ground2d(const SimulationConfig& cfg, const SpectralWorkspace& ws, const fs::path& dir) {
  const GroundState2D g = minimize_2d(cfg.beta, cfg.epsilon, cfg.flow, ws);
  if (cfg.write_fields) {
    write_snapshot((dir / "ground2d.snap").string(), g.state, meta_for(cfg, ws.m_y(), 0.0, cfg.epsilon));
  }
  json r = ground_json(g);
  r["epsilon"] = cfg.epsilon;
  r["e_eps"] = e_eps(cfg.epsilon);
  r["energy_minus_e_eps"] = g.energy.total - e_eps(cfg.epsilon);
  return {r, g.converged ? kExitOk : kExitNotConverged};
}

Outcome cmd_evolve(bool two_d, const SimulationConfig& cfg, const SpectralWorkspace& ws,
                   const fs::path& dir) {
  EvolveOptions eo;
  eo.snapshot_stride = cfg.snapshot_stride;
  eo.store_fields = cfg.write_fields;
  const Field1D phi0 = gaussian_datum(cfg.initial_center, ws);
  const TrajectoryRecord rec =
      two_d ? evolve_2d(product_state(phi0, ws), cfg.beta, cfg.epsilon, cfg.t_final, cfg.dt, ws, eo)
            : evolve_1d(phi0, cfg.beta, cfg.t_final, cfg.dt, ws, eo);
  const std::string stem = two_d ? "evolve2d" : "evolve1d";
  std::string csv = "time,mass,energy,continuity_residual\n";
  double mass_drift = 0.0, energy_drift = 0.0, cont = 0.0;
  for (std::size_t k = 0; k < rec.times.size(); ++k) {
    csv += num(rec.times[k]) + "," + num(rec.mass_series[k]) + "," + num(rec.energy_series[k]) + "," +
           num(rec.continuity_residual_series[k]) + "\n";
    mass_drift = std::max(mass_drift, std::abs(rec.mass_series[k] - rec.mass_series[0]));
    energy_drift = std::max(energy_drift, std::abs(rec.energy_series[k] - rec.energy_series[0]));
    cont = std::max(cont, rec.continuity_residual_series[k]);
  }
  write_text(dir / (stem + ".csv"), csv);
  const double eps = two_d ? cfg.epsilon : 0.0;
  for (std::size_t k = 0; k < rec.snapshots.size(); ++k) {
    char name[64];
    std::snprintf(name, sizeof name, "%s_%05zu.snap", stem.c_str(), k);
    write_snapshot((dir / name).string(), rec.snapshots[k],
                   meta_for(cfg, static_cast<int>(rec.snapshots[k].cols()), rec.times[k], eps));
  }
  return {{{"steps", rec.steps},
           {"dt", rec.dt},
           {"t_final", rec.times.back()},
           {"max_mass_drift", mass_drift},
           {"max_energy_drift", energy_drift},
           {"max_continuity_residual", cont},
           {"final_energy", rec.energy_series.back()}},
          kExitOk};
}

Outcome cmd_sweep_gse(const SimulationConfig& cfg, const SpectralWorkspace& ws, const fs::path& dir) {
  const SweepReport r = run_gse_sweep(cfg.beta, cfg.epsilons, cfg.flow, ws, cfg.threads);
  std::string csv = "epsilon,e_eps,E2D,gap,iterations,converged\n";
  bool all = true;
  for (std::size_t k = 0; k < r.epsilons.size(); ++k) {
    csv += num(r.epsilons[k]) + "," + num(r.e_eps[k]) + "," + num(r.energy_2d[k]) + "," + num(r.gse_gap[k]) +
           "," + std::to_string(r.iterations[k]) + "," + (r.converged[k] ? "true" : "false") + "\n";
    all = all && r.status[k] == "ok";
  }
  const json footer = {{"beta", r.beta}, {"E1D", r.energy_1d}, {"gap_rate", rate_json(r.gse_rate)}};
  csv += "# " + footer.dump() + "\n";
  write_text(dir / "sweep_gse.csv", csv);
  json results = footer;
  results["status"] = r.status;
  results["gap"] = r.gse_gap;
  return {results, all ? kExitOk : kExitNotConverged};
}

Outcome cmd_sweep_dyn(const SimulationConfig& cfg, const SpectralWorkspace& ws, const fs::path& dir) {
  DynamicsSweepOptions o;
  o.center = cfg.initial_center;
  o.snapshot_stride = cfg.snapshot_stride;
  o.threads = cfg.threads;
  const SweepReport r = run_dynamics_sweep(cfg.beta, cfg.epsilons, cfg.t_final, cfg.dt, ws, o);
  std::string csv = "epsilon,t_final,dt,dyn_residual,proj_residual\n";
  bool stable = true, ok = true;
  for (std::size_t k = 0; k < r.epsilons.size(); ++k) {
    csv += num(r.epsilons[k]) + "," + num(r.t_final) + "," + num(r.dt) + "," + num(r.dyn_residual[k]) + "," +
           num(r.proj_residual[k]) + "\n";
    stable = stable && r.status[k].rfind("unstable", 0) != 0;
    ok = ok && r.status[k] == "ok";
  }
  const json footer = {{"beta", r.beta},
                       {"dyn_rate", rate_json(r.dyn_rate)},
                       {"proj_rate", rate_json(r.proj_rate)}};
  csv += "# " + footer.dump() + "\n";
  write_text(dir / "sweep_dyn.csv", csv);
  json results = footer;
  results["status"] = r.status;
  return {results, !stable ? kExitUnstable : ok ? kExitOk : kExitValidation};
}

Outcome cmd_verify(const SpectralWorkspace& ws, std::ostream& out) {
  const auto checks = run_verify(ws);
  json list = json::array();
  bool all = true;
  for (const auto& c : checks) {
    char line[160];
    std::snprintf(line, sizeof line, "%s  %-40s %.3e (tol %.1e)\n", c.pass ? "PASS" : "FAIL",
                  c.name.c_str(), c.value, c.tolerance);
    out << line;
    list.push_back({{"name", c.name}, {"pass", c.pass}, {"value", c.value}, {"tolerance", c.tolerance}});
    all = all && c.pass;
  }
  return {{{"checks", list}, {"all_pass", all}}, all ? kExitOk : kExitValidation};
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Chern-Simons-Schrodinger dimensional-reduction laboratory", "cssr"};
  app.require_subcommand(1);
  Overrides o;
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"ground1d", "1D quintic ground state"},
      {"ground2d", "2D gauged ground state at physics.epsilon"},
      {"evolve1d", "1D quintic NLS evolution of a Gaussian datum"},
      {"evolve2d", "2D gauged evolution of the datum times the transverse ground mode"},
      {"sweep-gse", "Ground-state energy sweep over sweep.epsilons"},
      {"sweep-dyn", "Dynamics residual sweep over sweep.epsilons"},
      {"verify", "Run the invariant battery"}};
  for (const auto& [name, help] : commands) add_common_options(app.add_subcommand(name, help), o);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    if (code == 0) return kExitOk;
    err << app.help();
    return kExitValidation;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    const auto start = std::chrono::steady_clock::now();
    const SimulationConfig cfg = resolve_config(o, err);
    const SpectralWorkspace ws(cfg.grid);
    const fs::path dir = cfg.output_dir;
    fs::create_directories(dir);

    Outcome r;
    if (command == "ground1d") r = cmd_ground1d(cfg, ws, dir);
    else if (command == "ground2d") r = cmd_ground2d(cfg, ws, dir);
    else if (command == "evolve1d") r = cmd_evolve(false, cfg, ws, dir);
    else if (command == "evolve2d") r = cmd_evolve(true, cfg, ws, dir);
    else if (command == "sweep-gse") r = cmd_sweep_gse(cfg, ws, dir);
    else if (command == "sweep-dyn") r = cmd_sweep_dyn(cfg, ws, dir);
    else r = cmd_verify(ws, out);

    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const json summary = {{"command", command}, {"config", cfg.to_json()}, {"results", r.results},
                          {"exit_code", r.code}, {"wall_time", wall}};
    write_text(dir / (command + ".json"), summary.dump(2) + "\n");
    if (command != "verify") out << summary.dump(2) << "\n";
    return r.code;
  } catch (const InstabilityError& e) {
    err << "error: instability: " << e.what() << "\n";
    return kExitUnstable;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }
}

}  // namespace cssr
