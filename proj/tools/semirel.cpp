// semirel: bound-state spectra of two spinless particles with relativistic
// kinematics in one dimension.
//
//   semirel table1                      WP / exact / NR comparison table
//   semirel solve --mode wp --mu 5 ...  levels from a single solver
//   semirel phase ...                   Phi_total(eps) scan
//   semirel wavefunction ...            sampled psi for one level

#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "semirel/exact.hpp"
#include "semirel/report.hpp"
#include "semirel/spectrum.hpp"

namespace {

using namespace semirel;

struct SystemFlags {
  double mu = 5.0;
  double m1 = 10.0;
  double beta = 1.0;
  double hbar = 1.0;
  double c = 1.0;
  std::string potential = "harmonic";
  double beta4 = 0.0;
  double depth = 10.0;
  double width = 1.0;

  void attach(CLI::App& app) {
    app.add_option("--mu", mu, "Reduced mass")->capture_default_str();
    app.add_option("--m1", m1, "First particle mass (m2 follows from mu)")->capture_default_str();
    app.add_option("--beta", beta, "Harmonic stiffness (quadratic coefficient)")
        ->capture_default_str();
    app.add_option("--hbar", hbar, "Action quantum")->capture_default_str();
    app.add_option("--c", c, "Speed of light")->capture_default_str();
    app.add_option("--potential", potential, "harmonic | quartic | gaussian-well")
        ->capture_default_str();
    app.add_option("--beta4", beta4, "Quartic coefficient (quartic potential)");
    app.add_option("--depth", depth, "Well depth (gaussian-well)");
    app.add_option("--width", width, "Well width (gaussian-well)");
  }

  TwoBodySystem system() const { return TwoBodySystem::from_reduced(mu, m1, {hbar, c}); }

  Potential well() const {
    switch (parse_potential_kind(potential)) {
      case PotentialKind::harmonic: return Potential::harmonic(beta);
      case PotentialKind::quartic: return Potential::quartic(beta, beta4);
      case PotentialKind::gaussian_well: return Potential::gaussian_well(depth, width);
    }
    throw std::invalid_argument("unsupported potential");
  }
};

std::vector<int> parse_levels(const std::string& text) {
  std::vector<int> out;
  std::stringstream in(text);
  for (std::string item; std::getline(in, item, ',');) {
    if (item.empty()) continue;
    out.push_back(std::stoi(item));
  }
  if (out.empty()) throw std::invalid_argument("no levels given");
  return out;
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file '" + path + "'");
  out << text;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read config file '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string levels_csv(const std::vector<EnergyLevel>& levels) {
  std::string out = "n,mode,eps,residual,bracket,evaluations\n";
  for (const auto& l : levels) {
    out += std::to_string(l.n) + ',' + std::string(to_string(l.kind)) + ',' +
           format_number(l.eps) + ',' + format_number(l.residual) + ',' +
           format_number(l.bracket) + ',' + std::to_string(l.evaluations) + '\n';
  }
  return out;
}

std::string levels_json(const std::vector<EnergyLevel>& levels) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& l : levels) {
    arr.push_back({{"n", l.n},
                   {"mode", to_string(l.kind)},
                   {"eps", l.eps},
                   {"residual", l.residual},
                   {"bracket", l.bracket},
                   {"evaluations", l.evaluations}});
  }
  return arr.dump(2) + "\n";
}

int run_table1(RunConfig config, const std::string& config_path, bool console) {
  if (!config_path.empty()) config = parse_run_config(slurp(config_path), config);
  config.validate();
  const auto report = reproduce_table1(config);
  emit(render(report, config, config.format), config.output_path);
  if (console) std::cerr << render_console(report.rows);
  for (const auto& cell : report.cells)
    if (!cell.ok)
      std::cerr << "row " << cell.row << " [" << cell.solver << "]: " << cell.message << '\n';
  return report.all_ok() ? 0 : 1;
}

int run_solve(const SystemFlags& flags, const std::string& mode, const std::string& levels_text,
              double accuracy, const std::string& out, const std::string& format,
              const IntegrationConfig& integration) {
  const auto system = flags.system();
  const auto levels = parse_levels(levels_text);
  std::vector<EnergyLevel> solved;
  int status = 0;
  if (mode == "exact") {
    if (flags.potential != "harmonic")
      throw std::invalid_argument("the exact solver supports the harmonic well only");
    ExactOptions options;
    options.accuracy = accuracy;
    const auto result = exact_salpeter_levels(system, flags.beta, levels, options);
    solved = result.levels;
    if (!result.converged) {
      std::cerr << result.message << '\n';
      status = 1;
    }
  } else {
    const auto outcomes =
        solve_spectrum(parse_equation_mode(mode), system, flags.well(), levels, integration);
    for (const auto& o : outcomes) {
      if (o.ok()) {
        solved.push_back(*o.level);
      } else {
        std::cerr << "n = " << o.n << ": " << o.error << '\n';
        status = 1;
      }
    }
  }
  emit(parse_output_format(format) == OutputFormat::csv ? levels_csv(solved) : levels_json(solved),
       out);
  return status;
}

int run_phase(const SystemFlags& flags, const std::string& mode, double emin, double emax,
              int steps, const std::string& out, const IntegrationConfig& integration) {
  if (steps < 1) throw std::invalid_argument("--steps must be positive");
  const auto system = flags.system();
  const auto well = flags.well();
  const auto eq = parse_equation_mode(mode);
  std::string text = "eps,phase,phase_over_pi\n";
  int status = 0;
  for (int i = 0; i <= steps; ++i) {
    const double eps = emin + (emax - emin) * i / steps;
    text += format_number(eps) + ',';
    try {
      const double phi = total_phase(eq, system, well, eps, integration);
      text += format_number(phi) + ',' + format_number(phi / std::numbers::pi);
    } catch (const std::exception& e) {
      std::cerr << "eps = " << eps << ": " << e.what() << '\n';
      text += ',';
      status = 1;
    }
    text += '\n';
  }
  emit(text, out);
  return status;
}

int run_wavefunction(const SystemFlags& flags, const std::string& mode, int n, int points,
                     const std::string& out, const IntegrationConfig& integration) {
  const auto system = flags.system();
  const auto well = flags.well();
  const auto eq = parse_equation_mode(mode);
  const auto level = solve_level(eq, system, well, n, integration);
  const auto grid = wavefunction_grid(eq, system, well, level, integration, points);
  const auto samples = reconstruct_wavefunction(eq, system, well, level, grid, integration);
  std::string text = "x,psi,amplitude,phase\n";
  for (const auto& s : samples)
    text += format_number(s.x) + ',' + format_number(s.psi) + ',' + format_number(s.amplitude) +
            ',' + format_number(s.phase) + '\n';
  emit(text, out);
  const auto nodes = count_nodes(samples);
  std::cerr << "eps = " << format_number(level.eps) << ", nodes = " << nodes.nodes
            << (nodes.sparse ? " (grid too coarse)" : "") << '\n';
  return nodes.nodes == n ? 0 : 1;
}

void attach_integration(CLI::App& app, IntegrationConfig& ic) {
  app.add_option("--rel-tol", ic.rel_tol, "Integrator relative tolerance")->capture_default_str();
  app.add_option("--abs-tol", ic.abs_tol, "Integrator absolute tolerance")->capture_default_str();
  app.add_option("--termination-ratio", ic.termination_ratio,
                 "Phase-integrand cutoff relative to its maximum")
      ->capture_default_str();
  app.add_option("--x-max", ic.x_max, "Maximum integration distance")->capture_default_str();
  app.add_option("--length-scale", ic.length_scale, "Working length unit")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Semi-relativistic two-body bound states in 1+1 dimensions"};
  app.require_subcommand(1);

  // table1
  auto* table1 = app.add_subcommand("table1", "Compare WP, exact and NR spectra (harmonic well)");
  RunConfig table_config = RunConfig::table1();
  std::string table_levels, table_solvers, table_format = "csv", config_path;
  bool console = false;
  table1->add_option("--config", config_path, "JSON run configuration (overrides flags)");
  table1->add_option("--beta", table_config.beta, "Harmonic stiffness")->capture_default_str();
  table1->add_option("--hbar", table_config.units.hbar, "Action quantum")->capture_default_str();
  table1->add_option("--c", table_config.units.c, "Speed of light")->capture_default_str();
  table1->add_option("--levels", table_levels, "Comma-separated level indices (default 0,10,20)");
  table1->add_option("--solvers", table_solvers, "Comma-separated subset of wp,exact,nr");
  table1->add_option("--accuracy", table_config.accuracy, "Exact-solver refinement target")
      ->capture_default_str();
  table1->add_option("--threads", table_config.threads, "Worker threads (0 = auto)");
  table1->add_option("--out", table_config.output_path, "Output file (default stdout)");
  table1->add_option("--format", table_format, "csv | json")->capture_default_str();
  table1->add_flag("--console", console, "Also print a rounded table to stderr");
  attach_integration(*table1, table_config.integration);

  // solve
  auto* solve = app.add_subcommand("solve", "Solve levels with one solver");
  SystemFlags solve_flags;
  std::string solve_mode = "wp", solve_levels = "0", solve_out, solve_format = "csv",
              solve_config;
  double solve_accuracy = 1e-6;
  IntegrationConfig solve_integration;
  solve_flags.attach(*solve);
  solve->add_option("--mode", solve_mode, "wp | nr | exact")->capture_default_str();
  solve->add_option("--levels", solve_levels, "Comma-separated level indices")
      ->capture_default_str();
  solve->add_option("--accuracy", solve_accuracy, "Exact-solver refinement target")
      ->capture_default_str();
  solve->add_option("--out", solve_out, "Output file (default stdout)");
  solve->add_option("--format", solve_format, "csv | json")->capture_default_str();
  solve->add_option("--config", solve_config, "JSON run configuration (overrides flags)");
  attach_integration(*solve, solve_integration);

  // phase
  auto* phase = app.add_subcommand("phase", "Scan the total phase integral over energy");
  SystemFlags phase_flags;
  std::string phase_mode = "wp", phase_out;
  double emin = 0.1, emax = 10.0;
  int steps = 100;
  IntegrationConfig phase_integration;
  phase_flags.attach(*phase);
  phase->add_option("--mode", phase_mode, "wp | nr")->capture_default_str();
  phase->add_option("--emin", emin, "First energy")->capture_default_str();
  phase->add_option("--emax", emax, "Last energy")->capture_default_str();
  phase->add_option("--steps", steps, "Number of intervals")->capture_default_str();
  phase->add_option("--out", phase_out, "Output file (default stdout)");
  attach_integration(*phase, phase_integration);

  // wavefunction
  auto* wave = app.add_subcommand("wavefunction", "Sample psi for one solved level");
  SystemFlags wave_flags;
  std::string wave_mode = "wp", wave_out;
  int wave_n = 0, wave_points = 2001;
  IntegrationConfig wave_integration;
  wave_flags.attach(*wave);
  wave->add_option("--mode", wave_mode, "wp | nr")->capture_default_str();
  wave->add_option("--n", wave_n, "Level index")->capture_default_str();
  wave->add_option("--points", wave_points, "Number of samples")->capture_default_str();
  wave->add_option("--out", wave_out, "Output file (default stdout)");
  attach_integration(*wave, wave_integration);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*table1) {
      if (!table_levels.empty()) table_config.levels = parse_levels(table_levels);
      if (!table_solvers.empty()) {
        table_config.solvers = {false, false, false};
        std::stringstream in(table_solvers);
        for (std::string s; std::getline(in, s, ',');) {
          if (s == "wp") table_config.solvers.wp = true;
          else if (s == "exact") table_config.solvers.exact = true;
          else if (s == "nr") table_config.solvers.nr = true;
          else throw std::invalid_argument("unknown solver '" + s + "'");
        }
      }
      table_config.format = parse_output_format(table_format);
      return run_table1(table_config, config_path, console);
    }
    if (*solve) {
      if (!solve_config.empty()) {
        // Config file values take precedence over the corresponding flags.
        RunConfig base = RunConfig::table1();
        base.beta = solve_flags.beta;
        base.units = {solve_flags.hbar, solve_flags.c};
        base.systems = {{solve_flags.mu, solve_flags.m1}};
        base.levels = parse_levels(solve_levels);
        base.accuracy = solve_accuracy;
        base.integration = solve_integration;
        const auto cfg = parse_run_config(slurp(solve_config), base);
        solve_flags.beta = cfg.beta;
        solve_flags.hbar = cfg.units.hbar;
        solve_flags.c = cfg.units.c;
        solve_flags.mu = cfg.systems.front().mu;
        solve_flags.m1 = cfg.systems.front().m1;
        solve_accuracy = cfg.accuracy;
        solve_integration = cfg.integration;
        solve_levels.clear();
        for (int n : cfg.levels) solve_levels += std::to_string(n) + ',';
      }
      return run_solve(solve_flags, solve_mode, solve_levels, solve_accuracy, solve_out,
                       solve_format, solve_integration);
    }
    if (*phase)
      return run_phase(phase_flags, phase_mode, emin, emax, steps, phase_out, phase_integration);
    if (*wave)
      return run_wavefunction(wave_flags, wave_mode, wave_n, wave_points, wave_out,
                              wave_integration);
  } catch (const std::exception& e) {
    std::cerr << "semirel: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
