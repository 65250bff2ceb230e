#include "semirel/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace semirel {

std::string_view to_string(SolverKind kind) {
  switch (kind) {
    case SolverKind::nr: return "nr";
    case SolverKind::wp: return "wp";
    case SolverKind::exact: return "exact";
    case SolverKind::analytic_nr: return "analytic-nr";
  }
  return "unknown";
}

SolverKind solver_kind(EquationMode mode) {
  return mode == EquationMode::nr ? SolverKind::nr : SolverKind::wp;
}

double initial_amplitude_wp(const TwoBodySystem& system, double eps, double v0) {
  const double c2 = system.units().c * system.units().c;
  const double hbar = system.units().hbar;
  const double d = eps - v0;
  const double rest = system.total_mass() * c2;
  if (!std::isfinite(d) || rest + d <= 0.0)
    throw std::domain_error("energy below local kinematic threshold at the well minimum");
  const double r = d * (2.0 * rest + d) * (2.0 * system.heavy_mass() * c2 + d) *
                   (2.0 * system.light_mass() * c2 + d) / (4.0 * (rest + d) * (rest + d));
  if (!(r > 0.0))
    throw std::domain_error("energy below local kinematic threshold at the well minimum");
  return std::pow(hbar * hbar * c2 / r, 0.25);
}

double initial_amplitude_nr(const TwoBodySystem& system, double eps, double v0) {
  const double d = eps - v0;
  if (!(d > 0.0) || !std::isfinite(d))
    throw std::domain_error("no classically allowed region at minimum");
  const double hbar = system.units().hbar;
  return std::pow(hbar * hbar / (2.0 * system.reduced_mass() * d), 0.25);
}

double initial_amplitude(EquationMode mode, const TwoBodySystem& system, double eps, double v0) {
  return mode == EquationMode::nr ? initial_amplitude_nr(system, eps, v0)
                                  : initial_amplitude_wp(system, eps, v0);
}

namespace {

AmplitudeState starting_state(EquationMode mode, const TwoBodySystem& system, const Potential& v,
                              double eps, const IntegrationConfig& config) {
  const double x0 = v.x_min();
  return {x0, config.amplitude_factor * initial_amplitude(mode, system, eps, v(x0)), 0.0, 0.0};
}

void require_converged(const HalfAxisResult& r) {
  if (r.reason != Termination::converged)
    throw IntegrationFault(r.reason, std::string(to_string(r.reason)) + ": " + r.diagnostic);
}

}  // namespace

PhaseIntegral phase_integral(EquationMode mode, const TwoBodySystem& system, const Potential& v,
                             double eps, const IntegrationConfig& config, bool use_symmetry) {
  const AmplitudeState init = starting_state(mode, system, v, eps, config);
  const auto right = integrate_half_axis(mode, system, v, eps, init, config, +1);
  require_converged(right);
  PhaseIntegral out;
  out.right = right.state.phase;
  out.x_right = right.state.x;
  if (use_symmetry && v.symmetric()) {
    out.left = out.right;
    out.x_left = 2.0 * init.x - out.x_right;
  } else {
    const auto left = integrate_half_axis(mode, system, v, eps, init, config, -1);
    require_converged(left);
    out.left = left.state.phase;
    out.x_left = left.state.x;
  }
  out.total = out.left + out.right;
  return out;
}

double total_phase(EquationMode mode, const TwoBodySystem& system, const Potential& v,
                   double eps, const IntegrationConfig& config) {
  return phase_integral(mode, system, v, eps, config).total;
}

namespace {

// Phi_total(eps) - target with bookkeeping for the monotonicity check.
class QuantizationFunction {
public:
  QuantizationFunction(EquationMode mode, const TwoBodySystem& system, const Potential& v,
                       const IntegrationConfig& config, double target)
      : mode_(mode), system_(system), v_(v), config_(config), target_(target) {}

  // +inf when the energy leaves the bound region (range limit: unbounded phase).
  double operator()(double eps) {
    ++evaluations_;
    double phase;
    try {
      phase = total_phase(mode_, system_, v_, eps, config_);
    } catch (const IntegrationFault& f) {
      if (f.reason() != Termination::range_limit) throw;
      phase = std::numeric_limits<double>::infinity();
    }
    record(eps, phase);
    return phase - target_;
  }

  int evaluations() const noexcept { return evaluations_; }

private:
  void record(double eps, double phase) {
    const auto [it, inserted] = samples_.emplace(eps, phase);
    if (!inserted) return;
    const double slack = 1e-7 * std::max(1.0, target_);
    if (it != samples_.begin()) {
      const auto prev = std::prev(it);
      if (prev->second > phase + slack) violation(prev->first, prev->second, eps, phase);
    }
    if (const auto next = std::next(it); next != samples_.end()) {
      if (phase > next->second + slack) violation(eps, phase, next->first, next->second);
    }
  }

  [[noreturn]] static void violation(double e1, double p1, double e2, double p2) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "phase integral is not monotone in energy: Phi(" << e1 << ") = " << p1 << " > Phi("
        << e2 << ") = " << p2;
    throw std::logic_error(msg.str());
  }

  EquationMode mode_;
  const TwoBodySystem& system_;
  const Potential& v_;
  const IntegrationConfig& config_;
  double target_;
  int evaluations_ = 0;
  std::map<double, double> samples_;
};

}  // namespace

EnergyLevel solve_level(EquationMode mode, const TwoBodySystem& system, const Potential& v, int n,
                        const IntegrationConfig& config, const QuantizationOptions& options,
                        std::optional<double> lower_bound) {
  if (n < 0) throw std::invalid_argument("solve_level: n must be non-negative");
  config.validate();
  const WellMinimum well =
      validate_single_well(v, {v.x_min() - config.x_max, v.x_min() + config.x_max}, 2001);
  const double v0 = well.v0;
  const double asymptote = v.asymptote();
  const double target = (n + 1) * std::numbers::pi;
  QuantizationFunction f(mode, system, v, config, target);

  // Harmonic estimate hbar omega (n + 1/2) from the curvature at the minimum.
  const double kappa = v.curvature();
  const double hbar = system.units().hbar;
  const double guess = kappa > 0.0 ? hbar * std::sqrt(kappa / system.reduced_mass()) * (n + 0.5)
                                   : (n + 0.5);

  double lo = v0 + options.seed_low * guess;
  double hi = v0 + options.seed_high * guess;
  if (std::isfinite(asymptote)) {
    hi = std::min(hi, v0 + 0.999 * (asymptote - v0));
    lo = std::min(lo, v0 + 0.5 * (hi - v0));
  }
  if (lower_bound && *lower_bound > lo && *lower_bound < hi) lo = *lower_bound;

  constexpr int max_expansions = 60;
  double flo = f(lo);
  for (int i = 0; flo > 0.0; ++i) {
    if (i == max_expansions) throw std::runtime_error("level outside search window");
    hi = lo;
    lo = v0 + 0.5 * (lo - v0);
    flo = f(lo);
  }
  double fhi = f(hi);
  for (int i = 0; fhi < 0.0; ++i) {
    if (i == max_expansions) throw std::runtime_error("level outside search window");
    lo = hi;
    flo = fhi;
    hi = std::isfinite(asymptote) ? 0.5 * (hi + asymptote) : v0 + 2.0 * (hi - v0);
    fhi = f(hi);
  }

  auto finish = [&](double eps, double residual) {
    return EnergyLevel{n, eps, solver_kind(mode), std::abs(residual), hi - lo, f.evaluations()};
  };

  // Illinois regula falsi once the bracket is narrow and both ends are finite;
  // bisection before that. wlo/whi are the (possibly halved) interpolation weights.
  double wlo = flo, whi = fhi;
  int last_replaced = 0;  // -1: lo, +1: hi
  auto replace_lo = [&](double e, double fe) {
    lo = e;
    flo = wlo = fe;
    if (last_replaced == -1) whi *= 0.5;
    last_replaced = -1;
  };
  auto replace_hi = [&](double e, double fe) {
    hi = e;
    fhi = whi = fe;
    if (last_replaced == 1) wlo *= 0.5;
    last_replaced = 1;
  };

  while (f.evaluations() < options.max_evaluations) {
    const double mid = 0.5 * (lo + hi);
    const double scale = std::max(std::abs(mid), 1.0);
    if (hi - lo <= options.energy_tol * scale) {
      if (std::min(std::abs(flo), std::abs(fhi)) < options.phase_tol)
        return std::abs(flo) < std::abs(fhi) ? finish(lo, flo) : finish(hi, fhi);
      // A jump from below the target straight to an unbounded phase: the level
      // would lie in the continuum of a finite well.
      if (std::isinf(fhi)) throw std::runtime_error("level outside search window");
    }

    double c = mid;
    if (hi - lo < 0.01 * scale && std::isfinite(whi)) {
      const double cand = (lo * whi - hi * wlo) / (whi - wlo);
      if (cand > lo && cand < hi) c = cand;
    }

    const double fc = f(c);
    if (fc == 0.0) {
      lo = hi = c;
      return finish(c, 0.0);
    }
    fc < 0.0 ? replace_lo(c, fc) : replace_hi(c, fc);

    if (std::abs(fc) < options.phase_tol) {
      // Close the bracket around c with a probe just across the root.
      const double d = 0.45 * options.energy_tol * std::max(std::abs(c), 1.0);
      const double probe = fc > 0.0 ? c - d : c + d;
      if (probe > lo && probe < hi) {
        const double fp = f(probe);
        fp < 0.0 ? replace_lo(probe, fp) : replace_hi(probe, fp);
      }
      last_replaced = 0;
    }
  }
  std::ostringstream msg;
  msg << "quantization did not converge for n = " << n << " within " << options.max_evaluations
      << " evaluations (bracket [" << lo << ", " << hi << "])";
  throw std::runtime_error(msg.str());
}

std::vector<LevelOutcome> solve_spectrum(EquationMode mode, const TwoBodySystem& system,
                                         const Potential& v, std::span<const int> levels,
                                         const IntegrationConfig& config,
                                         const QuantizationOptions& options) {
  if (!std::is_sorted(levels.begin(), levels.end()))
    throw std::invalid_argument("solve_spectrum: levels must be sorted ascending");
  std::vector<LevelOutcome> out;
  out.reserve(levels.size());
  std::optional<double> seed;
  for (int n : levels) {
    LevelOutcome outcome{n, std::nullopt, {}};
    try {
      outcome.level = solve_level(mode, system, v, n, config, options, seed);
      seed = outcome.level->eps;
    } catch (const std::exception& e) {
      outcome.error = e.what();
    }
    out.push_back(std::move(outcome));
  }
  return out;
}

Interval integrated_extent(EquationMode mode, const TwoBodySystem& system, const Potential& v,
                           const EnergyLevel& level, const IntegrationConfig& config) {
  const auto phase = phase_integral(mode, system, v, level.eps, config, false);
  return {phase.x_left, phase.x_right};
}

std::vector<WaveSample> reconstruct_wavefunction(EquationMode mode, const TwoBodySystem& system,
                                                 const Potential& v, const EnergyLevel& level,
                                                 std::span<const double> grid,
                                                 const IntegrationConfig& config) {
  if (!std::is_sorted(grid.begin(), grid.end()))
    throw std::invalid_argument("reconstruct_wavefunction: grid must be ascending");
  if (grid.empty()) return {};
  const Interval extent = integrated_extent(mode, system, v, level, config);
  if (grid.front() < extent.lo || grid.back() > extent.hi)
    throw std::out_of_range("grid outside integrated range");

  const AmplitudeState init = starting_state(mode, system, v, level.eps, config);
  const auto split = std::lower_bound(grid.begin(), grid.end(), init.x);
  std::vector<double> left(grid.begin(), split);
  std::reverse(left.begin(), left.end());
  const std::vector<double> right(split, grid.end());

  const auto left_run = integrate_half_axis(mode, system, v, level.eps, init, config, -1,
                                            {left, {}, true});
  const auto right_run = integrate_half_axis(mode, system, v, level.eps, init, config, +1,
                                             {right, {}, true});
  require_converged(left_run);
  require_converged(right_run);
  if (left_run.outputs.size() != left.size() || right_run.outputs.size() != right.size())
    throw std::out_of_range("grid outside integrated range");

  const double left_end = left_run.state.phase;
  const double right_end = right_run.state.phase;
  const double parity = level.n % 2 == 0 ? 1.0 : -1.0;

  std::vector<WaveSample> out;
  out.reserve(grid.size());
  for (std::size_t i = left.size(); i-- > 0;) {
    const auto& s = left_run.outputs[i];
    const double remaining = left_end - s.phase;
    out.push_back({left[i], s.amplitude * std::sin(remaining), s.amplitude, remaining});
  }
  for (std::size_t i = 0; i < right.size(); ++i) {
    const auto& s = right_run.outputs[i];
    const double remaining = right_end - s.phase;
    out.push_back(
        {right[i], parity * s.amplitude * std::sin(remaining), s.amplitude, left_end + s.phase});
  }
  return out;
}

std::vector<double> wavefunction_grid(EquationMode mode, const TwoBodySystem& system,
                                      const Potential& v, const EnergyLevel& level,
                                      const IntegrationConfig& config, int points) {
  if (points < 2) throw std::invalid_argument("wavefunction_grid: need at least 2 points");
  const Interval extent = integrated_extent(mode, system, v, level, config);
  std::vector<double> grid(static_cast<std::size_t>(points));
  const double step = (extent.hi - extent.lo) / (points - 1);
  for (int i = 0; i < points; ++i) grid[i] = extent.lo + i * step;
  grid.front() = extent.lo;
  grid.back() = extent.hi;
  return grid;
}

NodeCount count_nodes(std::span<const double> psi) {
  double peak = 0.0;
  for (double p : psi) peak = std::max(peak, std::abs(p));
  const double floor = 1e-10 * peak;
  int nodes = 0;
  int last_sign = 0;
  for (double p : psi) {
    if (std::abs(p) <= floor) continue;
    const int sign = p > 0.0 ? 1 : -1;
    if (last_sign != 0 && sign != last_sign) ++nodes;
    last_sign = sign;
  }
  const bool sparse = psi.size() < 20u * static_cast<std::size_t>(nodes + 1);
  return {nodes, sparse};
}

NodeCount count_nodes(std::span<const WaveSample> samples) {
  std::vector<double> psi;
  psi.reserve(samples.size());
  for (const auto& s : samples) psi.push_back(s.psi);
  return count_nodes(psi);
}

namespace {

// Outermost x on the segment [from, to] with V(x) <= eps, by bisection.
double turning_point(const Potential& v, double eps, double from, double to) {
  if (v(to) <= eps) return to;
  double inside = from, outside = to;
  for (int i = 0; i < 200 && std::abs(outside - inside) > 1e-14 * std::max(1.0, std::abs(inside));
       ++i) {
    const double mid = 0.5 * (inside + outside);
    (v(mid) <= eps ? inside : outside) = mid;
  }
  return inside;
}

}  // namespace

double schrodinger_residual(const TwoBodySystem& system, const Potential& v,
                            const EnergyLevel& level, const IntegrationConfig& config,
                            double spacing) {
  if (!(spacing > 0.0)) throw std::invalid_argument("schrodinger_residual: spacing must be > 0");
  const EquationMode mode = EquationMode::nr;
  const Interval extent = integrated_extent(mode, system, v, level, config);
  const double x0 = v.x_min();
  const double eps = level.eps;
  const double left_tp = turning_point(v, eps, x0, extent.lo);
  const double right_tp = turning_point(v, eps, x0, extent.hi);

  // Grid aligned on x_min, extended by two points beyond each turning point for the stencil.
  const long j_lo = static_cast<long>(std::floor((left_tp - x0) / spacing)) - 2;
  const long j_hi = static_cast<long>(std::ceil((right_tp - x0) / spacing)) + 2;
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(j_hi - j_lo + 1));
  for (long j = j_lo; j <= j_hi; ++j) grid.push_back(x0 + j * spacing);
  grid.front() = std::max(grid.front(), extent.lo);
  grid.back() = std::min(grid.back(), extent.hi);

  const auto samples = reconstruct_wavefunction(mode, system, v, level, grid, config);
  const double hbar = system.units().hbar;
  const double coupling = 2.0 * system.reduced_mass() / (hbar * hbar);

  double peak = 0.0;
  for (const auto& s : samples) peak = std::max(peak, std::abs(s.psi));
  double worst = 0.0;
  for (std::size_t i = 2; i + 2 < samples.size(); ++i) {
    const long j = j_lo + static_cast<long>(i);
    if (std::abs(j) <= 2) continue;
    const double x = samples[i].x;
    if (x < left_tp || x > right_tp) continue;
    const double d2 = (-samples[i + 2].psi + 16.0 * samples[i + 1].psi - 30.0 * samples[i].psi +
                       16.0 * samples[i - 1].psi - samples[i - 2].psi) /
                      (12.0 * spacing * spacing);
    worst = std::max(worst, std::abs(d2 + coupling * (eps - v(x)) * samples[i].psi));
  }
  const double v0 = v(x0);
  return worst / (peak * coupling * std::abs(eps - v0));
}

}  // namespace semirel
