#include "semirel/milne.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "semirel/ode.hpp"

namespace semirel {

std::string_view to_string(EquationMode mode) {
  return mode == EquationMode::nr ? "nr" : "wp";
}

EquationMode parse_equation_mode(std::string_view name) {
  if (name == "nr" || name == "NR") return EquationMode::nr;
  if (name == "wp" || name == "WP") return EquationMode::wp;
  throw std::invalid_argument("unknown equation mode '" + std::string(name) + "'");
}

std::string_view to_string(Termination reason) {
  switch (reason) {
    case Termination::converged: return "converged";
    case Termination::range_limit: return "range-limit";
    case Termination::fault: return "fault";
  }
  return "unknown";
}

void IntegrationConfig::validate() const {
  auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (!positive(rel_tol) || !positive(abs_tol))
    throw std::invalid_argument("integration tolerances must be positive");
  if (!positive(h_init) || !positive(h_max) || h_init > h_max)
    throw std::invalid_argument("integration step sizes must satisfy 0 < h_init <= h_max");
  if (!positive(termination_ratio) || termination_ratio >= 1.0)
    throw std::invalid_argument("termination_ratio must lie in (0, 1)");
  if (!(std::isfinite(forbidden_margin) && forbidden_margin >= 0.0))
    throw std::invalid_argument("forbidden_margin must be non-negative");
  if (!positive(x_max)) throw std::invalid_argument("x_max must be finite and positive");
  if (!positive(length_scale)) throw std::invalid_argument("length_scale must be positive");
  if (!positive(amplitude_factor))
    throw std::invalid_argument("amplitude_factor must be finite and positive");
}

namespace {

// A'' without the positivity check; callers have already rejected A <= 0.
double second_derivative(EquationMode mode, const TwoBodySystem& system, const Potential& v,
                         double eps, double x, double amplitude) {
  const double hbar = system.units().hbar;
  const double coupling = 2.0 * system.reduced_mass() / (hbar * hbar);
  const double inv_a2 = 1.0 / (amplitude * amplitude);
  if (mode == EquationMode::nr)
    return inv_a2 / amplitude - coupling * (eps - v(x)) * amplitude;
  const double momentum = hbar * inv_a2;
  return -coupling * (eps - v(x) - kinetic_excess(system, momentum)) * amplitude;
}

}  // namespace

double amplitude_rhs(EquationMode mode, const TwoBodySystem& system, const Potential& v,
                     double eps, double x, double amplitude) {
  if (!(amplitude > 0.0))
    throw IntegrationFault(Termination::fault, "amplitude collapsed");
  return second_derivative(mode, system, v, eps, x, amplitude);
}

HalfAxisResult integrate_half_axis(EquationMode mode, const TwoBodySystem& system,
                                   const Potential& v, double eps, const AmplitudeState& init,
                                   const IntegrationConfig& config, int direction,
                                   const HalfAxisOutputs& outputs) {
  config.validate();
  if (direction != 1 && direction != -1)
    throw std::invalid_argument("integrate_half_axis: direction must be +1 or -1");
  if (!(init.amplitude > 0.0))
    throw std::invalid_argument("integrate_half_axis: initial amplitude must be positive");

  const double origin = init.x;
  const double scale = config.length_scale;
  const double v0 = v(v.x_min());
  double forbidden_level = eps + config.forbidden_margin * (eps - v0);
  // Shallow levels of a finite well: the margin may lie above the asymptote.
  if (const double top = v.asymptote(); std::isfinite(top) && top > eps)
    forbidden_level = std::min(forbidden_level, 0.5 * (eps + top));

  // Output positions converted to the outward coordinate z = direction (x - origin) / scale.
  std::vector<double> targets;
  targets.reserve(outputs.positions.size());
  for (double x : outputs.positions) {
    const double z = direction * (x - origin) / scale;
    if (z < 0.0)
      throw std::invalid_argument("integrate_half_axis: output position on the wrong side");
    if (!targets.empty() && z < targets.back())
      throw std::invalid_argument("integrate_half_axis: output positions must move outward");
    targets.push_back(z);
  }

  // y = {A, dA/dz, Phi}; dy/dz = {dA/dz, scale^2 A''(x), scale A^-2}.
  auto rhs = [&](double z, const ode::State<3>& y, ode::State<3>& dydz) {
    if (!(y[0] > 0.0) || !std::isfinite(y[0])) return false;
    const double x = origin + direction * scale * z;
    dydz[0] = y[1];
    dydz[1] = scale * scale * second_derivative(mode, system, v, eps, x, y[0]);
    dydz[2] = scale / (y[0] * y[0]);
    return std::isfinite(dydz[1]);
  };

  auto to_state = [&](double z, const ode::State<3>& y) {
    return AmplitudeState{origin + direction * scale * z, y[0], direction * y[1] / scale, y[2]};
  };

  HalfAxisResult result;
  const ode::Tolerance tol{config.rel_tol, config.abs_tol};
  ode::StepController controller;

  double z = 0.0;
  ode::State<3> y{init.amplitude, direction * init.slope * scale, init.phase};
  ode::State<3> dydz{};
  if (!rhs(z, y, dydz)) {
    result.state = init;
    result.reason = Termination::fault;
    result.diagnostic = "invalid initial state";
    return result;
  }

  const double z_max = config.x_max / scale;
  const double h_max = config.h_max / scale;
  double h = std::min(config.h_init / scale, h_max);
  double peak_rate = 1.0 / (y[0] * y[0]);
  std::size_t next_target = 0;
  bool collapsing = false;

  while (next_target < targets.size() && targets[next_target] <= 0.0) {
    result.outputs.push_back(to_state(0.0, y));
    ++next_target;
  }

  auto fault = [&](const std::string& why) {
    std::ostringstream msg;
    msg << why << " at x = " << origin + direction * scale * z << " (A = " << y[0]
        << ", h = " << h * scale << ", eps = " << eps << ")";
    result.state = to_state(z, y);
    result.reason = Termination::fault;
    result.diagnostic = msg.str();
    return result;
  };

  for (;;) {
    if (z >= z_max) {
      result.state = to_state(z, y);
      result.reason = Termination::range_limit;
      result.diagnostic = "range limit reached before the phase integrand decayed";
      return result;
    }

    const double tiny = 1e-14 * std::max(1.0, std::abs(z));
    if (next_target < targets.size() && targets[next_target] - z < tiny) {
      result.outputs.push_back(to_state(z, y));
      ++next_target;
      continue;
    }

    double h_try = std::min(h, z_max - z);
    bool clipped = false;
    if (next_target < targets.size() && z + h_try >= targets[next_target]) {
      h_try = targets[next_target] - z;
      clipped = true;
    }

    if (h_try < tiny)
      return fault(collapsing ? "amplitude collapsed" : "step size underflow");

    const auto trial = ode::dormand_prince_step<3>(rhs, z, y, dydz, h_try, tol);
    if (!trial.valid) {
      // Stage produced A <= 0 (or a non-finite value): halve and retry.
      ++result.rejected_steps;
      collapsing = true;
      h = 0.5 * h_try;
      continue;
    }
    collapsing = false;
    if (trial.error > 1.0) {
      ++result.rejected_steps;
      h = h_try * controller.factor(trial.error, false);
      continue;
    }

    // Equal is allowed: far in the forbidden region A^-2 drops below the
    // resolution of the accumulated phase.
    if (!(trial.y[2] >= y[2])) return fault("phase decreased");

    const double grown = h_try * controller.factor(trial.error, true);
    h = clipped ? std::max(h, grown) : grown;
    h = std::min(h, h_max);
    z = targets.size() > next_target && clipped ? targets[next_target] : z + h_try;
    y = trial.y;
    dydz = trial.dydt;
    ++result.accepted_steps;

    const AmplitudeState here = to_state(z, y);
    while (next_target < targets.size() && targets[next_target] <= z) {
      result.outputs.push_back(here);
      ++next_target;
    }
    if (outputs.on_step) outputs.on_step(here);

    const double rate = 1.0 / (y[0] * y[0]);
    peak_rate = std::max(peak_rate, rate);
    const bool outputs_pending = outputs.reach_all_positions && next_target < targets.size();
    if (!outputs_pending && v(here.x) > forbidden_level &&
        rate < config.termination_ratio * peak_rate) {
      result.state = here;
      result.reason = Termination::converged;
      return result;
    }
  }
}

}  // namespace semirel
