#pragma once

// Amplitude equations of the amplitude-phase representation psi = A sin(Phi),
// Phi' = A^-2, integrated outward from the well minimum together with the phase.
//
//   NR (Milne):  A'' = A^-3 - (2 mu / hbar^2) (eps - V) A
//   WP:          A'' = -(2 mu / hbar^2) [eps - V + m c^2 - W(hbar A^-2)] A
//
// The WP bracket is evaluated as eps - V - (W - m c^2) so that the c -> infinity
// limit does not lose digits to cancellation.

#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "semirel/potential.hpp"
#include "semirel/two_body.hpp"

namespace semirel {

enum class EquationMode { nr, wp };

std::string_view to_string(EquationMode mode);
EquationMode parse_equation_mode(std::string_view name);

/// Point on an amplitude trajectory. `slope` is dA/dx in the physical coordinate;
/// `phase` is the accumulated integral of A^-2 |dx| from the starting point.
struct AmplitudeState {
  double x = 0.0;
  double amplitude = 1.0;
  double slope = 0.0;
  double phase = 0.0;
};

struct IntegrationConfig {
  double rel_tol = 1e-11;
  double abs_tol = 1e-13;
  double h_init = 1e-3;
  double h_max = 0.25;
  /// Stop once A^-2 has fallen below this fraction of its running maximum...
  double termination_ratio = 1e-10;
  /// ...and V(x) exceeds eps + forbidden_margin * (eps - V0).
  double forbidden_margin = 0.05;
  /// Largest distance |x - x_min| an integration may cover.
  double x_max = 200.0;
  /// Working length unit x*; the ODE is advanced in z = (x - x_min) / x*.
  double length_scale = 1.0;
  /// Multiplies the initial amplitude A0 chosen by the spectrum solvers. Any
  /// positive value is legitimate in NR mode; 1 is the local-balance choice.
  double amplitude_factor = 1.0;

  void validate() const;
};

enum class Termination { converged, range_limit, fault };

std::string_view to_string(Termination reason);

class IntegrationFault : public std::runtime_error {
public:
  IntegrationFault(Termination reason, const std::string& what)
      : std::runtime_error(what), reason_(reason) {}
  Termination reason() const noexcept { return reason_; }

private:
  Termination reason_;
};

struct HalfAxisResult {
  AmplitudeState state;  ///< terminal state; state.phase is the half-axis phase integral
  Termination reason = Termination::fault;
  std::string diagnostic;
  std::size_t accepted_steps = 0;
  std::size_t rejected_steps = 0;
  std::vector<AmplitudeState> outputs;  ///< states at the requested positions that were reached
};

struct HalfAxisOutputs {
  /// Positions on the integrated side, ordered by increasing distance from x_min.
  std::span<const double> positions;
  /// Called after every accepted step.
  std::function<void(const AmplitudeState&)> on_step;
  /// Keep integrating past the forbidden-region cutoff until every position is reached.
  bool reach_all_positions = false;
};

/// Second derivative A'' of the selected amplitude equation.
/// Throws IntegrationFault ("amplitude collapsed") if amplitude <= 0.
double amplitude_rhs(EquationMode mode, const TwoBodySystem& system, const Potential& v,
                     double eps, double x, double amplitude);

/// Integrates {A, A', Phi} from init.x (the well minimum) in `direction` (+1 or -1)
/// with adaptive Dormand-Prince 5(4) steps until the forbidden-region cutoff fires
/// (converged), the range limit is hit, or the integration faults. Faults are
/// reported through the result, not thrown.
HalfAxisResult integrate_half_axis(EquationMode mode, const TwoBodySystem& system,
                                   const Potential& v, double eps, const AmplitudeState& init,
                                   const IntegrationConfig& config, int direction,
                                   const HalfAxisOutputs& outputs = {});

}  // namespace semirel
