#pragma once

// Bound states from the phase quantization condition
//   integral_{-inf}^{+inf} A^-2 dx = (n + 1) pi,   n = 0, 1, ...
// where n counts the nodes of psi = A sin(Phi).

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "semirel/milne.hpp"
#include "semirel/potential.hpp"
#include "semirel/two_body.hpp"

namespace semirel {

enum class SolverKind { nr, wp, exact, analytic_nr };

std::string_view to_string(SolverKind kind);
SolverKind solver_kind(EquationMode mode);

/// One bound state. `residual` and `bracket` are solver specific:
/// for phase quantization they are |Phi_total - (n+1) pi| and the final energy
/// bracket width; for the momentum-space solver they are the last refinement
/// change and the final grid spacing.
struct EnergyLevel {
  int n = 0;
  double eps = 0.0;
  SolverKind kind = SolverKind::wp;
  double residual = 0.0;
  double bracket = 0.0;
  int evaluations = 0;
};

/// A0 from the local (A' = A'' = 0) WP balance at the well minimum:
///   hbar^2 c^2 / A0^4 = R,  R = [(M^2 - m1^2 c^4 + m2^2 c^4) / M]^2 / 4 - m2^2 c^4,
///   M = m c^2 + eps - v0, m1 >= m2.
/// R is evaluated in the factored form
///   R = d (2mc^2 + d)(2 m1 c^2 + d)(2 m2 c^2 + d) / (4 (mc^2 + d)^2),  d = eps - v0,
/// which is algebraically identical but free of cancellation for large c.
/// Throws std::domain_error when R <= 0 (energy at or below the kinematic threshold).
double initial_amplitude_wp(const TwoBodySystem& system, double eps, double v0);

/// A0 = (hbar^2 / (2 mu (eps - v0)))^{1/4}, the constant Milne solution at the minimum.
/// Throws std::domain_error when eps <= v0.
double initial_amplitude_nr(const TwoBodySystem& system, double eps, double v0);

double initial_amplitude(EquationMode mode, const TwoBodySystem& system, double eps, double v0);

struct PhaseIntegral {
  double total = 0.0;
  double left = 0.0;   ///< phase accumulated towards -x
  double right = 0.0;  ///< phase accumulated towards +x
  double x_left = 0.0;   ///< left termination point
  double x_right = 0.0;  ///< right termination point
};

/// Both half-axis integrations from the minimum. When `use_symmetry` is set and
/// the potential is symmetric only the +x side is integrated and mirrored.
/// Throws IntegrationFault if either side does not terminate normally.
PhaseIntegral phase_integral(EquationMode mode, const TwoBodySystem& system, const Potential& v,
                             double eps, const IntegrationConfig& config,
                             bool use_symmetry = true);

/// Phi_total(eps).
double total_phase(EquationMode mode, const TwoBodySystem& system, const Potential& v,
                   double eps, const IntegrationConfig& config);

struct QuantizationOptions {
  double phase_tol = 1e-8;   ///< |Phi_total - (n+1) pi|
  double energy_tol = 1e-9;  ///< bracket width relative to max(|eps|, 1)
  double seed_low = 0.3;     ///< initial bracket as multiples of the harmonic estimate
  double seed_high = 1.2;
  int max_evaluations = 200;
};

/// Solves Phi_total(eps) = (n + 1) pi by bracketing, bisection and Illinois
/// regula falsi. `lower_bound`, when given, is an energy known to lie below
/// level n (for instance level n-1) and tightens the starting bracket.
/// Throws std::runtime_error ("level outside search window") if no bracket is
/// found and std::logic_error if Phi_total is observed to decrease with eps.
EnergyLevel solve_level(EquationMode mode, const TwoBodySystem& system, const Potential& v, int n,
                        const IntegrationConfig& config, const QuantizationOptions& options = {},
                        std::optional<double> lower_bound = std::nullopt);

struct LevelOutcome {
  int n = 0;
  std::optional<EnergyLevel> level;
  std::string error;

  bool ok() const noexcept { return level.has_value(); }
};

/// One outcome per requested n (ascending). Each solved level seeds the lower
/// end of the next bracket. Failures are recorded per level.
std::vector<LevelOutcome> solve_spectrum(EquationMode mode, const TwoBodySystem& system,
                                         const Potential& v, std::span<const int> levels,
                                         const IntegrationConfig& config,
                                         const QuantizationOptions& options = {});

struct WaveSample {
  double x = 0.0;
  double psi = 0.0;
  double amplitude = 0.0;
  double phase = 0.0;  ///< Phi measured from the left termination point
};

/// Left and right termination points of the integrations for this level.
Interval integrated_extent(EquationMode mode, const TwoBodySystem& system, const Potential& v,
                           const EnergyLevel& level, const IntegrationConfig& config);

/// psi(x) = A(x) sin(Phi(x)) on `grid` (ascending). Left of the minimum the sine
/// is taken of the phase remaining to the left end point; right of it the
/// equivalent (-1)^n sin(phase remaining to the right end point) is used so that
/// both tails decay cleanly. Throws std::out_of_range if the grid leaves the
/// integrated range.
std::vector<WaveSample> reconstruct_wavefunction(EquationMode mode, const TwoBodySystem& system,
                                                 const Potential& v, const EnergyLevel& level,
                                                 std::span<const double> grid,
                                                 const IntegrationConfig& config);

/// Uniform grid of `points` samples spanning the integrated range of `level`.
std::vector<double> wavefunction_grid(EquationMode mode, const TwoBodySystem& system,
                                      const Potential& v, const EnergyLevel& level,
                                      const IntegrationConfig& config, int points);

struct NodeCount {
  int nodes = 0;
  bool sparse = false;  ///< fewer than 20 samples per half wavelength on average
};

/// Strict sign changes of psi, ignoring samples below 1e-10 max|psi|.
NodeCount count_nodes(std::span<const double> psi);
NodeCount count_nodes(std::span<const WaveSample> samples);

/// max |psi'' + (2 mu / hbar^2)(eps - V) psi| over the classically allowed
/// region, divided by max|psi| * 2 mu |eps - v0| / hbar^2. psi'' uses a
/// five-point stencil of width `spacing`; stencils touching the joint at x_min
/// are skipped. Only meaningful for levels of the NR equation.
double schrodinger_residual(const TwoBodySystem& system, const Potential& v,
                            const EnergyLevel& level, const IntegrationConfig& config,
                            double spacing = 1e-3);

}  // namespace semirel
