#pragma once

// Reference spectra for V = beta x^2 / 2:
//  * the analytic Schrodinger levels hbar sqrt(beta/mu) (n + 1/2);
//  * the spinless Salpeter levels from the momentum representation, where
//    x^2 = -hbar^2 d^2/dp^2 turns the problem into the local eigenproblem
//        [W(p) - (beta hbar^2 / 2) d^2/dp^2] phi = M phi
//    discretized with a three-point stencil on a Dirichlet-truncated grid.

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "semirel/spectrum.hpp"
#include "semirel/tridiagonal.hpp"
#include "semirel/two_body.hpp"

namespace semirel {

/// Interior points p_i = -P + i h, i = 1..N, h = 2P / (N + 1).
class MomentumGrid {
public:
  MomentumGrid(double extent, std::size_t points);

  double extent() const noexcept { return extent_; }
  std::size_t points() const noexcept { return points_; }
  double spacing() const noexcept { return 2.0 * extent_ / static_cast<double>(points_ + 1); }
  double operator[](std::size_t i) const noexcept {
    return -extent_ + static_cast<double>(i + 1) * spacing();
  }

  /// Same extent with the spacing halved (N -> 2N + 1).
  MomentumGrid refined() const { return {extent_, 2 * points_ + 1}; }

private:
  double extent_;
  std::size_t points_;
};

double nr_harmonic_spectrum(double mu, double beta, int n, UnitSystem units = {});

/// Kinetic term as a function of momentum.
using KineticFunction = std::function<double(double)>;

SymmetricTridiagonal build_momentum_hamiltonian(const TwoBodySystem& system, double beta,
                                                const MomentumGrid& grid);

/// Variant with an arbitrary kinetic term (e.g. m c^2 + p^2 / (2 mu)).
SymmetricTridiagonal build_momentum_hamiltonian(const KineticFunction& kinetic, double beta,
                                                double hbar, const MomentumGrid& grid);

struct ExactOptions {
  double accuracy = 1e-6;             ///< stop when successive refinements differ by less
  std::size_t initial_points = 2000;  ///< N of the first grid
  std::size_t max_points = std::size_t{1} << 23;
  double tail_threshold = 1e-10;  ///< |phi(+-P)| / max|phi| accepted on the first grid
  int max_extent_growth = 8;
};

struct RefinementStep {
  std::size_t points = 0;
  double spacing = 0.0;
  std::vector<double> eps;  ///< one per requested level
};

struct ExactSpectrum {
  std::vector<EnergyLevel> levels;
  bool converged = false;
  double achieved_delta = 0.0;  ///< max change over levels at the last refinement
  double extent = 0.0;
  std::size_t points = 0;
  std::vector<RefinementStep> history;
  std::string message;  ///< "not converged ..." when the budget ran out
};

/// Initial momentum half-extent: 6 max(p_cl, sqrt(2 mu eps_NR(n_max))) where
/// W(p_cl) = m c^2 + 1.5 eps_NR(n_max).
double initial_momentum_extent(const TwoBodySystem& system, double beta, int n_max);

/// Exact spinless Salpeter levels eps_n = M_n - m c^2 for V = beta x^2 / 2.
/// Refines the grid until successive results change by less than
/// options.accuracy for every requested level. `levels` must be ascending.
ExactSpectrum exact_salpeter_levels(const TwoBodySystem& system, double beta,
                                    std::span<const int> levels,
                                    const ExactOptions& options = {});

/// Same refinement loop with a caller-supplied kinetic term; `rest_energy` is
/// subtracted from the eigenvalues.
ExactSpectrum exact_levels(const KineticFunction& kinetic, double rest_energy, double beta,
                           double hbar, double extent, std::span<const int> levels,
                           const ExactOptions& options = {});

}  // namespace semirel
