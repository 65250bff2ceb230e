#include "semirel/exact.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace semirel {

MomentumGrid::MomentumGrid(double extent, std::size_t points) : extent_(extent), points_(points) {
  if (!(std::isfinite(extent) && extent > 0.0))
    throw std::invalid_argument("momentum grid extent must be finite and positive");
  if (points < 3) throw std::invalid_argument("momentum grid needs at least 3 points");
}

double nr_harmonic_spectrum(double mu, double beta, int n, UnitSystem units) {
  if (!(mu > 0.0) || !(beta > 0.0)) throw std::invalid_argument("mu and beta must be positive");
  if (n < 0) throw std::invalid_argument("n must be non-negative");
  units.validate();
  return units.hbar * std::sqrt(beta / mu) * (n + 0.5);
}

SymmetricTridiagonal build_momentum_hamiltonian(const KineticFunction& kinetic, double beta,
                                                double hbar, const MomentumGrid& grid) {
  if (!(beta >= 0.0)) throw std::invalid_argument("beta must be non-negative");
  const std::size_t n = grid.points();
  const double h = grid.spacing();
  const double coupling = beta * hbar * hbar / (h * h);
  SymmetricTridiagonal t;
  t.diag.resize(n);
  t.off.assign(n - 1, -0.5 * coupling);
  for (std::size_t i = 0; i < n; ++i) t.diag[i] = kinetic(grid[i]) + coupling;
  return t;
}

SymmetricTridiagonal build_momentum_hamiltonian(const TwoBodySystem& system, double beta,
                                                const MomentumGrid& grid) {
  return build_momentum_hamiltonian([&](double p) { return total_kinetic(system, p); }, beta,
                                    system.units().hbar, grid);
}

double initial_momentum_extent(const TwoBodySystem& system, double beta, int n_max) {
  const double mu = system.reduced_mass();
  const double eps_nr = nr_harmonic_spectrum(mu, beta, n_max, system.units());
  const double target = system.rest_energy() + 1.5 * eps_nr;
  // W is even and increasing in |p|; bracket then bisect W(p) = target.
  double lo = 0.0, hi = std::sqrt(2.0 * mu * 1.5 * eps_nr) + 1.0;
  while (total_kinetic(system, hi) < target) hi *= 2.0;
  for (int i = 0; i < 200 && hi - lo > 1e-14 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (total_kinetic(system, mid) < target ? lo : hi) = mid;
  }
  return 6.0 * std::max(hi, std::sqrt(2.0 * mu * eps_nr));
}

namespace {

std::vector<double> eigen_energies(const SymmetricTridiagonal& t, std::span<const int> levels,
                                   double rest, const std::vector<double>* previous,
                                   double previous_delta) {
  std::vector<double> out;
  out.reserve(levels.size());
  for (std::size_t i = 0; i < levels.size(); ++i) {
    const auto index = static_cast<std::size_t>(levels[i]);
    double m;
    if (previous) {
      const double guess = (*previous)[i] + rest;
      const double width = 4.0 * previous_delta + 1e-9 * std::max(std::abs(guess), 1.0);
      m = tridiagonal_eigenvalue(t, index, guess - width, guess + width);
    } else {
      m = tridiagonal_eigenvalue(t, index);
    }
    out.push_back(m - rest);
  }
  return out;
}

double edge_ratio(const SymmetricTridiagonal& t, double eigenvalue) {
  const auto v = tridiagonal_eigenvector(t, eigenvalue);
  double peak = 0.0;
  for (double x : v) peak = std::max(peak, std::abs(x));
  return std::max(std::abs(v.front()), std::abs(v.back())) / peak;
}

}  // namespace

ExactSpectrum exact_levels(const KineticFunction& kinetic, double rest_energy, double beta,
                           double hbar, double extent, std::span<const int> levels,
                           const ExactOptions& options) {
  if (levels.empty()) throw std::invalid_argument("exact_levels: no levels requested");
  if (!std::is_sorted(levels.begin(), levels.end()) || levels.front() < 0)
    throw std::invalid_argument("exact_levels: levels must be non-negative and ascending");
  if (!(options.accuracy > 0.0)) throw std::invalid_argument("exact_levels: accuracy must be > 0");
  if (static_cast<std::size_t>(levels.back()) >= options.initial_points)
    throw std::invalid_argument("exact_levels: level index exceeds grid size");

  ExactSpectrum out;

  // Grow the extent until every requested eigenvector has decayed at the boundary.
  MomentumGrid grid(extent, options.initial_points);
  std::vector<double> current;
  for (int growth = 0;; ++growth) {
    const auto t = build_momentum_hamiltonian(kinetic, beta, hbar, grid);
    current = eigen_energies(t, levels, rest_energy, nullptr, 0.0);
    double worst = 0.0;
    for (double e : current) worst = std::max(worst, edge_ratio(t, e + rest_energy));
    if (worst < options.tail_threshold) break;
    if (growth == options.max_extent_growth) {
      std::ostringstream msg;
      msg << "boundary tail " << worst << " above threshold at P = " << grid.extent();
      out.message = msg.str();
      break;
    }
    grid = MomentumGrid(1.5 * grid.extent(), grid.points());
  }
  out.history.push_back({grid.points(), grid.spacing(), current});

  double delta = 0.0;
  std::vector<double> deltas(levels.size(), 0.0);
  for (;;) {
    const MomentumGrid next = grid.refined();
    if (next.points() > options.max_points) break;
    const auto t = build_momentum_hamiltonian(kinetic, beta, hbar, next);
    auto refined = eigen_energies(t, levels, rest_energy, &current, delta);
    delta = 0.0;
    for (std::size_t i = 0; i < levels.size(); ++i) {
      deltas[i] = std::abs(refined[i] - current[i]);
      delta = std::max(delta, deltas[i]);
    }
    grid = next;
    current = std::move(refined);
    out.history.push_back({grid.points(), grid.spacing(), current});
    if (delta < options.accuracy) {
      out.converged = true;
      break;
    }
  }

  out.achieved_delta = delta;
  out.extent = grid.extent();
  out.points = grid.points();
  if (!out.converged) {
    std::ostringstream msg;
    msg << "not converged: last refinement changed levels by " << delta << " at N = "
        << grid.points() << (out.message.empty() ? "" : "; ") << out.message;
    out.message = msg.str();
  }
  for (std::size_t i = 0; i < levels.size(); ++i) {
    out.levels.push_back({levels[i], current[i], SolverKind::exact, deltas[i], grid.spacing(),
                          static_cast<int>(out.history.size())});
  }
  return out;
}

ExactSpectrum exact_salpeter_levels(const TwoBodySystem& system, double beta,
                                    std::span<const int> levels, const ExactOptions& options) {
  if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive");
  if (levels.empty()) throw std::invalid_argument("exact_salpeter_levels: no levels requested");
  const double extent = initial_momentum_extent(system, beta, levels.back());
  return exact_levels([&](double p) { return total_kinetic(system, p); }, system.rest_energy(),
                      beta, system.units().hbar, extent, levels, options);
}

}  // namespace semirel
