#pragma once

#include <cstddef>
#include <vector>

namespace semirel {

/// Real symmetric tridiagonal matrix: `diag` has N entries, `off` has N - 1.
struct SymmetricTridiagonal {
  std::vector<double> diag;
  std::vector<double> off;

  std::size_t size() const noexcept { return diag.size(); }
  void validate() const;
};

/// Number of eigenvalues strictly below `x` (Sturm sequence / LDL^T inertia).
std::size_t eigenvalues_below(const SymmetricTridiagonal& t, double x);

/// The index-th smallest eigenvalue (0-based) by Sturm bisection, to relative
/// precision ~1e-12 (absolute floor at 1e-300).
double tridiagonal_eigenvalue(const SymmetricTridiagonal& t, std::size_t index);

/// Same, searching [lo, hi] first; falls back to the Gershgorin interval if
/// the hint does not bracket the requested eigenvalue.
double tridiagonal_eigenvalue(const SymmetricTridiagonal& t, std::size_t index, double lo,
                              double hi);

/// The k smallest eigenvalues in ascending order, 1 <= k <= N.
std::vector<double> tridiagonal_eigenvalues(const SymmetricTridiagonal& t, std::size_t k);

/// Unit-norm eigenvector for a (converged) eigenvalue by inverse iteration.
std::vector<double> tridiagonal_eigenvector(const SymmetricTridiagonal& t, double eigenvalue);

}  // namespace semirel
