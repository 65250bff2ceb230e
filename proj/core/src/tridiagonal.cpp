#include "semirel/tridiagonal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace semirel {

void SymmetricTridiagonal::validate() const {
  if (diag.empty()) throw std::invalid_argument("tridiagonal matrix is empty");
  if (off.size() + 1 != diag.size())
    throw std::invalid_argument("tridiagonal matrix needs N - 1 off-diagonal entries");
}

std::size_t eigenvalues_below(const SymmetricTridiagonal& t, double x) {
  const auto& d = t.diag;
  const auto& e = t.off;
  constexpr double tiny = std::numeric_limits<double>::min();
  std::size_t count = 0;
  double q = d[0] - x;
  if (q < 0.0) ++count;
  for (std::size_t i = 1; i < d.size(); ++i) {
    if (q == 0.0) q = tiny;
    q = d[i] - x - e[i - 1] * e[i - 1] / q;
    if (q < 0.0) ++count;
  }
  return count;
}

namespace {

struct Bounds {
  double lo;
  double hi;
};

Bounds gershgorin(const SymmetricTridiagonal& t) {
  const std::size_t n = t.size();
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = (i > 0 ? std::abs(t.off[i - 1]) : 0.0) +
                     (i + 1 < n ? std::abs(t.off[i]) : 0.0);
    lo = std::min(lo, t.diag[i] - r);
    hi = std::max(hi, t.diag[i] + r);
  }
  const double pad = 1e-12 * std::max({std::abs(lo), std::abs(hi), 1e-300});
  return {lo - pad, hi + pad};
}

double bisect(const SymmetricTridiagonal& t, std::size_t index, Bounds b) {
  if (t.size() == 1) return t.diag[0];
  double lo = b.lo, hi = b.hi;
  // Invariant: count(lo) <= index < count(hi).
  while (hi - lo > 1e-12 * std::max({std::abs(lo), std::abs(hi), 1e-300}) * 0.5) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (eigenvalues_below(t, mid) > index ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double tridiagonal_eigenvalue(const SymmetricTridiagonal& t, std::size_t index) {
  t.validate();
  if (index >= t.size()) throw std::out_of_range("eigenvalue index exceeds matrix size");
  return bisect(t, index, gershgorin(t));
}

double tridiagonal_eigenvalue(const SymmetricTridiagonal& t, std::size_t index, double lo,
                              double hi) {
  t.validate();
  if (index >= t.size()) throw std::out_of_range("eigenvalue index exceeds matrix size");
  if (lo < hi && eigenvalues_below(t, lo) <= index && eigenvalues_below(t, hi) > index)
    return bisect(t, index, {lo, hi});
  return bisect(t, index, gershgorin(t));
}

std::vector<double> tridiagonal_eigenvalues(const SymmetricTridiagonal& t, std::size_t k) {
  t.validate();
  if (k < 1 || k > t.size()) throw std::out_of_range("need 1 <= k <= N eigenvalues");
  const Bounds all = gershgorin(t);
  std::vector<double> out(k);
  for (std::size_t i = 0; i < k; ++i) {
    // Eigenvalue i is bounded below by eigenvalue i-1.
    Bounds b = all;
    if (i > 0) b.lo = std::max(all.lo, out[i - 1] - 1e-12 * std::max(std::abs(out[i - 1]), 1.0));
    out[i] = bisect(t, i, b);
  }
  return out;
}

std::vector<double> tridiagonal_eigenvector(const SymmetricTridiagonal& t, double eigenvalue) {
  t.validate();
  const std::size_t n = t.size();
  if (n == 1) return {1.0};
  // Shift slightly off the eigenvalue so (T - s I) is nonsingular but nearly so.
  const double shift = eigenvalue + 1e-10 * std::max(std::abs(eigenvalue), 1.0);

  // LU of the shifted tridiagonal with partial pivoting (LAPACK dgttrf layout).
  std::vector<double> dl(t.off), d(n), du(t.off), du2(n, 0.0);
  std::vector<int> swapped(n, 0);
  for (std::size_t i = 0; i < n; ++i) d[i] = t.diag[i] - shift;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (std::abs(d[i]) >= std::abs(dl[i])) {
      if (d[i] == 0.0) d[i] = std::numeric_limits<double>::epsilon();
      const double f = dl[i] / d[i];
      dl[i] = f;
      d[i + 1] -= f * du[i];
    } else {
      const double f = d[i] / dl[i];
      d[i] = dl[i];
      dl[i] = f;
      const double tmp = du[i];
      du[i] = d[i + 1];
      d[i + 1] = tmp - f * d[i + 1];
      if (i + 2 < n) {
        du2[i] = du[i + 1];
        du[i + 1] = -f * du[i + 1];
      }
      swapped[i] = 1;
    }
  }
  if (d[n - 1] == 0.0) d[n - 1] = std::numeric_limits<double>::epsilon();

  auto solve = [&](std::vector<double>& b) {
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (swapped[i]) {
        const double tmp = b[i];
        b[i] = b[i + 1];
        b[i + 1] = tmp - dl[i] * b[i];
      } else {
        b[i + 1] -= dl[i] * b[i];
      }
    }
    b[n - 1] /= d[n - 1];
    b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / d[n - 2];
    for (std::size_t i = n - 2; i-- > 0;)
      b[i] = (b[i] - du[i] * b[i + 1] - du2[i] * b[i + 2]) / d[i];
  };

  std::vector<double> v(n);
  // Deterministic, non-symmetric start so both parities are represented.
  for (std::size_t i = 0; i < n; ++i) v[i] = 1.0 + 0.5 * std::sin(1.0 + 0.37 * static_cast<double>(i));
  for (int iter = 0; iter < 3; ++iter) {
    solve(v);
    double norm = 0.0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(norm);
    for (double& x : v) x /= norm;
  }
  // Fix the overall sign: largest component positive.
  const auto big = std::max_element(v.begin(), v.end(),
                                     [](double a, double b) { return std::abs(a) < std::abs(b); });
  if (*big < 0.0)
    for (double& x : v) x = -x;
  return v;
}

}  // namespace semirel
