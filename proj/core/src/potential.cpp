#include "semirel/potential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace semirel {

std::string_view to_string(PotentialKind kind) {
  switch (kind) {
    case PotentialKind::harmonic: return "harmonic";
    case PotentialKind::quartic: return "quartic";
    case PotentialKind::gaussian_well: return "gaussian-well";
  }
  return "unknown";
}

PotentialKind parse_potential_kind(std::string_view name) {
  if (name == "harmonic") return PotentialKind::harmonic;
  if (name == "quartic") return PotentialKind::quartic;
  if (name == "gaussian-well" || name == "gaussian") return PotentialKind::gaussian_well;
  throw std::invalid_argument("unknown potential kind '" + std::string(name) + "'");
}

Potential Potential::harmonic(double beta) {
  if (!(std::isfinite(beta) && beta > 0.0))
    throw std::invalid_argument("harmonic stiffness must be finite and positive");
  return {PotentialKind::harmonic, {beta}};
}

Potential Potential::quartic(double beta2, double beta4) {
  if (!std::isfinite(beta2) || !std::isfinite(beta4))
    throw std::invalid_argument("quartic coefficients must be finite");
  if (beta4 < 0.0)
    throw std::invalid_argument("quartic coefficient beta4 must be non-negative");
  return {PotentialKind::quartic, {beta2, beta4}};
}

Potential Potential::gaussian_well(double depth, double width) {
  if (!(std::isfinite(depth) && depth > 0.0))
    throw std::invalid_argument("gaussian well depth must be finite and positive");
  if (!(std::isfinite(width) && width > 0.0))
    throw std::invalid_argument("gaussian well width must be finite and positive");
  return {PotentialKind::gaussian_well, {depth, width}};
}

double Potential::operator()(double x) const noexcept {
  const double x2 = x * x;
  switch (kind_) {
    case PotentialKind::harmonic:
      return 0.5 * params_[0] * x2;
    case PotentialKind::quartic:
      return 0.5 * params_[0] * x2 + 0.25 * params_[1] * x2 * x2;
    case PotentialKind::gaussian_well: {
      const double w = params_[1];
      return -params_[0] * std::exp(-x2 / (2.0 * w * w));
    }
  }
  return 0.0;
}

double Potential::v_min() const noexcept { return (*this)(x_min()); }

double Potential::curvature() const noexcept {
  switch (kind_) {
    case PotentialKind::harmonic: return params_[0];
    case PotentialKind::quartic: return params_[0];
    case PotentialKind::gaussian_well: return params_[0] / (params_[1] * params_[1]);
  }
  return 0.0;
}

double Potential::asymptote() const noexcept {
  switch (kind_) {
    case PotentialKind::harmonic:
      return std::numeric_limits<double>::infinity();
    case PotentialKind::quartic:
      if (params_[1] > 0.0 || params_[0] > 0.0) return std::numeric_limits<double>::infinity();
      return params_[0] < 0.0 ? -std::numeric_limits<double>::infinity() : 0.0;
    case PotentialKind::gaussian_well:
      return 0.0;
  }
  return 0.0;
}

WellMinimum validate_single_well(const Potential& v, Interval domain, int samples) {
  if (samples < 100)
    throw std::invalid_argument("validate_single_well: need at least 100 samples");
  if (!(domain.lo < domain.hi))
    throw std::invalid_argument("validate_single_well: empty domain");
  const double x0 = v.x_min();
  if (x0 < domain.lo || x0 > domain.hi)
    throw std::invalid_argument("validate_single_well: domain does not contain x_min");

  const double v0 = v(x0);
  const double step = (domain.hi - domain.lo) / (samples - 1);
  // Walk outward from x_min on each side; V must never decrease going outward.
  auto monotone_outward = [&](int direction) {
    double prev = v0;
    const double extent = direction > 0 ? domain.hi - x0 : x0 - domain.lo;
    const int count = static_cast<int>(std::ceil(extent / step));
    for (int i = 1; i <= count; ++i) {
      const double x = x0 + direction * std::min(i * step, extent);
      const double cur = v(x);
      const double slack = 64.0 * std::numeric_limits<double>::epsilon() *
                           std::max(std::abs(cur), std::abs(prev));
      if (cur < prev - slack) return false;
      prev = cur;
    }
    return true;
  };
  if (!monotone_outward(+1) || !monotone_outward(-1))
    throw std::domain_error("potential is not single-well on domain");
  return {x0, v0};
}

}  // namespace semirel
