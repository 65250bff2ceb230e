#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace semirel {

enum class PotentialKind { harmonic, quartic, gaussian_well };

std::string_view to_string(PotentialKind kind);
PotentialKind parse_potential_kind(std::string_view name);

/// A non-singular single-well interaction V(x).
///
///   harmonic       V = beta x^2 / 2
///   quartic        V = beta2 x^2 / 2 + beta4 x^4 / 4
///   gaussian_well  V = -depth exp(-x^2 / (2 width^2))
///
/// Construction checks parameter signs only. Whether the shape really has a
/// single minimum on a working interval is decided by validate_single_well,
/// which is what the spectrum solvers call before integrating.
class Potential {
public:
  static Potential harmonic(double beta);
  static Potential quartic(double beta2, double beta4);
  static Potential gaussian_well(double depth, double width);

  double operator()(double x) const noexcept;

  PotentialKind kind() const noexcept { return kind_; }
  const std::vector<double>& params() const noexcept { return params_; }
  double x_min() const noexcept { return 0.0; }
  double v_min() const noexcept;
  bool symmetric() const noexcept { return true; }

  /// V''(x_min); zero for a pure quartic.
  double curvature() const noexcept;

  /// lim V(x) for |x| -> infinity (+inf for confining wells).
  double asymptote() const noexcept;

private:
  Potential(PotentialKind kind, std::vector<double> params)
      : kind_(kind), params_(std::move(params)) {}

  PotentialKind kind_;
  std::vector<double> params_;
};

/// Same as Potential::operator().
inline double evaluate(const Potential& v, double x) noexcept { return v(x); }

struct Interval {
  double lo;
  double hi;
};

struct WellMinimum {
  double x_min;
  double v0;
};

/// Samples V on `domain` and confirms it is non-increasing left of x_min and
/// non-decreasing right of it. Throws std::domain_error
/// ("potential is not single-well on domain") otherwise.
WellMinimum validate_single_well(const Potential& v, Interval domain, int samples = 1000);

}  // namespace semirel
