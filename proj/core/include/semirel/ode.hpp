#pragma once

// Dormand-Prince 5(4) embedded Runge-Kutta pair with FSAL and a PI step-size
// controller. Only the single-step machinery lives here; drivers decide when to
// stop, where to place output points, and how to react to invalid states.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>

namespace semirel::ode {

template <std::size_t N>
using State = std::array<double, N>;

struct Tolerance {
  double rel = 1e-11;
  double abs = 1e-13;
};

template <std::size_t N>
struct Trial {
  State<N> y{};
  State<N> dydt{};     // derivative at the new point (FSAL)
  double error = 0.0;  // scaled RMS error estimate; accept when <= 1
  bool valid = false;  // false when the right-hand side rejected a stage
};

/// Butcher tableau of Dormand & Prince (1980).
struct DormandPrinceTableau {
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                          a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                          a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  // b - b_hat (fifth minus embedded fourth order weights)
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                          e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
};

/// One trial step of size h from (t, y) with known derivative dydt.
/// `rhs(t, y, out)` returns false if y is outside the admissible state space.
template <std::size_t N, class Rhs>
Trial<N> dormand_prince_step(Rhs&& rhs, double t, const State<N>& y, const State<N>& dydt,
                             double h, const Tolerance& tol) {
  using T = DormandPrinceTableau;
  Trial<N> out;
  State<N> k2, k3, k4, k5, k6, tmp;

  auto stage = [&](auto&& combine, double tc, State<N>& k) {
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * combine(i);
    return rhs(tc, tmp, k);
  };

  if (!stage([&](std::size_t i) { return T::a21 * dydt[i]; }, t + T::c2 * h, k2)) return out;
  if (!stage([&](std::size_t i) { return T::a31 * dydt[i] + T::a32 * k2[i]; }, t + T::c3 * h, k3))
    return out;
  if (!stage([&](std::size_t i) { return T::a41 * dydt[i] + T::a42 * k2[i] + T::a43 * k3[i]; },
             t + T::c4 * h, k4))
    return out;
  if (!stage(
          [&](std::size_t i) {
            return T::a51 * dydt[i] + T::a52 * k2[i] + T::a53 * k3[i] + T::a54 * k4[i];
          },
          t + T::c5 * h, k5))
    return out;
  if (!stage(
          [&](std::size_t i) {
            return T::a61 * dydt[i] + T::a62 * k2[i] + T::a63 * k3[i] + T::a64 * k4[i] +
                   T::a65 * k5[i];
          },
          t + h, k6))
    return out;
  for (std::size_t i = 0; i < N; ++i)
    out.y[i] = y[i] + h * (T::b1 * dydt[i] + T::b3 * k3[i] + T::b4 * k4[i] + T::b5 * k5[i] +
                           T::b6 * k6[i]);
  if (!rhs(t + h, out.y, out.dydt)) return out;

  double sum = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    const double err = h * (T::e1 * dydt[i] + T::e3 * k3[i] + T::e4 * k4[i] + T::e5 * k5[i] +
                            T::e6 * k6[i] + T::e7 * out.dydt[i]);
    const double scale = tol.abs + tol.rel * std::max(std::abs(y[i]), std::abs(out.y[i]));
    sum += (err / scale) * (err / scale);
  }
  out.error = std::sqrt(sum / static_cast<double>(N));
  out.valid = std::isfinite(out.error);
  return out;
}

/// PI controller (Gustafsson) for a method whose error estimate is of order 5.
class StepController {
public:
  /// Factor by which to scale h after a trial with the given error norm.
  double factor(double error, bool accepted) {
    constexpr double safety = 0.9, min_factor = 0.2, max_factor = 5.0;
    constexpr double alpha = 0.7 / 5.0, beta = 0.4 / 5.0;
    if (error == 0.0) return max_factor;
    double f = safety * std::pow(error, -alpha);
    if (accepted) {
      f *= std::pow(previous_error_, beta);
      previous_error_ = std::max(error, 1e-4);
    }
    f = std::clamp(f, min_factor, max_factor);
    if (!accepted) f = std::min(f, 1.0);
    return f;
  }

private:
  double previous_error_ = 1e-4;
};

}  // namespace semirel::ode
