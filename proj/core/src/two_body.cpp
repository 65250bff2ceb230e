#include "semirel/two_body.hpp"

#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace semirel {

void UnitSystem::validate() const {
  if (!(std::isfinite(hbar) && hbar > 0.0))
    throw std::invalid_argument("hbar must be finite and positive");
  if (!(std::isfinite(c) && c > 0.0))
    throw std::invalid_argument("c must be finite and positive");
}

TwoBodySystem::TwoBodySystem(double m1, double m2, UnitSystem units)
    : m1_(m1), m2_(m2), mu_(0.0), m_(0.0), units_(units) {
  if (!(std::isfinite(m1) && m1 > 0.0) || !(std::isfinite(m2) && m2 > 0.0))
    throw std::invalid_argument("particle masses must be finite and positive");
  units_.validate();
  m_ = m1_ + m2_;
  mu_ = m1_ * m2_ / m_;
}

TwoBodySystem TwoBodySystem::from_reduced(double mu, double m1, UnitSystem units) {
  return {m1, partner_mass(mu, m1), units};
}

double partner_mass(double mu, double m1) {
  if (!(mu > 0.0) || !std::isfinite(mu) || !std::isfinite(m1))
    throw std::domain_error("reduced mass must be finite and positive");
  if (!(m1 > mu))
    throw std::domain_error("no positive partner mass exists (m1 <= mu)");
  return mu * m1 / (m1 - mu);
}

double mass_coefficient(const TwoBodySystem& system, int j) {
  if (j < 1)
    throw std::invalid_argument("mass_coefficient: j must be >= 1");
  const double m = system.total_mass();
  const int power = 2 * j - 1;
  return std::pow(system.m1() / m, power) + std::pow(system.m2() / m, power);
}

double half_binomial(int j) {
  if (j < 0 || j > 30)
    throw std::invalid_argument("half_binomial: j out of supported range [0, 30], got " +
                                std::to_string(j));
  // (1/2 choose j) = prod_{k=0}^{j-1} (1 - 2k) / (2 (k + 1)), kept reduced at each step.
  std::int64_t num = 1;
  std::int64_t den = 1;
  for (int k = 0; k < j; ++k) {
    std::int64_t a = 1 - 2 * static_cast<std::int64_t>(k);
    std::int64_t b = 2 * (static_cast<std::int64_t>(k) + 1);
    const std::int64_t g0 = std::gcd(a, b);
    a /= g0;
    b /= g0;
    const std::int64_t g1 = std::gcd(a, den);
    a /= g1;
    den /= g1;
    const std::int64_t g2 = std::gcd(num, b);
    num /= g2;
    b /= g2;
    num *= a;
    den *= b;
  }
  return static_cast<double>(num) / static_cast<double>(den);
}

double total_kinetic(const TwoBodySystem& system, double p) {
  const double c = system.units().c;
  const double pc = p * c;
  const double e1 = system.m1() * c * c;
  const double e2 = system.m2() * c * c;
  return std::hypot(e1, pc) + std::hypot(e2, pc);
}

double kinetic_excess(const TwoBodySystem& system, double p) {
  const double c = system.units().c;
  const double q = p * p * c * c;
  const double e1 = system.m1() * c * c;
  const double e2 = system.m2() * c * c;
  // sqrt(e^2 + q) - e = q / (sqrt(e^2 + q) + e)
  return q / (std::hypot(e1, p * c) + e1) + q / (std::hypot(e2, p * c) + e2);
}

double truncated_kinetic(const TwoBodySystem& system, double p, int order) {
  if (order < 0)
    throw std::invalid_argument("truncated_kinetic: order must be >= 0");
  const double c = system.units().c;
  const double mu = system.reduced_mass();
  if (order == 0)
    return system.rest_energy();
  const double ratio = p / (mu * c);
  const double u = ratio * ratio;
  // Horner in u: sum_{j=1..J} a_j u^j = u (a_1 + u (a_2 + ... )).
  double acc = 0.0;
  for (int j = order; j >= 1; --j)
    acc = acc * u + half_binomial(j) * mass_coefficient(system, j);
  return system.rest_energy() + mu * c * c * u * acc;
}

}  // namespace semirel
