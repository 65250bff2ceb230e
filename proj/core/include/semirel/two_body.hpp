#pragma once

// Two-body mass algebra and the summed relativistic kinetic energy
//   W(p) = sqrt(m1^2 c^4 + p^2 c^2) + sqrt(m2^2 c^4 + p^2 c^2)
// together with its formal expansion in powers of p^2.

namespace semirel {

/// Action quantum and speed of light. Natural units (hbar = c = 1) by default.
struct UnitSystem {
  double hbar = 1.0;
  double c = 1.0;

  /// Throws std::invalid_argument unless both constants are finite and positive.
  void validate() const;
};

/// Rest masses of the two constituents with the derived reduced and total mass.
/// Immutable once constructed.
class TwoBodySystem {
public:
  TwoBodySystem(double m1, double m2, UnitSystem units = {});

  /// Builds the system labelled by (reduced mass, first mass); m2 follows from partner_mass.
  static TwoBodySystem from_reduced(double mu, double m1, UnitSystem units = {});

  double m1() const noexcept { return m1_; }
  double m2() const noexcept { return m2_; }
  double reduced_mass() const noexcept { return mu_; }
  double total_mass() const noexcept { return m_; }
  double heavy_mass() const noexcept { return m1_ >= m2_ ? m1_ : m2_; }
  double light_mass() const noexcept { return m1_ >= m2_ ? m2_ : m1_; }
  const UnitSystem& units() const noexcept { return units_; }

  /// m c^2
  double rest_energy() const noexcept { return m_ * units_.c * units_.c; }

  /// Same masses, different unit constants (used to probe the c -> infinity limit).
  TwoBodySystem with_units(UnitSystem units) const { return {m1_, m2_, units}; }

private:
  double m1_;
  double m2_;
  double mu_;
  double m_;
  UnitSystem units_;
};

/// Second mass m2 = mu*m1/(m1 - mu) such that m1*m2/(m1 + m2) == mu.
/// Throws std::domain_error when m1 <= mu ("no positive partner mass exists").
double partner_mass(double mu, double m1);

/// Mass distribution coefficient eta_{2j} = (m1/m)^{2j-1} + (m2/m)^{2j-1}, j >= 1.
double mass_coefficient(const TwoBodySystem& system, int j);

/// Generalized binomial coefficient (1/2 choose j), evaluated as an exact
/// rational and rounded once. Supported for 0 <= j <= 30.
double half_binomial(int j);

/// W(p), the sum of both single-particle relativistic energies.
double total_kinetic(const TwoBodySystem& system, double p);

/// W(p) - m c^2 evaluated without cancellation; stays accurate for c >> p / m.
double kinetic_excess(const TwoBodySystem& system, double p);

/// Partial sum of the expansion of W(p) through order p^{2J}:
///   m c^2 + mu c^2 * sum_{j=1..J} (1/2 choose j) eta_{2j} (p / (mu c))^{2j}.
/// The series converges for |p| < min(m1, m2) c; this is not enforced.
double truncated_kinetic(const TwoBodySystem& system, double p, int order);

}  // namespace semirel
