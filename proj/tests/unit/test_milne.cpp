#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "generators.hpp"
#include "semirel/milne.hpp"
#include "semirel/spectrum.hpp"

using namespace semirel;
using std::numbers::pi;

namespace {

AmplitudeState start(double a0) { return {0.0, a0, 0.0, 0.0}; }

}  // namespace

TEST(AmplitudeRhs, ConstantMilneSolution) {
  const TwoBodySystem s(2.0, 2.0);  // mu = 1
  const auto flat = Potential::quartic(0.0, 0.0);
  EXPECT_EQ(amplitude_rhs(EquationMode::nr, s, flat, 0.5, 3.0, 1.0), 0.0);
}

TEST(AmplitudeRhs, WpVanishesAtInitialAmplitude) {
  const TwoBodySystem s(10.0, 10.0);
  const auto v = Potential::harmonic(1.0);
  for (double eps : {0.2226, 1.0, 8.5}) {
    const double a0 = initial_amplitude_wp(s, eps, 0.0);
    const double scale = 2.0 * s.reduced_mass() * eps * a0;
    EXPECT_NEAR(amplitude_rhs(EquationMode::wp, s, v, eps, 0.0, a0) / scale, 0.0, 1e-12);
  }
}

TEST(AmplitudeRhs, WpApproachesNrForLargeSpeedOfLight) {
  semirel::testing::Gen g(31);
  const auto s = TwoBodySystem::from_reduced(1.0, 2.0, {1.0, 1e6});
  const auto v = Potential::harmonic(1.0);
  for (int i = 0; i < semirel::testing::kCases; ++i) {
    const double x = g.uniform(-6, 6), a = g.log_uniform(0.2, 5), eps = g.uniform(0.1, 20);
    const double nr = amplitude_rhs(EquationMode::nr, s, v, eps, x, a);
    const double wp = amplitude_rhs(EquationMode::wp, s, v, eps, x, a);
    const double scale = std::pow(a, -3) + 2.0 * std::abs(eps - v(x)) * a;
    EXPECT_LT(std::abs(wp - nr) / scale, 1e-9) << "x=" << x << " A=" << a << " eps=" << eps;
  }
}

TEST(AmplitudeRhs, CollapseIsAFault) {
  const TwoBodySystem s(1.0, 1.0);
  const auto v = Potential::harmonic(1.0);
  for (auto mode : {EquationMode::nr, EquationMode::wp}) {
    try {
      amplitude_rhs(mode, s, v, 1.0, 0.0, 0.0);
      FAIL();
    } catch (const IntegrationFault& f) {
      EXPECT_EQ(f.reason(), Termination::fault);
      EXPECT_STREQ(f.what(), "amplitude collapsed");
    }
    EXPECT_THROW(amplitude_rhs(mode, s, v, 1.0, 0.0, -1.0), IntegrationFault);
  }
}

TEST(IntegrationConfig, Validation) {
  EXPECT_NO_THROW(IntegrationConfig{}.validate());
  IntegrationConfig c;
  c.rel_tol = 0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = {};
  c.h_init = 1.0;
  c.h_max = 0.5;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = {};
  c.termination_ratio = 1.0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = {};
  c.x_max = INFINITY;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = {};
  c.length_scale = -1;
  EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(EquationModeNames, RoundTrip) {
  EXPECT_EQ(parse_equation_mode("nr"), EquationMode::nr);
  EXPECT_EQ(parse_equation_mode(to_string(EquationMode::wp)), EquationMode::wp);
  EXPECT_THROW(parse_equation_mode("dirac"), std::invalid_argument);
}

TEST(HalfAxis, ConstantWavenumberGivesLinearPhase) {
  // V = 0 and eps = hbar^2 / (2 mu): k = 1, A = 1, Phi = x.
  const TwoBodySystem s(2.0, 2.0);
  IntegrationConfig cfg;
  cfg.x_max = 7.0;
  const auto r = integrate_half_axis(EquationMode::nr, s, Potential::quartic(0.0, 0.0), 0.5,
                                     start(1.0), cfg, +1);
  EXPECT_EQ(r.reason, Termination::range_limit);
  EXPECT_NEAR(r.state.x, 7.0, 1e-12);
  EXPECT_NEAR(r.state.phase, 7.0, 1e-10);
  EXPECT_NEAR(r.state.amplitude, 1.0, 1e-10);
}

TEST(HalfAxis, NrGroundStateHalfPhaseTightensTowardsHalfPi) {
  const TwoBodySystem s(2.0, 2.0);
  const auto v = Potential::harmonic(1.0);
  double prev_err = INFINITY;
  for (double ratio : {1e-4, 1e-7, 1e-10}) {
    IntegrationConfig cfg;
    cfg.termination_ratio = ratio;
    const auto r = integrate_half_axis(EquationMode::nr, s, v, 0.5,
                                       start(initial_amplitude_nr(s, 0.5, 0.0)), cfg, +1);
    ASSERT_EQ(r.reason, Termination::converged);
    const double err = std::abs(r.state.phase - pi / 2);
    EXPECT_LE(err, prev_err + 1e-12);
    prev_err = err;
  }
  EXPECT_LT(prev_err, 1e-7);
}

TEST(HalfAxis, WpTableGroundStateHalfPhase) {
  const TwoBodySystem s(10.0, 10.0);
  const double eps = 0.2226;
  const auto r = integrate_half_axis(EquationMode::wp, s, Potential::harmonic(1.0), eps,
                                     start(initial_amplitude_wp(s, eps, 0.0)), {}, +1);
  ASSERT_EQ(r.reason, Termination::converged);
  EXPECT_NEAR(r.state.phase, pi / 2, 1e-3);
  EXPECT_GT(r.state.x, std::sqrt(2 * eps));  // past the classical turning point
}

TEST(HalfAxis, PhaseStrictlyIncreasesAlongTrajectory) {
  semirel::testing::Gen g(32);
  for (int i = 0; i < 20; ++i) {
    const auto mode = g.coin() ? EquationMode::wp : EquationMode::nr;
    const double mu = g.log_uniform(0.5, 10);
    const auto s = TwoBodySystem::from_reduced(mu, mu * (1.0 + g.log_uniform(0.1, 20)));
    const auto v = Potential::harmonic(g.log_uniform(0.2, 5));
    const double eps = g.uniform(0.1, 10);
    double last = -1.0;
    std::size_t steps = 0;
    HalfAxisOutputs out;
    out.on_step = [&](const AmplitudeState& st) {
      EXPECT_GT(st.phase, last);
      EXPECT_GT(st.amplitude, 0.0);
      last = st.phase;
      ++steps;
    };
    const auto r = integrate_half_axis(mode, s, v, eps, start(initial_amplitude(mode, s, eps, 0.0)),
                                       {}, g.coin() ? 1 : -1, out);
    EXPECT_EQ(r.reason, Termination::converged);
    EXPECT_EQ(steps, r.accepted_steps);
  }
}

TEST(HalfAxis, DirectionsAgreeForSymmetricWell) {
  semirel::testing::Gen g(33);
  for (int i = 0; i < 20; ++i) {
    const auto mode = g.coin() ? EquationMode::wp : EquationMode::nr;
    const auto s = TwoBodySystem::from_reduced(1.0, g.uniform(1.5, 20));
    const auto v = i % 2 ? Potential::harmonic(g.uniform(0.5, 2)) : Potential::quartic(1.0, g.uniform(0.1, 1));
    const double eps = g.uniform(0.2, 8);
    const auto init = start(initial_amplitude(mode, s, eps, 0.0));
    const auto r = integrate_half_axis(mode, s, v, eps, init, {}, +1);
    const auto l = integrate_half_axis(mode, s, v, eps, init, {}, -1);
    EXPECT_NEAR(r.state.x, -l.state.x, 1e-12 * r.state.x);
    EXPECT_LT(std::abs(r.state.phase / l.state.phase - 1.0), 1e-10);
  }
}

TEST(HalfAxis, HalvingToleranceStaysWithinErrorBudget) {
  const auto s = TwoBodySystem::from_reduced(1.0, 2.0);
  const auto v = Potential::harmonic(1.0);
  for (auto mode : {EquationMode::nr, EquationMode::wp}) {
    for (double eps : {0.5, 5.5, 15.5}) {
      IntegrationConfig loose;
      loose.rel_tol = 1e-9;
      IntegrationConfig tight = loose;
      tight.rel_tol /= 2;
      tight.abs_tol /= 2;
      const auto init = start(initial_amplitude(mode, s, eps, 0.0));
      const auto a = integrate_half_axis(mode, s, v, eps, init, loose, +1);
      const auto b = integrate_half_axis(mode, s, v, eps, init, tight, +1);
      // Budget: tolerance times the number of steps taken.
      const double budget = loose.rel_tol * a.state.phase * static_cast<double>(a.accepted_steps);
      EXPECT_LT(std::abs(a.state.phase - b.state.phase), budget);
    }
  }
}

TEST(HalfAxis, LengthScaleDoesNotChangePhase) {
  const auto s = TwoBodySystem::from_reduced(5.0, 10.0);
  const auto v = Potential::harmonic(1.0);
  const double eps = 4.5;
  const auto init = start(initial_amplitude_wp(s, eps, 0.0));
  const auto ref = integrate_half_axis(EquationMode::wp, s, v, eps, init, {}, +1);
  for (double scale : {0.3, 2.0, 7.0}) {
    IntegrationConfig cfg;
    cfg.length_scale = scale;
    const auto r = integrate_half_axis(EquationMode::wp, s, v, eps, init, cfg, +1);
    EXPECT_NEAR(r.state.phase, ref.state.phase, 1e-8) << "scale " << scale;
  }
}

TEST(HalfAxis, OutputsAtRequestedPositions) {
  const TwoBodySystem s(2.0, 2.0);
  const auto v = Potential::harmonic(1.0);
  const std::vector<double> xs{0.0, 0.5, 1.0, 2.0, 3.0};
  HalfAxisOutputs out;
  out.positions = xs;
  const auto r = integrate_half_axis(EquationMode::nr, s, v, 0.5, start(1.0), {}, +1, out);
  ASSERT_EQ(r.outputs.size(), xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) EXPECT_NEAR(r.outputs[i].x, xs[i], 1e-14);
  // Mirror-image positions accumulate the same phase.
  const std::vector<double> left{-0.5, -2.0};
  HalfAxisOutputs lo;
  lo.positions = left;
  const auto l = integrate_half_axis(EquationMode::nr, s, v, 0.5, start(1.0), {}, -1, lo);
  ASSERT_EQ(l.outputs.size(), 2u);
  EXPECT_NEAR(l.outputs[0].phase, r.outputs[1].phase, 1e-10);
  EXPECT_NEAR(l.outputs[1].phase, r.outputs[3].phase, 1e-10);
}

TEST(HalfAxis, RejectsMisorderedOutputs) {
  const TwoBodySystem s(2.0, 2.0);
  const auto v = Potential::harmonic(1.0);
  const std::vector<double> bad{1.0, 0.5};
  HalfAxisOutputs out;
  out.positions = bad;
  EXPECT_THROW(integrate_half_axis(EquationMode::nr, s, v, 0.5, start(1.0), {}, +1, out),
               std::invalid_argument);
  const std::vector<double> wrong_side{-1.0};
  out.positions = wrong_side;
  EXPECT_THROW(integrate_half_axis(EquationMode::nr, s, v, 0.5, start(1.0), {}, +1, out),
               std::invalid_argument);
  EXPECT_THROW(integrate_half_axis(EquationMode::nr, s, v, 0.5, start(1.0), {}, 0),
               std::invalid_argument);
  EXPECT_THROW(integrate_half_axis(EquationMode::nr, s, v, 0.5, start(-1.0), {}, 1),
               std::invalid_argument);
}

TEST(HalfAxis, BadInitialAmplitudeIsReportedNotThrown) {
  // Far too small A0 in a wide well: the trajectory is violent but must end
  // with a classified reason rather than an exception.
  const TwoBodySystem s(2.0, 2.0);
  IntegrationConfig cfg;
  cfg.x_max = 50;
  const auto r = integrate_half_axis(EquationMode::nr, s, Potential::harmonic(1.0), 0.5,
                                     start(1e-4), cfg, +1);
  EXPECT_TRUE(r.reason == Termination::converged || r.reason == Termination::fault ||
              r.reason == Termination::range_limit);
  if (r.reason == Termination::fault) EXPECT_FALSE(r.diagnostic.empty());
}
