#pragma once

// Minimal seeded generators for property-style tests. Every property runs a
// fixed number of cases from a fixed seed so failures replay exactly.

#include <cmath>
#include <cstdint>
#include <random>
#include <string>

namespace semirel::testing {

class Gen {
public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }

  /// log-uniform on [lo, hi], lo > 0
  double log_uniform(double lo, double hi) {
    return std::exp(uniform(std::log(lo), std::log(hi)));
  }

  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  bool coin() { return integer(0, 1) == 1; }

private:
  std::mt19937_64 rng_;
};

inline constexpr int kCases = 200;

/// Label for SCOPED_TRACE so a failing case can be identified.
inline std::string case_label(int i, std::uint64_t seed) {
  return "case " + std::to_string(i) + " (seed " + std::to_string(seed) + ")";
}

}  // namespace semirel::testing
