#pragma once

#include "sfpde/core.hpp"

#include <random>

namespace sfpde::testing {

/// Fixed-seed source for property tests.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  cplx in_disc(double r) { return std::polar(r * std::sqrt(uniform(0.0, 1.0)), uniform(-kPi, kPi)); }
  cplx complex_box(double h) { return {uniform(-h, h), uniform(-h, h)}; }

 private:
  std::mt19937_64 rng_;
};

inline double rel_err(cplx a, cplx b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace sfpde::testing
