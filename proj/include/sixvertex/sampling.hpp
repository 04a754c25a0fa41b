#pragma once

// Seeded complex sampling on annuli, away from a list of excluded points.

#include "sixvertex/numeric.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

namespace sixvertex {

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  /// Uniform angle, log-uniform modulus in [r_min, r_max].
  cplx annulus(double r_min = 0.5, double r_max = 2.0) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double radius = r_min * std::pow(r_max / r_min, u(rng_));
    const double angle = 2.0 * std::numbers::pi * u(rng_);
    return std::polar(radius, angle);
  }

  /// annulus() redrawn until every excluded point is at least `gap` away.
  cplx annulus_avoiding(const std::vector<cplx>& excluded, double gap = 0.05, double r_min = 0.5,
                        double r_max = 2.0) {
    for (;;) {
      const cplx z = annulus(r_min, r_max);
      bool ok = true;
      for (const cplx& p : excluded) ok = ok && std::abs(z - p) >= gap;
      if (ok) return z;
    }
  }

  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng_); }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace sixvertex
