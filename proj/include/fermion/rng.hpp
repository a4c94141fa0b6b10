#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

#include "fermion/rational.hpp"

namespace fermion {

// SplitMix64 (Steele, Lea, Vigna). Coded here, with explicit uniform and
// Box-Muller transforms, so seeded verification runs reproduce bit-identical
// streams on every platform; standard-library distributions are
// implementation-defined and would break report determinism.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Integer in [0, n).
  std::uint64_t below(std::uint64_t n) { return next() % n; }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 0;
    while (u1 == 0.0) u1 = uniform();
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * M_PI * u2);
    have_spare_ = true;
    return r * std::cos(2.0 * M_PI * u2);
  }

  std::complex<double> cnormal() { return {normal(), normal()}; }

  // Small rationals for exact formal-mode checks: numerator in [-4,4],
  // denominator in {1,2}, never zero unless allow_zero.
  Rational rational(bool allow_zero = true) {
    long long n = static_cast<long long>(below(9)) - 4;
    if (!allow_zero && n == 0) n = 1;
    return Rational(n, below(2) ? 2 : 1);
  }
  CRational crational(bool allow_zero = true) {
    CRational c(rational(), rational());
    if (!allow_zero && c.is_zero()) c = CRational(1);
    return c;
  }

 private:
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0;
};

}  // namespace fermion
