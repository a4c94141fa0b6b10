#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <string>

#include "fermion/errors.hpp"

namespace fermion {

// Exact rational arithmetic on int64 with __int128 intermediates.
// Overflow raises instead of wrapping; callers that need exactness are
// verification suites working with small dyadic data, so the range is ample.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(long long n) : num_(n) {}  // NOLINT: implicit by design
  Rational(long long n, long long d) : num_(n), den_(d) { normalize(); }

  // Exact conversion; every finite double is dyadic.
  static Rational from_double(double x) {
    if (!std::isfinite(x)) throw OverflowError("non-finite double");
    if (x == 0.0) return Rational{};
    int e = 0;
    double mant = std::frexp(x, &e);            // x = mant * 2^e, |mant| in [1/2,1)
    auto m = static_cast<long long>(std::ldexp(mant, 53));
    e -= 53;
    Rational r(m);
    while (e > 0) { r = r * Rational(2); --e; }
    while (e < 0) { r = r / Rational(2); ++e; }
    return r;
  }

  long long num() const { return num_; }
  long long den() const { return den_; }
  double value() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  bool is_zero() const { return num_ == 0; }
  bool is_one() const { return num_ == 1 && den_ == 1; }

  friend Rational operator-(const Rational& a) { return make(-i128(a.num_), a.den_); }
  friend Rational operator+(const Rational& a, const Rational& b) {
    return make(i128(a.num_) * b.den_ + i128(b.num_) * a.den_, i128(a.den_) * b.den_);
  }
  friend Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return make(i128(a.num_) * b.num_, i128(a.den_) * b.den_);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw OverflowError("rational division by zero");
    return make(i128(a.num_) * b.den_, i128(a.den_) * b.num_);
  }
  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }

 private:
  using i128 = __int128;

  static Rational make(i128 n, i128 d) {
    if (d < 0) { n = -n; d = -d; }
    if (n == 0) return Rational{};
    i128 g = gcd128(n < 0 ? -n : n, d);
    n /= g;
    d /= g;
    constexpr i128 lim = INT64_MAX;
    if (n > lim || n < -lim || d > lim) throw OverflowError("rational overflow");
    Rational r;
    r.num_ = static_cast<long long>(n);
    r.den_ = static_cast<long long>(d);
    return r;
  }
  static i128 gcd128(i128 a, i128 b) {
    while (b != 0) { i128 t = a % b; a = b; b = t; }
    return a == 0 ? 1 : a;
  }
  void normalize() {
    if (den_ == 0) throw OverflowError("zero denominator");
    *this = make(num_, den_);
  }

  long long num_ = 0;
  long long den_ = 1;
};

// Complex numbers with rational real and imaginary parts.
struct CRational {
  Rational re, im;

  CRational() = default;
  CRational(Rational r) : re(r) {}  // NOLINT
  CRational(long long r) : re(r) {}  // NOLINT
  CRational(Rational r, Rational i) : re(r), im(i) {}
  static CRational unit_im() { return {Rational(0), Rational(1)}; }
  static CRational from_doubles(double r, double i) {
    return {Rational::from_double(r), Rational::from_double(i)};
  }

  bool is_zero() const { return re.is_zero() && im.is_zero(); }
  std::complex<double> value() const { return {re.value(), im.value()}; }

  friend CRational operator-(const CRational& a) { return {-a.re, -a.im}; }
  friend CRational operator+(const CRational& a, const CRational& b) {
    return {a.re + b.re, a.im + b.im};
  }
  friend CRational operator-(const CRational& a, const CRational& b) {
    return {a.re - b.re, a.im - b.im};
  }
  friend CRational operator*(const CRational& a, const CRational& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  CRational& operator+=(const CRational& o) { return *this = *this + o; }
  CRational& operator-=(const CRational& o) { return *this = *this - o; }
  CRational& operator*=(const CRational& o) { return *this = *this * o; }
  friend bool operator==(const CRational& a, const CRational& b) {
    return a.re == b.re && a.im == b.im;
  }
  CRational conj() const { return {re, -im}; }
};

}  // namespace fermion
