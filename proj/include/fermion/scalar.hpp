#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <utility>
#include <vector>

#include "fermion/rational.hpp"

namespace fermion {

using Cplx = std::complex<double>;

// Laurent polynomial in hbar with exact complex-rational coefficients.
// This is the formal scalar mode: every ring operation is exact, so algebra
// identities checked in this mode hold coefficient-by-coefficient with zero
// tolerance. Terms are kept sorted by exponent with zero coefficients dropped.
class LaurentPoly {
 public:
  LaurentPoly() = default;
  LaurentPoly(long long c) { if (c != 0) terms_.emplace_back(0, CRational(c)); }  // NOLINT
  LaurentPoly(int c) : LaurentPoly(static_cast<long long>(c)) {}  // NOLINT
  LaurentPoly(double c) {  // NOLINT: exact dyadic conversion
    CRational r = CRational::from_doubles(c, 0.0);
    if (!r.is_zero()) terms_.emplace_back(0, r);
  }
  LaurentPoly(CRational c) { if (!c.is_zero()) terms_.emplace_back(0, c); }  // NOLINT
  static LaurentPoly hbar(int k = 1) {
    LaurentPoly p;
    p.terms_.emplace_back(k, CRational(1));
    return p;
  }
  static LaurentPoly term(int k, CRational c) {
    LaurentPoly p;
    if (!c.is_zero()) p.terms_.emplace_back(k, c);
    return p;
  }

  bool is_zero() const { return terms_.empty(); }
  int min_degree() const { return terms_.empty() ? 0 : terms_.front().first; }
  int max_degree() const { return terms_.empty() ? 0 : terms_.back().first; }
  CRational coeff(int k) const {
    for (const auto& [e, c] : terms_)
      if (e == k) return c;
    return {};
  }
  const std::vector<std::pair<int, CRational>>& terms() const { return terms_; }

  Cplx eval(double hb) const {
    Cplx v = 0;
    for (const auto& [e, c] : terms_) v += c.value() * std::pow(hb, e);
    return v;
  }

  friend LaurentPoly operator-(const LaurentPoly& a) {
    LaurentPoly r = a;
    for (auto& [e, c] : r.terms_) c = -c;
    return r;
  }
  friend LaurentPoly operator+(const LaurentPoly& a, const LaurentPoly& b) {
    LaurentPoly r;
    r.terms_.reserve(a.terms_.size() + b.terms_.size());
    auto ia = a.terms_.begin(), ib = b.terms_.begin();
    while (ia != a.terms_.end() || ib != b.terms_.end()) {
      if (ib == b.terms_.end() || (ia != a.terms_.end() && ia->first < ib->first)) {
        r.terms_.push_back(*ia++);
      } else if (ia == a.terms_.end() || ib->first < ia->first) {
        r.terms_.push_back(*ib++);
      } else {
        CRational c = ia->second + ib->second;
        if (!c.is_zero()) r.terms_.emplace_back(ia->first, c);
        ++ia, ++ib;
      }
    }
    return r;
  }
  friend LaurentPoly operator-(const LaurentPoly& a, const LaurentPoly& b) { return a + (-b); }
  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
    LaurentPoly r;
    for (const auto& [ea, ca] : a.terms_)
      for (const auto& [eb, cb] : b.terms_) r.add_term(ea + eb, ca * cb);
    return r;
  }
  LaurentPoly& operator+=(const LaurentPoly& o) { return *this = *this + o; }
  LaurentPoly& operator-=(const LaurentPoly& o) { return *this = *this - o; }
  LaurentPoly& operator*=(const LaurentPoly& o) { return *this = *this * o; }
  friend bool operator==(const LaurentPoly& a, const LaurentPoly& b) {
    return a.terms_ == b.terms_;
  }

  // Inverse of a monomial c * hbar^k; anything longer has no Laurent inverse.
  LaurentPoly inverse() const {
    if (terms_.size() != 1 || !terms_[0].second.im.is_zero())
      throw OverflowError("laurent inverse defined for real monomials only");
    return term(-terms_[0].first, CRational(Rational(1) / terms_[0].second.re));
  }

 private:
  void add_term(int e, CRational c) {
    if (c.is_zero()) return;
    auto it = std::lower_bound(terms_.begin(), terms_.end(), e,
                               [](const auto& t, int k) { return t.first < k; });
    if (it != terms_.end() && it->first == e) {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    } else {
      terms_.emplace(it, e, c);
    }
  }

  std::vector<std::pair<int, CRational>> terms_;  // sorted by exponent
};

// Ring glue shared by the numeric (complex at fixed hbar) and formal
// (Laurent-in-hbar) scalar modes. Algebra code is templated on S and uses
// only these hooks plus the ring operators.
template <class S>
struct ring;

template <>
struct ring<Cplx> {
  static constexpr bool formal = false;
  static bool is_zero(const Cplx& s) { return s == Cplx(0); }
  static double abs(const Cplx& s) { return std::abs(s); }
  static Cplx from_ratio(long long p, long long q) {
    return Cplx(static_cast<double>(p) / static_cast<double>(q));
  }
  static Cplx unit_im() { return Cplx(0, 1); }
  static Cplx conj(const Cplx& s) { return std::conj(s); }
  static Cplx inv(const Cplx& s) { return 1.0 / s; }
  static Cplx exp_scalar(const Cplx& s) { return std::exp(s); }
};

template <>
struct ring<LaurentPoly> {
  static constexpr bool formal = true;
  static bool is_zero(const LaurentPoly& s) { return s.is_zero(); }
  static double abs(const LaurentPoly& s) {
    double m = 0;
    for (const auto& [e, c] : s.terms()) m = std::max(m, std::abs(c.value()));
    return m;
  }
  static LaurentPoly from_ratio(long long p, long long q) {
    return LaurentPoly(CRational(Rational(p, q)));
  }
  static LaurentPoly unit_im() { return LaurentPoly(CRational::unit_im()); }
  static LaurentPoly conj(const LaurentPoly& s) {
    LaurentPoly r;
    for (const auto& [e, c] : s.terms()) r += LaurentPoly::term(e, c.conj());
    return r;
  }
  static LaurentPoly inv(const LaurentPoly& s) { return s.inverse(); }
  static LaurentPoly exp_scalar(const LaurentPoly& s) {
    if (!s.is_zero()) throw ParityError("formal exp of a nonzero scalar part");
    return LaurentPoly(1);
  }
};

}  // namespace fermion
