#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "fermion/errors.hpp"
#include "fermion/kernels.hpp"
#include "fermion/scalar.hpp"

namespace fermion {

inline constexpr int kMaxGenerators = 16;

// Element of the complexified exterior algebra on `gens` anticommuting
// generators. Coefficients are stored densely over subset bitmasks; the mask
// encodes the ordered monomial theta^{m1}...theta^{mp} with m1 < ... < mp.
// S is the scalar ring: Cplx (numeric mode) or LaurentPoly (formal mode).
//
// Doubled-algebra convention used throughout: an algebra on 2m generators
// models the graded tensor square, bits [0,m) being the first slot and bits
// [m,2m) the second. tensor_embed carries no extra sign; Koszul signs emerge
// from ordinary graded Leibniz bookkeeping on the concatenated generators.
template <class S>
class Multivector {
 public:
  explicit Multivector(int gens) : gens_(checked(gens)), c_(std::size_t(1) << gens) {}

  static Multivector scalar(int gens, S v) {
    Multivector f(gens);
    f.c_[0] = std::move(v);
    return f;
  }
  static Multivector generator(int gens, int mu) {
    return monomial(gens, 1u << check_index(mu, gens), S(1));
  }
  static Multivector monomial(int gens, std::uint32_t mask, S v) {
    Multivector f(gens);
    if (mask >= (std::uint32_t(1) << gens)) throw DimensionError("monomial mask out of range");
    f.c_[mask] = std::move(v);
    return f;
  }

  int gens() const { return gens_; }
  std::uint32_t size() const { return std::uint32_t(1) << gens_; }
  const S& operator[](std::uint32_t mask) const { return c_[mask]; }
  S& operator[](std::uint32_t mask) { return c_[mask]; }
  const S* data() const { return c_.data(); }
  S* data() { return c_.data(); }

  bool is_zero() const {
    for (const S& v : c_)
      if (!ring<S>::is_zero(v)) return false;
    return true;
  }

  Multivector& operator+=(const Multivector& o) {
    check_same(o);
    for (std::uint32_t i = 0; i < size(); ++i) c_[i] += o.c_[i];
    return *this;
  }
  Multivector& operator-=(const Multivector& o) {
    check_same(o);
    for (std::uint32_t i = 0; i < size(); ++i) c_[i] -= o.c_[i];
    return *this;
  }
  Multivector& operator*=(const S& s) {
    for (S& v : c_) v *= s;
    return *this;
  }
  friend Multivector operator+(Multivector a, const Multivector& b) { return a += b; }
  friend Multivector operator-(Multivector a, const Multivector& b) { return a -= b; }
  friend Multivector operator*(Multivector a, const S& s) { return a *= s; }
  friend Multivector operator*(const S& s, Multivector a) { return a *= s; }
  friend Multivector operator-(Multivector a) {
    for (S& v : a.c_) v = -v;
    return a;
  }
  friend bool operator==(const Multivector& a, const Multivector& b) {
    return a.gens_ == b.gens_ && a.c_ == b.c_;
  }

  void check_same(const Multivector& o) const {
    if (o.gens_ != gens_) throw DimensionError("generator count mismatch");
  }

 private:
  static int checked(int gens) {
    if (gens < 1 || gens > kMaxGenerators) throw DimensionError("generator count out of range");
    return gens;
  }
  static int check_index(int mu, int gens) {
    if (mu < 0 || mu >= gens) throw DimensionError("generator index out of range");
    return mu;
  }

  int gens_;
  std::vector<S> c_;
};

using MultivectorC = Multivector<Cplx>;
using MultivectorF = Multivector<LaurentPoly>;

inline int degree(std::uint32_t mask) { return std::popcount(mask); }

template <class S>
Multivector<S> wedge(const Multivector<S>& a, const Multivector<S>& b) {
  a.check_same(b);
  Multivector<S> out(a.gens());
  wedge_kernel(a.data(), b.data(), out.data(), a.gens());
  return out;
}

template <class S>
Multivector<S> fermi_derivative(const Multivector<S>& f, int mu) {
  if (mu < 0 || mu >= f.gens()) throw DimensionError("generator index out of range");
  Multivector<S> out(f.gens());
  const std::uint32_t bit = 1u << mu;
  for (std::uint32_t m = 0; m < f.size(); ++m) {
    if (m & bit) continue;
    const S& v = f[m | bit];
    if (ring<S>::is_zero(v)) continue;
    out[m] = derivative_sign_neg(m | bit, mu) ? -v : v;
  }
  return out;
}

// d'_mu f = (-1)^{|f|-1} d_mu f, applied per homogeneous component.
template <class S>
Multivector<S> signed_derivative(const Multivector<S>& f, int mu) {
  if (mu < 0 || mu >= f.gens()) throw DimensionError("generator index out of range");
  Multivector<S> out(f.gens());
  const std::uint32_t bit = 1u << mu;
  for (std::uint32_t m = 0; m < f.size(); ++m) {
    if (m & bit) continue;
    const S& v = f[m | bit];
    if (ring<S>::is_zero(v)) continue;
    bool neg = derivative_sign_neg(m | bit, mu);
    neg ^= (degree(m | bit) - 1) & 1;  // (-1)^{|f|-1}
    out[m] = neg ? -v : v;
  }
  return out;
}

// Directional derivative along v = sum v^mu e_mu.
template <class S>
Multivector<S> directional_derivative(const Multivector<S>& f, std::span<const S> v) {
  if (static_cast<int>(v.size()) != f.gens()) throw DimensionError("direction size mismatch");
  Multivector<S> out(f.gens());
  for (int mu = 0; mu < f.gens(); ++mu) {
    if (ring<S>::is_zero(v[mu])) continue;
    out += fermi_derivative(f, mu) * v[mu];
  }
  return out;
}

// Coefficient of the top monomial theta^1...theta^m (orientation eps^{1..m}=1).
template <class S>
S berezin_integral(const Multivector<S>& f) {
  return f[f.size() - 1];
}

template <class S>
Multivector<S> grade_part(const Multivector<S>& f, int p) {
  Multivector<S> out(f.gens());
  for (std::uint32_t m = 0; m < f.size(); ++m)
    if (degree(m) == p) out[m] = f[m];
  return out;
}

template <class S>
bool is_homogeneous(const Multivector<S>& f, int* deg_out = nullptr) {
  int deg = -1;
  for (std::uint32_t m = 0; m < f.size(); ++m) {
    if (ring<S>::is_zero(f[m])) continue;
    if (deg < 0) deg = degree(m);
    else if (degree(m) != deg) return false;
  }
  if (deg_out) *deg_out = deg < 0 ? 0 : deg;
  return true;
}

// exp of an even element: e^s * sum_k (f-s)^k / k!, finite by nilpotency.
template <class S>
Multivector<S> exp_even(const Multivector<S>& f) {
  for (std::uint32_t m = 0; m < f.size(); ++m)
    if ((degree(m) & 1) && !ring<S>::is_zero(f[m]))
      throw ParityError("exp_even of an element with odd-degree terms");
  Multivector<S> nil = f;
  S s = f[0];
  nil[0] = S{};
  Multivector<S> acc = Multivector<S>::scalar(f.gens(), S(1));
  Multivector<S> term = acc;
  for (int k = 1; k <= f.gens() / 2; ++k) {
    term = wedge(term, nil) * ring<S>::from_ratio(1, k);
    if (term.is_zero()) break;
    acc += term;
  }
  return acc * ring<S>::exp_scalar(s);
}

// f (x) g as an element of the 2m-generator algebra; no sign by convention.
template <class S>
Multivector<S> tensor_embed(const Multivector<S>& f, const Multivector<S>& g) {
  f.check_same(g);
  const int m = f.gens();
  if (2 * m > kMaxGenerators) throw DimensionError("doubled algebra exceeds generator cap");
  Multivector<S> out(2 * m);
  for (std::uint32_t a = 0; a < f.size(); ++a) {
    if (ring<S>::is_zero(f[a])) continue;
    for (std::uint32_t b = 0; b < g.size(); ++b) {
      if (ring<S>::is_zero(g[b])) continue;
      out[a | (b << m)] = f[a] * g[b];
    }
  }
  return out;
}

// Pull-back along the diagonal: substitutes second-slot generators for the
// first-slot ones, theta'^mu -> theta^mu. Satisfies D*(f (x) g) = f ^ g.
template <class S>
Multivector<S> diagonal_pullback(const Multivector<S>& F) {
  if (F.gens() % 2 != 0) throw DimensionError("diagonal pullback needs an even generator count");
  const int m = F.gens() / 2;
  const std::uint32_t lo = (1u << m) - 1u;
  Multivector<S> out(m);
  for (std::uint32_t mk = 0; mk < F.size(); ++mk) {
    const S& v = F[mk];
    if (ring<S>::is_zero(v)) continue;
    const std::uint32_t a = mk & lo, b = mk >> m;
    if (a & b) continue;
    if (merge_sign_neg(a, b))
      out[a | b] -= v;
    else
      out[a | b] += v;
  }
  return out;
}

// Graded flip of the two slots: sigma2(f (x) g) = (-1)^{|f||g|} g (x) f.
template <class S>
Multivector<S> graded_flip(const Multivector<S>& F) {
  if (F.gens() % 2 != 0) throw DimensionError("graded flip needs an even generator count");
  const int m = F.gens() / 2;
  const std::uint32_t lo = (1u << m) - 1u;
  Multivector<S> out(F.gens());
  for (std::uint32_t mk = 0; mk < F.size(); ++mk) {
    const S& v = F[mk];
    if (ring<S>::is_zero(v)) continue;
    const std::uint32_t a = mk & lo, b = mk >> m;
    const bool neg = (degree(a) & 1) && (degree(b) & 1);
    out[b | (a << m)] = neg ? -v : v;
  }
  return out;
}

// Algebra morphism determined by generator images: theta^mu -> images[mu].
// Images of a monomial are wedged in ascending index order, so Koszul signs
// are produced by the wedge itself.
template <class S>
Multivector<S> substitute(const Multivector<S>& f, std::span<const Multivector<S>> images,
                          int out_gens) {
  if (static_cast<int>(images.size()) != f.gens()) throw DimensionError("image count mismatch");
  for (const auto& im : images)
    if (im.gens() != out_gens) throw DimensionError("image generator count mismatch");
  Multivector<S> out(out_gens);
  for (std::uint32_t mk = 0; mk < f.size(); ++mk) {
    if (ring<S>::is_zero(f[mk])) continue;
    Multivector<S> prod = Multivector<S>::scalar(out_gens, f[mk]);
    std::uint32_t rest = mk;
    while (rest) {
      const int mu = std::countr_zero(rest);
      prod = wedge(prod, images[mu]);
      rest &= rest - 1u;
    }
    out += prod;
  }
  return out;
}

template <class S>
double max_abs(const Multivector<S>& f) {
  double m = 0;
  for (std::uint32_t i = 0; i < f.size(); ++i) m = std::max(m, ring<S>::abs(f[i]));
  return m;
}

template <class S>
double max_abs_diff(const Multivector<S>& a, const Multivector<S>& b) {
  a.check_same(b);
  double m = 0;
  for (std::uint32_t i = 0; i < a.size(); ++i) m = std::max(m, ring<S>::abs(a[i] - b[i]));
  return m;
}

inline double norm2(const MultivectorC& f) {
  double s = 0;
  for (std::uint32_t i = 0; i < f.size(); ++i) s += std::norm(f[i]);
  return std::sqrt(s);
}

inline Cplx inner_coeff(const MultivectorC& a, const MultivectorC& b) {
  a.check_same(b);
  Cplx s = 0;
  for (std::uint32_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

// Coefficient conjugation; the real generators theta^mu are fixed.
inline MultivectorC conj(const MultivectorC& f) {
  MultivectorC out(f.gens());
  for (std::uint32_t i = 0; i < f.size(); ++i) out[i] = std::conj(f[i]);
  return out;
}

// Graded star: coefficient conjugation composed with the reversal
// anti-automorphism, (-1)^{p(p-1)/2} on the grade-p part.
inline MultivectorC super_conj(const MultivectorC& f) {
  MultivectorC out(f.gens());
  for (std::uint32_t i = 0; i < f.size(); ++i) {
    const int p = degree(i);
    const Cplx c = std::conj(f[i]);
    out[i] = ((p * (p - 1) / 2) % 2) ? -c : c;
  }
  return out;
}

// Snap coefficients below rel * max|coeff| to zero (numeric mode only; the
// formal ring is exact and needs no pruning).
inline MultivectorC prune(MultivectorC f, double rel = 1e-14) {
  const double cut = rel * max_abs(f);
  for (std::uint32_t i = 0; i < f.size(); ++i)
    if (std::abs(f[i]) <= cut) f[i] = 0;
  return f;
}
inline MultivectorF prune(MultivectorF f, double = 0) { return f; }

}  // namespace fermion
