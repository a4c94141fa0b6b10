#pragma once

#include <utility>
#include <vector>

#include "fermion/multivector.hpp"
#include "fermion/smallmat.hpp"
#include "fermion/star.hpp"

namespace fermion {

// Clifford algebra Cl(V,q) in the ordered generator-product basis: a bitmask
// M encodes the product th^{m1} th^{m2} ... th^{mp}, m1 < ... < mp, taken in
// the algebra with  th^a th^b + th^b th^a = (hbar/2) q#(a,b).  Products are
// reduced to this basis by walking a generator through a monomial with the
// relation; the quantisation map is degree-triangular on these coefficients.
template <class S>
struct CliffordElement {
  Multivector<S> c;

  explicit CliffordElement(int gens) : c(gens) {}
  explicit CliffordElement(Multivector<S> coeffs) : c(std::move(coeffs)) {}
  static CliffordElement one(int gens) {
    return CliffordElement(Multivector<S>::scalar(gens, S(1)));
  }
  static CliffordElement generator(int gens, int mu) {
    return CliffordElement(Multivector<S>::generator(gens, mu));
  }

  int gens() const { return c.gens(); }
  bool is_zero() const { return c.is_zero(); }

  friend CliffordElement operator+(CliffordElement a, const CliffordElement& b) {
    a.c += b.c;
    return a;
  }
  friend CliffordElement operator-(CliffordElement a, const CliffordElement& b) {
    a.c -= b.c;
    return a;
  }
  friend CliffordElement operator-(CliffordElement a) {
    a.c = -a.c;
    return a;
  }
  friend CliffordElement operator*(CliffordElement a, const S& s) {
    a.c *= s;
    return a;
  }
  friend bool operator==(const CliffordElement& a, const CliffordElement& b) {
    return a.c == b.c;
  }
};

using CliffordC = CliffordElement<Cplx>;
using CliffordF = CliffordElement<LaurentPoly>;

// Left multiplication by generator a on one basis monomial: anticommute
// th^a rightwards through the ordered factors, each crossing shedding a
// (hbar/2) q^{ab} contraction, until it inserts or meets itself.
template <class S>
void clifford_gen_left_mask(int a, std::uint32_t mask, const S& coeff, const SqMat<S>& qsharp,
                            const S& hbar, Multivector<S>& out) {
  const S half_h = hbar * ring<S>::from_ratio(1, 2);
  std::uint32_t passed = 0;
  std::uint32_t rest = mask;
  bool neg = false;
  while (true) {
    if (rest == 0 || a < std::countr_zero(rest)) {
      out[passed | rest | (1u << a)] += neg ? -coeff : coeff;
      return;
    }
    const int b = std::countr_zero(rest);
    rest ^= 1u << b;
    if (a == b) {
      S v = coeff * (hbar * ring<S>::from_ratio(1, 4) * qsharp(a, a));
      out[passed | rest] += neg ? -v : v;
      return;
    }
    if (!ring<S>::is_zero(qsharp(a, b))) {
      S v = coeff * (half_h * qsharp(a, b));
      out[passed | rest] += neg ? -v : v;
    }
    passed |= 1u << b;
    neg = !neg;
  }
}

template <class S>
Multivector<S> clifford_gen_left(int a, const Multivector<S>& x, const SqMat<S>& qsharp,
                                 const S& hbar) {
  Multivector<S> out(x.gens());
  for (std::uint32_t mk = 0; mk < x.size(); ++mk)
    if (!ring<S>::is_zero(x[mk])) clifford_gen_left_mask(a, mk, x[mk], qsharp, hbar, out);
  return out;
}

template <class S>
CliffordElement<S> clifford_mul(const CliffordElement<S>& x, const CliffordElement<S>& y,
                                const SqMat<S>& qsharp, const S& hbar) {
  x.c.check_same(y.c);
  if (qsharp.dim() != x.gens()) throw DimensionError("metric dimension mismatch");
  Multivector<S> out(x.gens());
  for (std::uint32_t ma = 0; ma < x.c.size(); ++ma) {
    if (ring<S>::is_zero(x.c[ma])) continue;
    Multivector<S> cur = y.c * x.c[ma];
    std::uint32_t rest = ma;
    while (rest) {  // factors applied right to left
      const int a = 31 - std::countl_zero(rest);
      cur = clifford_gen_left(a, cur, qsharp, hbar);
      rest ^= 1u << a;
    }
    out += cur;
  }
  return CliffordElement<S>(std::move(out));
}

// Graded commutator [x, y] = xy - (-1)^{|x||y|} yx, by parity parts.
template <class S>
CliffordElement<S> clifford_commutator(const CliffordElement<S>& x, const CliffordElement<S>& y,
                                       const SqMat<S>& qsharp, const S& hbar) {
  const int m = x.gens();
  Multivector<S> out(m);
  for (int px = 0; px <= 1; ++px)
    for (int py = 0; py <= 1; ++py) {
      Multivector<S> xp(m), yp(m);
      for (std::uint32_t k = 0; k < xp.size(); ++k) {
        if ((degree(k) & 1) == px) xp[k] = x.c[k];
        if ((degree(k) & 1) == py) yp[k] = y.c[k];
      }
      if (xp.is_zero() || yp.is_zero()) continue;
      CliffordElement<S> cx(std::move(xp)), cy(std::move(yp));
      auto fwd = clifford_mul(cx, cy, qsharp, hbar);
      auto bwd = clifford_mul(cy, cx, qsharp, hbar);
      out += fwd.c;
      out += (px && py) ? bwd.c : -bwd.c;
    }
  return CliffordElement<S>(std::move(out));
}

// The super-derivation extending d_v, as the inner derivation
// (2/hbar) ad_{iota_v q}; `covector` holds the components of iota_v q.
template <class S>
CliffordElement<S> clifford_derivative_inner(const CliffordElement<S>& x,
                                             const std::vector<S>& covector,
                                             const SqMat<S>& qsharp, const S& hbar) {
  const int m = x.gens();
  Multivector<S> a(m);
  for (int mu = 0; mu < m; ++mu) a[1u << mu] = covector[mu];
  auto comm = clifford_commutator(CliffordElement<S>(std::move(a)), x, qsharp, hbar);
  return comm * (ring<S>::from_ratio(2, 1) * ring<S>::inv(hbar));
}

// The same derivation expanded by the Leibniz rule over the ordered factors;
// on generator-product monomials that is exactly the mask derivative. The
// inner route above is its cross-check.
template <class S>
CliffordElement<S> clifford_derivative(const CliffordElement<S>& x, int mu) {
  return CliffordElement<S>(fermi_derivative(x.c, mu));
}

// Graded-symmetrised multiplication rho_0(a) x = (a x + (-1)^{|x|} x a)/2,
// extended multiplicatively over monomials and linearly in f.
template <class S>
CliffordElement<S> sym_mul_gen(int a, const CliffordElement<S>& x, const SqMat<S>& qsharp,
                               const S& hbar) {
  const int m = x.gens();
  auto ga = CliffordElement<S>::generator(m, a);
  Multivector<S> out(m);
  for (int px = 0; px <= 1; ++px) {
    Multivector<S> xp(m);
    for (std::uint32_t k = 0; k < xp.size(); ++k)
      if ((degree(k) & 1) == px) xp[k] = x.c[k];
    if (xp.is_zero()) continue;
    CliffordElement<S> part(std::move(xp));
    auto ax = clifford_mul(ga, part, qsharp, hbar);
    auto xa = clifford_mul(part, ga, qsharp, hbar);
    out += ax.c;
    out += px ? -xa.c : xa.c;
  }
  return CliffordElement<S>(std::move(out)) * ring<S>::from_ratio(1, 2);
}

template <class S>
CliffordElement<S> sym_mul_apply(const Multivector<S>& f, const CliffordElement<S>& x,
                                 const SqMat<S>& qsharp, const S& hbar) {
  f.check_same(x.c);
  CliffordElement<S> out(f.gens());
  for (std::uint32_t ma = 0; ma < f.size(); ++ma) {
    if (ring<S>::is_zero(f[ma])) continue;
    CliffordElement<S> cur = x * f[ma];
    std::uint32_t rest = ma;
    while (rest) {
      const int a = 31 - std::countl_zero(rest);
      cur = sym_mul_gen(a, cur, qsharp, hbar);
      rest ^= 1u << a;
    }
    out = out + cur;
  }
  return out;
}

// Q_0(f) = rho_0(f) 1: the identity plus strictly degree-lowering
// contraction terms, hence a linear isomorphism.
template <class S>
CliffordElement<S> quantize_moyal(const Multivector<S>& f, const SqMat<S>& qsharp,
                                  const S& hbar) {
  return sym_mul_apply(f, CliffordElement<S>::one(f.gens()), qsharp, hbar);
}

// Q_K(f) = Q_0(U^O_{0,K} f).
template <class S>
CliffordElement<S> quantize(const Multivector<S>& f, const SqMat<S>& K, const SqMat<S>& qsharp,
                            const S& hbar) {
  if (K.dim() != f.gens()) throw DimensionError("bivector dimension mismatch");
  return quantize_moyal(intertwine(f, K, SqMat<S>(f.gens()), hbar), qsharp, hbar);
}

// Inverse of Q_0 by exact Neumann iteration: with Q_0 = 1 + N and N lowering
// degree by two, f = x - N f closes after gens/2 + 1 rounds.
template <class S>
Multivector<S> symbol_moyal(const CliffordElement<S>& x, const SqMat<S>& qsharp, const S& hbar) {
  Multivector<S> f = x.c;
  for (int k = 0; k <= x.gens() / 2; ++k) {
    Multivector<S> n = quantize_moyal(f, qsharp, hbar).c - f;
    f = x.c - n;
  }
  return f;
}

template <class S>
Multivector<S> symbol(const CliffordElement<S>& x, const SqMat<S>& K, const SqMat<S>& qsharp,
                      const S& hbar) {
  if (K.dim() != x.gens()) throw DimensionError("bivector dimension mismatch");
  return intertwine(symbol_moyal(x, qsharp, hbar), SqMat<S>(x.gens()), K, hbar);
}

// str(th^1 ... th^{2n}) = (i hbar / 2)^n; zero on every shorter monomial.
template <class S>
S supertrace(const CliffordElement<S>& x, const S& hbar) {
  if (x.gens() % 2 != 0) throw DimensionError("supertrace needs even dimension");
  const int n = x.gens() / 2;
  S factor = S(1);
  const S step = ring<S>::unit_im() * hbar * ring<S>::from_ratio(1, 2);
  for (int k = 0; k < n; ++k) factor *= step;
  return factor * x.c[x.c.size() - 1];
}

// Algebra automorphism from gamma in SO(V,q): generator a maps to the
// degree-one element with components ginv(a, .), extended multiplicatively.
template <class S>
CliffordElement<S> rotate_clifford(const CliffordElement<S>& x, const SqMat<S>& ginv,
                                   const SqMat<S>& qsharp, const S& hbar) {
  const int m = x.gens();
  std::vector<CliffordElement<S>> images;
  images.reserve(m);
  for (int mu = 0; mu < m; ++mu) {
    Multivector<S> v(m);
    for (int nu = 0; nu < m; ++nu) v[1u << nu] = ginv(mu, nu);
    images.push_back(CliffordElement<S>(std::move(v)));
  }
  CliffordElement<S> out(m);
  for (std::uint32_t ma = 0; ma < x.c.size(); ++ma) {
    if (ring<S>::is_zero(x.c[ma])) continue;
    CliffordElement<S> prod(Multivector<S>::scalar(m, x.c[ma]));
    std::uint32_t rest = ma;
    while (rest) {  // ascending: morphism on the ordered product
      const int a = std::countr_zero(rest);
      prod = clifford_mul(prod, images[a], qsharp, hbar);
      rest ^= 1u << a;
    }
    out = out + prod;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Elements of Cl(m) (graded-tensor) Grassmann(k*m): bits [0,m) are Clifford
// generators, the rest plain Grassmann parameters. Hosts the quantiser
// Om_K(th), its supertrace identities and the Berezin-integral forms of the
// star products. These live in the orthonormal gauge q = identity.

template <class S>
struct ClGrass {
  int m_cl;
  Multivector<S> v;

  ClGrass(int cl, int grass) : m_cl(cl), v(cl + grass) {}
  ClGrass(int cl, Multivector<S> val) : m_cl(cl), v(std::move(val)) {}
  std::uint32_t cl_mask() const { return (1u << m_cl) - 1u; }
};

template <class S>
ClGrass<S> cg_mul(const ClGrass<S>& A, const ClGrass<S>& B, const SqMat<S>& qsharp,
                  const S& hbar) {
  A.v.check_same(B.v);
  const int m = A.m_cl;
  const std::uint32_t clm = A.cl_mask();
  ClGrass<S> out(m, A.v.gens() - m);
  for (std::uint32_t ka = 0; ka < A.v.size(); ++ka) {
    if (ring<S>::is_zero(A.v[ka])) continue;
    const std::uint32_t c1 = ka & clm, g1 = ka & ~clm;
    for (std::uint32_t kb = 0; kb < B.v.size(); ++kb) {
      if (ring<S>::is_zero(B.v[kb])) continue;
      const std::uint32_t c2 = kb & clm, g2 = kb & ~clm;
      if (g1 & g2) continue;
      bool neg = (degree(g1) & 1) && (degree(c2) & 1);  // slide g1 past c2
      neg ^= merge_sign_neg(g1, g2);
      // Clifford monomial product c1 . c2 in the small algebra.
      Multivector<S> mono = Multivector<S>::monomial(m, c2, S(1));
      std::uint32_t rest = c1;
      while (rest) {
        const int a = 31 - std::countl_zero(rest);
        mono = clifford_gen_left(a, mono, qsharp, hbar);
        rest ^= 1u << a;
      }
      S coeff = A.v[ka] * B.v[kb];
      if (neg) coeff = -coeff;
      const std::uint32_t gm = g1 | g2;
      for (std::uint32_t cm = 0; cm < mono.size(); ++cm) {
        if (ring<S>::is_zero(mono[cm])) continue;
        out.v[cm | gm] += coeff * mono[cm];
      }
    }
  }
  return out;
}

namespace detail {
template <class S>
void require_orthonormal(const SqMat<S>& qsharp) {
  for (int i = 0; i < qsharp.dim(); ++i)
    for (int j = 0; j < qsharp.dim(); ++j) {
      const bool want_one = i == j;
      const double err = ring<S>::abs(qsharp(i, j) - (want_one ? S(1) : S{}));
      if (err > 1e-12) throw BasisError("quantiser kernels need an orthonormal oriented basis");
    }
}
}  // namespace detail

// Om_0(th) = (th^1 - that^1)...(th^m - that^m) with the Grassmann parameters
// of `slot` (0-based among `slots` Grassmann copies).
template <class S>
ClGrass<S> sw_quantizer_moyal(int m, int slots, int slot, const S& hbar) {
  if (m * (slots + 1) > kMaxGenerators) throw DimensionError("quantiser exceeds generator cap");
  SqMat<S> qsharp = SqMat<S>::identity(m);
  ClGrass<S> acc(m, Multivector<S>::scalar(m * (slots + 1), S(1)));
  for (int mu = 0; mu < m; ++mu) {
    ClGrass<S> factor(m, m * slots);
    factor.v[1u << (m + slot * m + mu)] = S(1);
    factor.v[1u << mu] = -S(1);
    acc = cg_mul(acc, factor, qsharp, hbar);
  }
  return acc;
}

// Om_K = exp((hbar/8) K^{mn} d_m d_n) Om_0, derivatives on the chosen slot.
template <class S>
ClGrass<S> sw_quantizer(int m, const SqMat<S>& K, const S& hbar, int slots = 1, int slot = 0) {
  ClGrass<S> om = sw_quantizer_moyal<S>(m, slots, slot, hbar);
  BiOperator<S> op;
  const S scale = hbar * ring<S>::from_ratio(1, 8);
  const int base = m + slot * m;
  for (int mu = 0; mu < m; ++mu)
    for (int nu = 0; nu < m; ++nu)
      if (!ring<S>::is_zero(K(mu, nu))) op.dd.push_back({base + mu, base + nu, scale * K(mu, nu)});
  om.v = exp_bioperator(op, om.v);
  return om;
}

// Q_K(f) = Berezin_th [ Om_K(th) f(th) ]; orthonormal gauge only.
template <class S>
CliffordElement<S> quantize_sw(const Multivector<S>& f, const SqMat<S>& K, const SqMat<S>& qsharp,
                               const S& hbar) {
  detail::require_orthonormal(qsharp);
  const int m = f.gens();
  ClGrass<S> om = sw_quantizer(m, K, hbar);
  ClGrass<S> ff(m, Multivector<S>(2 * m));
  for (std::uint32_t k = 0; k < f.size(); ++k) ff.v[k << m] = f[k];
  ClGrass<S> prod = cg_mul(om, ff, SqMat<S>::identity(m), hbar);
  Multivector<S> out(m);
  const std::uint32_t top = ((1u << m) - 1u) << m;
  for (std::uint32_t c = 0; c < out.size(); ++c) {
    // The measure dth^m...dth^1 passes the Clifford factor: (-1)^{m |A|}.
    const bool neg = (m & 1) && (degree(c) & 1);
    out[c] = neg ? -prod.v[c | top] : prod.v[c | top];
  }
  return CliffordElement<S>(std::move(out));
}

// Supertrace over the Clifford factor: Lambda-valued.
template <class S>
Multivector<S> supertrace_cl(const ClGrass<S>& A, const S& hbar) {
  if (A.m_cl % 2 != 0) throw DimensionError("supertrace needs even dimension");
  const int m = A.m_cl, gr = A.v.gens() - m;
  const int n = m / 2;
  S factor = S(1);
  const S step = ring<S>::unit_im() * hbar * ring<S>::from_ratio(1, 2);
  for (int k = 0; k < n; ++k) factor *= step;
  Multivector<S> out(gr);
  const std::uint32_t clm = A.cl_mask();
  for (std::uint32_t k = 0; k < A.v.size(); ++k) {
    if ((k & clm) != clm) continue;
    if (ring<S>::is_zero(A.v[k])) continue;
    out[k >> m] = factor * A.v[k];
  }
  return out;
}

// Q_K^{-1}(a) = (2/(i hbar))^n str(Om_{-K}(th) a).
template <class S>
Multivector<S> symbol_sw(const CliffordElement<S>& x, const SqMat<S>& K, const SqMat<S>& qsharp,
                         const S& hbar) {
  detail::require_orthonormal(qsharp);
  const int m = x.gens();
  if (m % 2 != 0) throw DimensionError("supertrace route needs even dimension");
  ClGrass<S> om = sw_quantizer(m, S(-1) * K, hbar);
  ClGrass<S> xx(m, Multivector<S>(2 * m));
  for (std::uint32_t k = 0; k < x.c.size(); ++k) xx.v[k] = x.c[k];
  ClGrass<S> prod = cg_mul(om, xx, SqMat<S>::identity(m), hbar);
  Multivector<S> tr = supertrace_cl(prod, hbar);
  const int n = m / 2;
  // 2/(i hbar) = -2i / hbar.
  S inv_step = ring<S>::from_ratio(-2, 1) * ring<S>::unit_im() * ring<S>::inv(hbar);
  S factor = S(1);
  for (int k = 0; k < n; ++k) factor *= inv_step;
  return tr * factor;
}

// delta(th - th') = prod_mu (th^mu - th'^mu) in a plain Grassmann algebra on
// `gens` generators, blocks at offsets a_off and b_off.
template <class S>
Multivector<S> grassmann_delta(int m, int gens, int a_off, int b_off) {
  Multivector<S> acc = Multivector<S>::scalar(gens, S(1));
  for (int mu = 0; mu < m; ++mu) {
    Multivector<S> factor(gens);
    factor[1u << (a_off + mu)] = S(1);
    factor[1u << (b_off + mu)] = -S(1);
    acc = wedge(acc, factor);
  }
  return acc;
}

// Berezin-integral form of the star product (orthonormal gauge, numeric):
//   (f *_K g)(th) = (-1)^n det(q + K_flat) Int dth' dth''
//       f(th + sqrt(hbar)/2 th') g(th + sqrt(hbar)/2 th'')
//       exp[ (q + K_flat)^{-T} (th', th'') ].
// At K = 0 the determinant is 1 and the form is q itself, the Moyal kernel.
// The Gaussian couples the shifted variables through the inverse transposed
// form, with the determinant restoring the 1 *_K 1 = 1 normalisation.
inline MultivectorC star_kernel_integral(const MultivectorC& f, const MultivectorC& g,
                                         const SqMat<Cplx>& K, double hbar) {
  f.check_same(g);
  const int m = f.gens();
  if (3 * m > kMaxGenerators) throw DimensionError("kernel integral exceeds generator cap");
  if (m % 2 != 0) throw DimensionError("kernel integral needs even dimension");
  const int gens = 3 * m;
  const Cplx shift = std::sqrt(hbar) / 2.0;

  std::vector<MultivectorC> img_f, img_g;
  for (int mu = 0; mu < m; ++mu) {
    MultivectorC vf(gens), vg(gens);
    vf[1u << mu] = 1.0;
    vf[1u << (m + mu)] = shift;
    vg[1u << mu] = 1.0;
    vg[1u << (2 * m + mu)] = shift;
    img_f.push_back(std::move(vf));
    img_g.push_back(std::move(vg));
  }
  MultivectorC fs = substitute<Cplx>(f, img_f, gens);
  MultivectorC gs = substitute<Cplx>(g, img_g, gens);

  SqMat<Cplx> lambda = SqMat<Cplx>::identity(m) + K;
  SqMat<Cplx> B = lambda.transpose().inverse();
  MultivectorC quad(gens);
  for (int mu = 0; mu < m; ++mu)
    for (int nu = 0; nu < m; ++nu) {
      if (B(mu, nu) == Cplx(0)) continue;
      quad += wedge(MultivectorC::generator(gens, m + mu),
                    MultivectorC::generator(gens, 2 * m + nu)) *
              B(mu, nu);
    }
  MultivectorC integrand = wedge(wedge(fs, gs), exp_even(quad));

  MultivectorC out(m);
  const std::uint32_t primed_top = (((1u << m) - 1u) << m) | (((1u << m) - 1u) << (2 * m));
  for (std::uint32_t t = 0; t < out.size(); ++t) out[t] = integrand[t | primed_top];
  if ((m / 2) % 2 != 0) out = -out;
  return out * lambda.determinant();
}

}  // namespace fermion
