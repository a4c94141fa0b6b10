#pragma once

// Shared helpers for the test suites: seeded random algebra elements in both
// scalar modes and a few small constructors used across files.

#include <cstdint>
#include <vector>

#include "fermion/multivector.hpp"
#include "fermion/rng.hpp"
#include "fermion/smallmat.hpp"

namespace fermion::testing {

inline MultivectorC random_mv(Rng& rng, int gens, int terms = 0) {
  MultivectorC f(gens);
  if (terms <= 0) {
    for (std::uint32_t m = 0; m < f.size(); ++m) f[m] = rng.cnormal();
  } else {
    for (int t = 0; t < terms; ++t) f[rng.below(f.size())] += rng.cnormal();
  }
  return f;
}

inline MultivectorC random_homogeneous(Rng& rng, int gens, int deg) {
  MultivectorC f(gens);
  for (std::uint32_t m = 0; m < f.size(); ++m)
    if (degree(m) == deg) f[m] = rng.cnormal();
  return f;
}

inline MultivectorF random_mv_formal(Rng& rng, int gens, int terms = 6) {
  MultivectorF f(gens);
  for (int t = 0; t < terms; ++t)
    f[rng.below(f.size())] += LaurentPoly(rng.crational(false));
  return f;
}

inline MultivectorF random_homogeneous_formal(Rng& rng, int gens, int deg) {
  MultivectorF f(gens);
  for (std::uint32_t m = 0; m < f.size(); ++m)
    if (degree(m) == deg) f[m] = LaurentPoly(rng.crational());
  return f;
}

inline SqMat<LaurentPoly> random_antisym_formal(Rng& rng, int n) {
  SqMat<LaurentPoly> k(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      LaurentPoly v(rng.crational());
      k(i, j) = v;
      k(j, i) = -v;
    }
  return k;
}

inline SqMat<LaurentPoly> random_sym_formal(Rng& rng, int n) {
  SqMat<LaurentPoly> q(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      LaurentPoly v(rng.rational());
      q(i, j) = v;
      q(j, i) = v;
    }
    q(i, i) = LaurentPoly(rng.rational(false));
  }
  return q;
}

inline SqMat<Cplx> random_antisym(Rng& rng, int n) {
  SqMat<Cplx> k(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      Cplx v = rng.cnormal();
      k(i, j) = v;
      k(j, i) = -v;
    }
  return k;
}

// The hbar^k coefficient of a formal multivector, as a constant-scalar one.
inline MultivectorF hbar_coeff(const MultivectorF& f, int k) {
  MultivectorF out(f.gens());
  for (std::uint32_t m = 0; m < f.size(); ++m) out[m] = LaurentPoly(f[m].coeff(k));
  return out;
}

inline int hbar_degree(const MultivectorF& f) {
  int d = 0;
  for (std::uint32_t m = 0; m < f.size(); ++m) d = std::max(d, f[m].max_degree());
  return d;
}

// f (x) g (x) h in the 3m-generator algebra (test-only; m <= 5).
template <class S>
Multivector<S> triple_embed(const Multivector<S>& f, const Multivector<S>& g,
                            const Multivector<S>& h) {
  const int m = f.gens();
  Multivector<S> out(3 * m);
  for (std::uint32_t a = 0; a < f.size(); ++a) {
    if (ring<S>::is_zero(f[a])) continue;
    for (std::uint32_t b = 0; b < g.size(); ++b) {
      if (ring<S>::is_zero(g[b])) continue;
      for (std::uint32_t c = 0; c < h.size(); ++c) {
        if (ring<S>::is_zero(h[c])) continue;
        out[a | (b << m) | (c << (2 * m))] = f[a] * g[b] * h[c];
      }
    }
  }
  return out;
}

}  // namespace fermion::testing
