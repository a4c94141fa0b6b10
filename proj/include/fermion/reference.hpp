#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "fermion/multivector.hpp"
#include "fermion/smallmat.hpp"

namespace fermion {

// Serial reference implementations, deliberately written along different
// routes than the production kernels. They validate the kernels in the test
// suites and serve as the independent oracles the verification CLI exposes;
// the benchmark compares them against the parallel paths.

namespace reference {

// Sign by literal inversion counting on the concatenated index lists.
template <class S>
Multivector<S> wedge(const Multivector<S>& a, const Multivector<S>& b) {
  a.check_same(b);
  Multivector<S> out(a.gens());
  for (std::uint32_t ma = 0; ma < a.size(); ++ma) {
    if (ring<S>::is_zero(a[ma])) continue;
    for (std::uint32_t mb = 0; mb < b.size(); ++mb) {
      if (ring<S>::is_zero(b[mb]) || (ma & mb)) continue;
      std::array<int, 2 * kMaxGenerators> idx{};
      int len = 0;
      for (int i = 0; i < a.gens(); ++i)
        if (ma & (1u << i)) idx[len++] = i;
      for (int i = 0; i < a.gens(); ++i)
        if (mb & (1u << i)) idx[len++] = i;
      int inversions = 0;
      for (int i = 0; i < len; ++i)
        for (int j = i + 1; j < len; ++j)
          if (idx[i] > idx[j]) ++inversions;
      S v = a[ma] * b[mb];
      if (inversions & 1) v = -v;
      out[ma | mb] += v;
    }
  }
  return out;
}

// Direct evaluation of f *_K g = D*(exp(-hbar/4 Lam^{mn} d_m (x) d_n) f (x) g)
// as nested sums over index tuples. The bidifferential operator acts on
// explicit pairs of multivectors with the Koszul sign (-1)^{|f|} written out;
// no doubled algebra, no tensor_embed, no diagonal_pullback.
template <class S>
Multivector<S> star_k(const Multivector<S>& f, const Multivector<S>& g,
                      const SqMat<S>& lambda, const S& hbar) {
  f.check_same(g);
  const int m = f.gens();
  struct Pair {
    Multivector<S> lhs, rhs;
    int lhs_degree;
  };
  std::vector<Pair> terms;
  for (int p = 0; p <= m; ++p) {
    Multivector<S> part = grade_part(f, p);
    if (!part.is_zero()) terms.push_back({std::move(part), g, p});
  }
  Multivector<S> acc(m);
  const S scale = -(hbar * ring<S>::from_ratio(1, 4));
  S factor = S(1);
  for (int order = 0; order <= m; ++order) {
    if (order > 0) {
      factor = factor * scale * ring<S>::from_ratio(1, order);
      std::vector<Pair> next;
      for (const auto& t : terms) {
        const bool neg = t.lhs_degree & 1;
        for (int mu = 0; mu < m; ++mu)
          for (int nu = 0; nu < m; ++nu) {
            if (ring<S>::is_zero(lambda(mu, nu))) continue;
            Multivector<S> lf = fermi_derivative(t.lhs, mu) * lambda(mu, nu);
            if (lf.is_zero()) continue;
            if (neg) lf = -lf;
            Multivector<S> rg = fermi_derivative(t.rhs, nu);
            if (rg.is_zero()) continue;
            next.push_back({std::move(lf), std::move(rg), t.lhs_degree - 1});
          }
      }
      terms = std::move(next);
      if (terms.empty()) break;
    }
    for (const auto& t : terms) acc += fermion::wedge(t.lhs, t.rhs) * factor;
  }
  return acc;
}

// Right-multiplication route for the Clifford product in the ordered
// generator-product basis: anticommute th^a leftwards through a monomial.
// Mirrors the production path, which walks generators in from the left.
template <class S>
Multivector<S> clifford_right_mul_gen(const Multivector<S>& x, int a, const SqMat<S>& qsharp,
                                      const S& hbar) {
  const int m = x.gens();
  Multivector<S> out(m);
  const S half_h = hbar * ring<S>::from_ratio(1, 2);
  for (std::uint32_t mk = 0; mk < x.size(); ++mk) {
    if (ring<S>::is_zero(x[mk])) continue;
    const S& coeff = x[mk];
    std::uint32_t suffix = 0;
    std::uint32_t rest = mk;
    bool neg = false;
    while (true) {
      if (rest == 0 || a > 31 - std::countl_zero(rest)) {
        out[suffix | rest | (1u << a)] += neg ? -coeff : coeff;
        break;
      }
      const int b = 31 - std::countl_zero(rest);
      rest ^= 1u << b;
      if (a == b) {
        S v = coeff * (hbar * ring<S>::from_ratio(1, 4) * qsharp(a, a));
        out[suffix | rest] += neg ? -v : v;
        break;
      }
      if (!ring<S>::is_zero(qsharp(b, a))) {
        S v = coeff * (half_h * qsharp(b, a));
        out[suffix | rest] += neg ? -v : v;
      }
      suffix |= 1u << b;
      neg = !neg;
    }
  }
  return out;
}

template <class S>
Multivector<S> clifford_mul(const Multivector<S>& x, const Multivector<S>& y,
                            const SqMat<S>& qsharp, const S& hbar) {
  x.check_same(y);
  const int m = x.gens();
  Multivector<S> out(m);
  for (std::uint32_t mb = 0; mb < y.size(); ++mb) {
    if (ring<S>::is_zero(y[mb])) continue;
    Multivector<S> cur = x * y[mb];
    for (int a = 0; a < m; ++a)
      if (mb & (1u << a)) cur = clifford_right_mul_gen(cur, a, qsharp, hbar);
    out += cur;
  }
  return out;
}

// Serial scatter form of the bioperator sweep (the kernel gathers instead).
template <class S>
Multivector<S> apply_bioperator(const BiOperator<S>& op, const Multivector<S>& f) {
  Multivector<S> out(f.gens());
  for (const auto& t : op.dd) {
    Multivector<S> v = fermi_derivative(fermi_derivative(f, t.b), t.a);
    out += v * t.c;
  }
  for (const auto& t : op.dw) {
    Multivector<S> v =
        fermi_derivative(fermion::wedge(Multivector<S>::generator(f.gens(), t.b), f), t.a);
    out += v * t.c;
  }
  return out;
}

}  // namespace reference
}  // namespace fermion
