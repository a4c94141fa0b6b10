#pragma once

#include <bit>
#include <cstdint>
#include <vector>

#include "fermion/scalar.hpp"

namespace fermion {

// Dense coefficient kernels over the 2^g bitmask basis. All kernels are
// gather-form: every output mask is accumulated by exactly one thread, so
// results are deterministic for any schedule or thread count.

inline constexpr std::uint32_t kParallelThreshold = 1u << 13;

// Parity of the transposition count that merges the ordered monomial of mask
// `a` with that of mask `b` (a and b disjoint): pairs (i in a, j in b), j < i.
inline bool merge_sign_neg(std::uint32_t a, std::uint32_t b) {
  int swaps = 0;
  while (a) {
    std::uint32_t low = a & (~a + 1u);
    swaps += std::popcount(b & (low - 1u));
    a ^= low;
  }
  return swaps & 1;
}

// Sign of removing generator j from the monomial of `mask` (bit j set).
inline bool derivative_sign_neg(std::uint32_t mask, int j) {
  return std::popcount(mask & ((1u << j) - 1u)) & 1;
}

template <class S>
void wedge_kernel(const S* a, const S* b, S* out, int gens) {
  const std::int64_t n = std::int64_t(1) << gens;
  const bool par = n >= std::int64_t(kParallelThreshold);
#pragma omp parallel for schedule(static) if (par)
  for (std::int64_t cc = 0; cc < n; ++cc) {
    const auto c = static_cast<std::uint32_t>(cc);
    S acc{};
    std::uint32_t s = c;
    while (true) {
      const S& x = a[s];
      if (!ring<S>::is_zero(x)) {
        const S& y = b[c ^ s];
        if (!ring<S>::is_zero(y)) {
          S t = x * y;
          if (merge_sign_neg(s, c ^ s)) t = -t;
          acc += t;
        }
      }
      if (s == 0) break;
      s = (s - 1) & c;
    }
    out[c] = std::move(acc);
  }
}

// A sum of composed single-generator operators applied in one sweep:
//   dd: c * d_a(d_b(x))        (derivative b first, then derivative a)
//   dw: c * d_a(theta^b ^ x)   (left wedge by generator b, then derivative a)
template <class S>
struct BiOperator {
  struct Term {
    int a, b;
    S c;
  };
  std::vector<Term> dd;
  std::vector<Term> dw;

  bool empty() const { return dd.empty() && dw.empty(); }
};

// out must be zero-initialised; adds the operator image of `in`.
template <class S>
void apply_bioperator(const BiOperator<S>& op, const S* in, S* out, int gens) {
  const std::int64_t n = std::int64_t(1) << gens;
  const bool par = n >= std::int64_t(kParallelThreshold);
#pragma omp parallel for schedule(static) if (par)
  for (std::int64_t mm = 0; mm < n; ++mm) {
    const auto m = static_cast<std::uint32_t>(mm);
    S acc{};
    for (const auto& t : op.dd) {
      const std::uint32_t ba = 1u << t.a, bb = 1u << t.b;
      if (t.a == t.b || (m & ba) || (m & bb)) continue;
      const std::uint32_t src = m | ba | bb;
      const S& x = in[src];
      if (ring<S>::is_zero(x)) continue;
      bool neg = derivative_sign_neg(src, t.b);
      neg ^= derivative_sign_neg(src ^ bb, t.a);
      S v = t.c * x;
      acc += neg ? -v : v;
    }
    for (const auto& t : op.dw) {
      const std::uint32_t ba = 1u << t.a, bb = 1u << t.b;
      if (t.a == t.b) {
        // d_a(theta^a ^ x) keeps exactly the a-free part of x.
        if (!(m & ba)) {
          const S& x = in[m];
          if (!ring<S>::is_zero(x)) acc += t.c * x;
        }
        continue;
      }
      if (!(m & bb) || (m & ba)) continue;
      const std::uint32_t src = (m ^ bb) | ba;
      const S& x = in[src];
      if (ring<S>::is_zero(x)) continue;
      bool neg = std::popcount(src & (bb - 1u)) & 1;  // wedge theta^b into src
      neg ^= derivative_sign_neg(src | bb, t.a);
      S v = t.c * x;
      acc += neg ? -v : v;
    }
    out[m] = std::move(acc);
  }
}

}  // namespace fermion
