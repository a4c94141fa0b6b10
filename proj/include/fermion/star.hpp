#pragma once

#include <vector>

#include "fermion/multivector.hpp"
#include "fermion/smallmat.hpp"

namespace fermion {

// Poisson superalgebra and the family of star products *_K on functions,
// together with the intertwiners realising the flat connection over the
// space of antisymmetric bivectors K.

// {f,g} = 1/2 q^{mn} d'_m f ^ d_n g.
template <class S>
Multivector<S> poisson_bracket(const Multivector<S>& f, const Multivector<S>& g,
                               const SqMat<S>& qsharp) {
  f.check_same(g);
  if (qsharp.dim() != f.gens()) throw DimensionError("metric dimension mismatch");
  Multivector<S> acc(f.gens());
  const S half = ring<S>::from_ratio(1, 2);
  for (int mu = 0; mu < f.gens(); ++mu) {
    Multivector<S> df = signed_derivative(f, mu);
    if (df.is_zero()) continue;
    for (int nu = 0; nu < f.gens(); ++nu) {
      if (ring<S>::is_zero(qsharp(mu, nu))) continue;
      Multivector<S> dg = fermi_derivative(g, nu);
      if (dg.is_zero()) continue;
      acc += wedge(df, dg) * (qsharp(mu, nu) * half);
    }
  }
  return acc;
}

// Components c^n of the Hamiltonian field H_f = c^n d_n, c^n = q^{mn} d'_m f.
template <class S>
std::vector<Multivector<S>> hamiltonian_field(const Multivector<S>& f, const SqMat<S>& qsharp) {
  if (qsharp.dim() != f.gens()) throw DimensionError("metric dimension mismatch");
  std::vector<Multivector<S>> c(f.gens(), Multivector<S>(f.gens()));
  for (int mu = 0; mu < f.gens(); ++mu) {
    Multivector<S> df = signed_derivative(f, mu);
    if (df.is_zero()) continue;
    for (int nu = 0; nu < f.gens(); ++nu)
      if (!ring<S>::is_zero(qsharp(mu, nu))) c[nu] += df * qsharp(mu, nu);
  }
  return c;
}

// exp(sum of composed generator operators) f, term cap from nilpotency.
template <class S>
Multivector<S> exp_bioperator(const BiOperator<S>& op, const Multivector<S>& f) {
  Multivector<S> acc = f;
  Multivector<S> term = f;
  for (int k = 1; k <= f.gens(); ++k) {
    Multivector<S> next(f.gens());
    apply_bioperator(op, term.data(), next.data(), f.gens());
    term = std::move(next) * ring<S>::from_ratio(1, k);
    if (term.is_zero()) break;
    acc += term;
  }
  return acc;
}

// sum_{mn} C(m,n) d_m d_n f (the n-derivative acts first).
template <class S>
Multivector<S> quadratic_derivative(const Multivector<S>& f, const SqMat<S>& C) {
  if (C.dim() != f.gens()) throw DimensionError("coefficient dimension mismatch");
  BiOperator<S> op;
  for (int mu = 0; mu < C.dim(); ++mu)
    for (int nu = 0; nu < C.dim(); ++nu)
      if (!ring<S>::is_zero(C(mu, nu))) op.dd.push_back({mu, nu, C(mu, nu)});
  Multivector<S> out(f.gens());
  apply_bioperator(op, f.data(), out.data(), f.gens());
  return out;
}

template <class S>
Multivector<S> exp_quadratic_derivative(const Multivector<S>& f, const SqMat<S>& C,
                                        const S& scale) {
  BiOperator<S> op;
  for (int mu = 0; mu < C.dim(); ++mu)
    for (int nu = 0; nu < C.dim(); ++nu)
      if (!ring<S>::is_zero(C(mu, nu))) op.dd.push_back({mu, nu, scale * C(mu, nu)});
  return exp_bioperator(op, f);
}

// f *_K g = D*( exp(-hbar/4 (q^# + K)^{mn} d_m (x) d_n) f (x) g ), evaluated
// in the doubled algebra: bits [0,m) carry f, bits [m,2m) carry g, and the
// slot operators are plain graded derivatives of the concatenated algebra.
template <class S>
Multivector<S> star_k(const Multivector<S>& f, const Multivector<S>& g, const SqMat<S>& qsharp,
                      const SqMat<S>& K, const S& hbar) {
  f.check_same(g);
  const int m = f.gens();
  if (qsharp.dim() != m || K.dim() != m) throw DimensionError("metric/bivector mismatch");
  if (!K.is_antisymmetric(ring<S>::formal ? 0.0 : 1e-12))
    throw ConstraintError("bivector K must be antisymmetric");
  const SqMat<S> lambda = qsharp + K;
  Multivector<S> D = tensor_embed(f, g);
  BiOperator<S> op;
  const S scale = -(hbar * ring<S>::from_ratio(1, 4));
  for (int mu = 0; mu < m; ++mu)
    for (int nu = 0; nu < m; ++nu)
      if (!ring<S>::is_zero(lambda(mu, nu))) op.dd.push_back({mu, m + nu, scale * lambda(mu, nu)});
  return diagonal_pullback(exp_bioperator(op, D));
}

// Moyal product: K = 0.
template <class S>
Multivector<S> star_moyal(const Multivector<S>& f, const Multivector<S>& g,
                          const SqMat<S>& qsharp, const S& hbar) {
  return star_k(f, g, qsharp, SqMat<S>(f.gens()), hbar);
}

// Intertwiner between *_Kfrom and *_Kto: exp(-hbar/8 (Kto-Kfrom)^{mn} d_m d_n).
template <class S>
Multivector<S> intertwine(const Multivector<S>& f, const SqMat<S>& k_from, const SqMat<S>& k_to,
                          const S& hbar) {
  if (k_from.dim() != f.gens() || k_to.dim() != f.gens())
    throw DimensionError("bivector dimension mismatch");
  return exp_quadratic_derivative(f, k_to - k_from, -(hbar * ring<S>::from_ratio(1, 8)));
}

// Parallel transport of the flat connection along a sampled bivector path,
// composed segment by segment. Flatness makes it equal to the endpoint
// intertwiner; the suites check exactly that.
template <class S>
Multivector<S> transport_functions(const std::vector<SqMat<S>>& path, const Multivector<S>& f,
                                   const S& hbar) {
  if (path.empty()) throw DimensionError("empty bivector path");
  Multivector<S> cur = f;
  for (std::size_t i = 0; i + 1 < path.size(); ++i)
    cur = intertwine(cur, path[i], path[i + 1], hbar);
  return cur;
}

}  // namespace fermion
