#include "fermion/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>

#include "fermion/clifford.hpp"
#include "fermion/geometry.hpp"
#include "fermion/json_io.hpp"
#include "fermion/reference.hpp"
#include "fermion/sections.hpp"
#include "fermion/star.hpp"
#include "fermion/transport.hpp"

namespace fermion::verify {

namespace {

using Clock = std::chrono::steady_clock;

const LaurentPoly kH = LaurentPoly::hbar();

MultivectorF rand_mvf(Rng& rng, int gens, int terms = 6) {
  MultivectorF f(gens);
  for (int t = 0; t < terms; ++t) f[rng.below(1u << gens)] += LaurentPoly(rng.crational(false));
  return f;
}

MultivectorF rand_homog_f(Rng& rng, int gens, int deg, int terms = 6) {
  std::vector<std::uint32_t> masks;
  for (std::uint32_t k = 0; k < (1u << gens); ++k)
    if (degree(k) == deg) masks.push_back(k);
  MultivectorF f(gens);
  for (int t = 0; t < terms && !masks.empty(); ++t)
    f[masks[rng.below(masks.size())]] += LaurentPoly(rng.crational());
  return f;
}

MultivectorC rand_mvc(Rng& rng, int gens) {
  MultivectorC f(gens);
  for (std::uint32_t k = 0; k < (1u << gens); ++k) f[k] = rng.cnormal();
  return f;
}

SqMat<LaurentPoly> rand_antisym_f(Rng& rng, int n) {
  SqMat<LaurentPoly> k(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      LaurentPoly v(rng.crational());
      k(i, j) = v;
      k(j, i) = -v;
    }
  return k;
}

SqMat<LaurentPoly> rand_sym_f(Rng& rng, int n) {
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

SqMat<Cplx> rand_antisym_c(Rng& rng, int n) {
  SqMat<Cplx> k(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      Cplx v = rng.cnormal();
      k(i, j) = v;
      k(j, i) = -v;
    }
  return k;
}

double exact(bool ok) { return ok ? 0.0 : 1.0; }

struct Harness {
  const SuiteConfig& cfg;
  std::vector<CheckResult>* out;
  std::string suite;

  bool selected() const {
    if (cfg.suites.empty()) return true;
    return std::find(cfg.suites.begin(), cfg.suites.end(), suite) != cfg.suites.end();
  }

  // body returns {residual, threshold}
  void check(const std::string& name, const std::function<std::pair<double, double>()>& body) {
    if (!selected()) return;
    CheckResult r;
    r.suite = suite;
    r.name = name;
    const auto t0 = Clock::now();
    try {
      auto [res, thr] = body();
      r.residual = res;
      r.threshold = thr;
      r.pass = res <= thr;
    } catch (const std::exception&) {
      r.residual = std::numeric_limits<double>::infinity();
      r.threshold = 0.0;
      r.pass = false;
    }
    r.ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
    out->push_back(r);
  }
};

int even_m(const SuiteConfig& cfg, int lo = 4, int hi = 6) {
  int m = std::clamp(cfg.m - (cfg.m % 2), lo, hi);
  return m;
}

int star_m(const SuiteConfig& cfg) { return std::clamp(cfg.m, 2, 6); }

// ---------------------------------------------------------------- algebra --

void suite_algebra(Harness h) {
  h.suite = "algebra";
  const SuiteConfig& cfg = h.cfg;

  h.check("leibniz-operator-identity", [&] {
    for (int m : {1, 2, 3})
      for (std::uint32_t mask = 0; mask < (1u << (2 * m)); ++mask) {
        auto F = MultivectorF::monomial(2 * m, mask, LaurentPoly(1));
        for (int mu = 0; mu < m; ++mu) {
          auto lhs = fermi_derivative(diagonal_pullback(F), mu);
          auto rhs = diagonal_pullback(fermi_derivative(F, mu) + fermi_derivative(F, m + mu));
          if (!(lhs == rhs)) return std::pair{1.0, 0.0};
        }
      }
    Rng rng(cfg.seed + 1);
    double worst = 0;
    const int m = std::clamp(cfg.m, 4, 6);
    for (int t = 0; t < 10; ++t) {
      MultivectorC F = rand_mvc(rng, 2 * m);
      for (int mu = 0; mu < m; ++mu) {
        auto lhs = fermi_derivative(diagonal_pullback(F), mu);
        auto rhs = diagonal_pullback(fermi_derivative(F, mu) + fermi_derivative(F, m + mu));
        worst = std::max(worst, max_abs_diff(lhs, rhs));
      }
    }
    return std::pair{worst, 1e-12};
  });

  h.check("tri-diagonal-coherence", [&] {
    Rng rng(cfg.seed + 2);
    const int m = 3;
    std::vector<MultivectorF> fold12, fold23;
    for (int i = 0; i < m; ++i) fold12.push_back(MultivectorF::generator(2 * m, i));
    for (int i = 0; i < m; ++i) fold12.push_back(MultivectorF::generator(2 * m, i));
    for (int i = 0; i < m; ++i) fold12.push_back(MultivectorF::generator(2 * m, m + i));
    for (int i = 0; i < m; ++i) fold23.push_back(MultivectorF::generator(2 * m, i));
    for (int i = 0; i < m; ++i) fold23.push_back(MultivectorF::generator(2 * m, m + i));
    for (int i = 0; i < m; ++i) fold23.push_back(MultivectorF::generator(2 * m, m + i));
    for (int t = 0; t < 15; ++t) {
      auto f = rand_mvf(rng, m), g = rand_mvf(rng, m), k = rand_mvf(rng, m);
      MultivectorF F3(3 * m);
      for (std::uint32_t a = 0; a < (1u << m); ++a)
        for (std::uint32_t b = 0; b < (1u << m); ++b)
          for (std::uint32_t c = 0; c < (1u << m); ++c) {
            auto v = f[a] * g[b] * k[c];
            if (!v.is_zero()) F3[a | (b << m) | (c << (2 * m))] = v;
          }
      auto via12 = diagonal_pullback(substitute<LaurentPoly>(F3, fold12, 2 * m));
      auto via23 = diagonal_pullback(substitute<LaurentPoly>(F3, fold23, 2 * m));
      if (!(via12 == via23) || !(via12 == wedge(wedge(f, g), k))) return std::pair{1.0, 0.0};
    }
    return std::pair{0.0, 0.0};
  });

  h.check("wedge-graded-ring", [&] {
    Rng rng(cfg.seed + 3);
    const int m = star_m(cfg);
    for (int t = 0; t < 20; ++t) {
      auto a = rand_mvf(rng, m), b = rand_mvf(rng, m), c = rand_mvf(rng, m);
      if (!(wedge(wedge(a, b), c) == wedge(a, wedge(b, c)))) return std::pair{1.0, 0.0};
      if (!(diagonal_pullback(tensor_embed(a, b)) == wedge(a, b))) return std::pair{1.0, 0.0};
      int p = static_cast<int>(rng.below(m + 1)), q = static_cast<int>(rng.below(m + 1));
      auto hp = rand_homog_f(rng, m, p), hq = rand_homog_f(rng, m, q);
      auto rhs = wedge(hq, hp);
      if ((p & 1) && (q & 1)) rhs = -rhs;
      if (!(wedge(hp, hq) == rhs)) return std::pair{1.0, 0.0};
    }
    return std::pair{0.0, 0.0};
  });

  h.check("graded-flip-pullback", [&] {
    Rng rng(cfg.seed + 4);
    double worst = 0;
    const int m = std::clamp(cfg.m, 3, 6);
    for (int t = 0; t < 20; ++t) {
      auto F = rand_mvc(rng, 2 * std::min(m, 4));
      worst = std::max(worst,
                       max_abs_diff(diagonal_pullback(graded_flip(F)), diagonal_pullback(F)));
      worst = std::max(worst, max_abs_diff(graded_flip(graded_flip(F)), F));
    }
    return std::pair{worst, 1e-12};
  });

  h.check("kernel-vs-reference", [&] {
    Rng rng(cfg.seed + 5);
    double worst = 0;
    for (int t = 0; t < 10; ++t) {
      const int m = 3 + static_cast<int>(rng.below(5));
      auto a = rand_mvc(rng, m), b = rand_mvc(rng, m);
      worst = std::max(worst, max_abs_diff(wedge(a, b), reference::wedge(a, b)));
      BiOperator<Cplx> op;
      for (int k = 0; k < 6; ++k) {
        int x = static_cast<int>(rng.below(m)), y = static_cast<int>(rng.below(m));
        if (rng.below(2))
          op.dd.push_back({x, y, rng.cnormal()});
        else
          op.dw.push_back({x, y, rng.cnormal()});
      }
      MultivectorC got(m);
      apply_bioperator(op, a.data(), got.data(), m);
      worst = std::max(worst, max_abs_diff(got, reference::apply_bioperator(op, a)));
    }
    return std::pair{worst, 1e-12};
  });

  h.check("berezin-orientation", [&] {
    const int m = star_m(cfg);
    auto top = MultivectorF::monomial(m, (1u << m) - 1, LaurentPoly(1));
    bool ok = berezin_integral(top) == LaurentPoly(1);
    for (std::uint32_t k = 0; k + 1 < (1u << m); ++k)
      ok = ok && berezin_integral(MultivectorF::monomial(m, k, LaurentPoly(1))).is_zero();
    return std::pair{exact(ok), 0.0};
  });
}

// ------------------------------------------------------------------- star --

void suite_star(Harness h) {
  h.suite = "star";
  const SuiteConfig& cfg = h.cfg;
  const int m = star_m(cfg);

  h.check("poisson-bracket-values", [&] {
    Rng rng(cfg.seed + 10);
    auto q = rand_sym_f(rng, m);
    for (int mu = 0; mu < m; ++mu)
      for (int nu = 0; nu < m; ++nu) {
        auto pb =
            poisson_bracket(MultivectorF::generator(m, mu), MultivectorF::generator(m, nu), q);
        if (!(pb == MultivectorF::scalar(m, q(mu, nu) * LaurentPoly(Rational(1, 2)))))
          return std::pair{1.0, 0.0};
      }
    auto f = rand_mvf(rng, m);
    if (!poisson_bracket(MultivectorF::scalar(m, LaurentPoly(1)), f, q).is_zero())
      return std::pair{1.0, 0.0};
    return std::pair{0.0, 0.0};
  });

  h.check("hamiltonian-field-bracket", [&] {
    Rng rng(cfg.seed + 11);
    auto q = rand_sym_f(rng, m);
    for (int t = 0; t < 30; ++t) {
      auto f = rand_mvf(rng, m), g = rand_mvf(rng, m);
      auto field = hamiltonian_field(f, q);
      MultivectorF acc(m);
      for (int nu = 0; nu < m; ++nu)
        acc += wedge(field[nu], fermi_derivative(g, nu)) * LaurentPoly(Rational(1, 2));
      if (!(acc == poisson_bracket(f, g, q))) return std::pair{1.0, 0.0};
    }
    return std::pair{0.0, 0.0};
  });

  h.check("star-associativity-exhaustive", [&] {
    Rng rng(cfg.seed + 12);
    for (int mm : {1, 2, 3}) {
      auto q = SqMat<LaurentPoly>::identity(mm);
      auto K = rand_antisym_f(rng, mm);
      for (std::uint32_t x = 0; x < (1u << mm); ++x)
        for (std::uint32_t y = 0; y < (1u << mm); ++y)
          for (std::uint32_t z = 0; z < (1u << mm); ++z) {
            auto f = MultivectorF::monomial(mm, x, LaurentPoly(1));
            auto g = MultivectorF::monomial(mm, y, LaurentPoly(1));
            auto w = MultivectorF::monomial(mm, z, LaurentPoly(1));
            if (!(star_k(star_k(f, g, q, K, kH), w, q, K, kH) ==
                  star_k(f, star_k(g, w, q, K, kH), q, K, kH)))
              return std::pair{1.0, 0.0};
          }
    }
    return std::pair{0.0, 0.0};
  });

  h.check("star-associativity-random", [&] {
    Rng rng(cfg.seed + 13);
    auto q = rand_sym_f(rng, m);
    const int trials = m >= 5 ? 8 : 20;
    const int terms = m >= 5 ? 4 : 6;
    for (int t = 0; t < trials; ++t) {
      auto K = rand_antisym_f(rng, m);
      auto f = rand_mvf(rng, m, terms), g = rand_mvf(rng, m, terms), w = rand_mvf(rng, m, terms);
      if (!(star_k(star_k(f, g, q, K, kH), w, q, K, kH) ==
            star_k(f, star_k(g, w, q, K, kH), q, K, kH)))
        return std::pair{1.0, 0.0};
    }
    return std::pair{0.0, 0.0};
  });

  h.check("star-first-order-and-degree", [&] {
    Rng rng(cfg.seed + 14);
    const int trials = m >= 5 ? 10 : 25;
    auto q = SqMat<LaurentPoly>::identity(m);
    for (int t = 0; t < trials; ++t) {
      auto K = rand_antisym_f(rng, m);
      int p = static_cast<int>(rng.below(m + 1)), s = static_cast<int>(rng.below(m + 1));
      auto f = rand_homog_f(rng, m, p), g = rand_homog_f(rng, m, s);
      auto fg = star_k(f, g, q, K, kH);
      auto gf = star_k(g, f, q, K, kH);
      auto comm = ((p & 1) && (s & 1)) ? fg + gf : fg - gf;
      MultivectorF h0(m), h1(m), w0(m);
      for (std::uint32_t k = 0; k < fg.size(); ++k) {
        h0[k] = LaurentPoly(comm[k].coeff(0));
        h1[k] = LaurentPoly(comm[k].coeff(1));
        w0[k] = LaurentPoly(fg[k].coeff(0));
        if (fg[k].max_degree() > m) return std::pair{1.0, 0.0};
      }
      if (!h0.is_zero()) return std::pair{1.0, 0.0};
      if (!(h1 == poisson_bracket(f, g, q))) return std::pair{1.0, 0.0};
      if (!(w0 == wedge(f, g))) return std::pair{1.0, 0.0};
    }
    return std::pair{0.0, 0.0};
  });

  h.check("graded-jacobi", [&] {
    Rng rng(cfg.seed + 15);
    auto q = rand_sym_f(rng, m);
    for (int t = 0; t < 25; ++t) {
      int pf = static_cast<int>(rng.below(m + 1));
      int pg = static_cast<int>(rng.below(m + 1));
      int ph = static_cast<int>(rng.below(m + 1));
      auto f = rand_homog_f(rng, m, pf), g = rand_homog_f(rng, m, pg),
           w = rand_homog_f(rng, m, ph);
      auto t1 = poisson_bracket(poisson_bracket(f, g, q), w, q);
      auto t2 = poisson_bracket(poisson_bracket(g, w, q), f, q);
      auto t3 = poisson_bracket(poisson_bracket(w, f, q), g, q);
      if ((pf & 1) && ((pg + ph) & 1)) t2 = -t2;
      if ((ph & 1) && ((pf + pg) & 1)) t3 = -t3;
      if (!(t1 + t2 + t3).is_zero()) return std::pair{1.0, 0.0};
    }
    return std::pair{0.0, 0.0};
  });

  h.check("bracket-leibniz", [&] {
    Rng rng(cfg.seed + 16);
    auto q = rand_sym_f(rng, m);
    for (int t = 0; t < 25; ++t) {
      int pf = static_cast<int>(rng.below(m + 1));
      int pg = static_cast<int>(rng.below(m + 1));
      auto f = rand_homog_f(rng, m, pf), g = rand_homog_f(rng, m, pg);
      auto w = rand_mvf(rng, m);
      auto lhs = poisson_bracket(f, wedge(g, w), q);
      auto rhs = wedge(poisson_bracket(f, g, q), w);
      auto tail = wedge(g, poisson_bracket(f, w, q));
      rhs += ((pf & 1) && (pg & 1)) ? -tail : tail;
      if (!(lhs == rhs)) return std::pair{1.0, 0.0};
    }
    return std::pair{0.0, 0.0};
  });

  h.check("moyal-wedge-absorption", [&] {
    Rng rng(cfg.seed + 17);
    const int mw = std::min(m, 4);  // one star per index pair: quadratic cost
    auto q = SqMat<LaurentPoly>::identity(mw);
    auto zero = SqMat<LaurentPoly>(mw);
    const LaurentPoly qh = kH * LaurentPoly(Rational(1, 4));
    for (int t = 0; t < 15; ++t) {
      MultivectorF a(mw);
      for (int i = 0; i < mw; ++i) a[1u << i] = LaurentPoly(rng.crational());
      int pf = static_cast<int>(rng.below(mw + 1));
      auto f = rand_homog_f(rng, mw, pf);
      auto g = rand_mvf(rng, mw);
      auto s0 = [&](const MultivectorF& x, const MultivectorF& y) {
        return star_k(x, y, q, zero, kH);
      };
      auto rhs1 = wedge(a, s0(f, g));
      auto rhs2 = wedge(a, s0(f, g));
      if (pf & 1) rhs2 = -rhs2;
      for (int mu = 0; mu < mw; ++mu) {
        auto t1 = s0(f, fermi_derivative(g, mu)) * (qh * a[1u << mu]);
        rhs1 += (pf & 1) ? -t1 : t1;
        rhs2 += s0(signed_derivative(f, mu), g) * (qh * a[1u << mu]);
      }
      if (!(s0(wedge(a, f), g) == rhs1)) return std::pair{1.0, 0.0};
      if (!(s0(f, wedge(a, g)) == rhs2)) return std::pair{1.0, 0.0};
    }
    return std::pair{0.0, 0.0};
  });

  h.check("star-vs-reference", [&] {
    // The nested-sum oracle enumerates index tuples and is exponential on
    // dense inputs; the dual-route check runs at the oracle's natural size.
    Rng rng(cfg.seed + 18);
    const int mo = std::min(m, 4);
    auto q = SqMat<LaurentPoly>::identity(mo);
    for (int t = 0; t < 10; ++t) {
      auto K = rand_antisym_f(rng, mo);
      auto f = rand_mvf(rng, mo), g = rand_mvf(rng, mo);
      if (!(star_k(f, g, q, K, kH) == reference::star_k(f, g, q + K, kH)))
        return std::pair{1.0, 0.0};
    }
    double worst = 0;
    auto qn = SqMat<Cplx>::identity(mo);
    for (int t = 0; t < 10; ++t) {
      auto K = rand_antisym_c(rng, mo);
      auto f = rand_mvc(rng, mo), g = rand_mvc(rng, mo);
      worst = std::max(worst, max_abs_diff(star_k(f, g, qn, K, Cplx(cfg.hbar)),
                                           reference::star_k(f, g, qn + K, Cplx(cfg.hbar))));
    }
    return std::pair{worst, 1e-10};
  });

  h.check("intertwiner-theorem", [&] {
    Rng rng(cfg.seed + 19);
    auto q = SqMat<LaurentPoly>::identity(m);
    const int itrials = m >= 5 ? 10 : 25;
    for (int t = 0; t < itrials; ++t) {
      auto K = rand_antisym_f(rng, m);
      auto Kp = rand_antisym_f(rng, m);
      auto f = rand_mvf(rng, m), g = rand_mvf(rng, m);
      auto lhs = intertwine(star_k(f, g, q, K, kH), K, Kp, kH);
      auto rhs = star_k(intertwine(f, K, Kp, kH), intertwine(g, K, Kp, kH), q, Kp, kH);
      if (!(lhs == rhs)) return std::pair{1.0, 0.0};
      if (!(intertwine(intertwine(f, K, Kp, kH), Kp, K, kH) == f)) return std::pair{1.0, 0.0};
    }
    return std::pair{0.0, 0.0};
  });

  h.check("intertwiner-cocycle-flatness", [&] {
    Rng rng(cfg.seed + 20);
    for (int t = 0; t < 15; ++t) {
      auto k0 = rand_antisym_f(rng, m), k1 = rand_antisym_f(rng, m), k2 = rand_antisym_f(rng, m);
      auto f = rand_mvf(rng, m);
      if (!(intertwine(intertwine(f, k0, k1, kH), k1, k2, kH) == intertwine(f, k0, k2, kH)))
        return std::pair{1.0, 0.0};
      auto via = transport_functions<LaurentPoly>({k0, k2, k1}, f, kH);
      if (!(via == intertwine(f, k0, k1, kH))) return std::pair{1.0, 0.0};
    }
    return std::pair{0.0, 0.0};
  });
}

// --------------------------------------------------------------- clifford --

void suite_clifford(Harness h) {
  h.suite = "clifford";
  const SuiteConfig& cfg = h.cfg;
  const int m = std::clamp(cfg.m, 2, 6);

  h.check("generator-relation", [&] {
    Rng rng(cfg.seed + 30);
    auto q = rand_sym_f(rng, m);
    for (int t = 0; t < 10; ++t) {
      MultivectorF av(m), bv(m);
      for (int i = 0; i < m; ++i) {
        av[1u << i] = LaurentPoly(rng.crational());
        bv[1u << i] = LaurentPoly(rng.crational());
      }
      CliffordF a(av), b(bv);
      auto anti = clifford_mul(a, b, q, kH) + clifford_mul(b, a, q, kH);
      LaurentPoly qab;
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) qab += q(i, j) * av[1u << i] * bv[1u << j];
      if (!(anti == CliffordF(MultivectorF::scalar(m, kH * LaurentPoly(Rational(1, 2)) * qab))))
        return std::pair{1.0, 0.0};
    }
    return std::pair{0.0, 0.0};
  });

  h.check("product-associative-and-reference", [&] {
    Rng rng(cfg.seed + 31);
    auto q = rand_sym_f(rng, std::min(m, 4));
    const int mm = std::min(m, 4);
    for (int t = 0; t < 10; ++t) {
      auto x = CliffordF(rand_mvf(rng, mm)), y = CliffordF(rand_mvf(rng, mm)),
           z = CliffordF(rand_mvf(rng, mm));
      if (!(clifford_mul(clifford_mul(x, y, q, kH), z, q, kH) ==
            clifford_mul(x, clifford_mul(y, z, q, kH), q, kH)))
        return std::pair{1.0, 0.0};
      if (!(clifford_mul(x, y, q, kH).c == reference::clifford_mul(x.c, y.c, q, kH)))
        return std::pair{1.0, 0.0};
    }
    return std::pair{0.0, 0.0};
  });

  h.check("symmetrised-action", [&] {
    Rng rng(cfg.seed + 32);
    const int mm = std::min(m, 4);
    auto q = rand_sym_f(rng, mm);
    auto x = CliffordF(rand_mvf(rng, mm));
    if (!(sym_mul_apply(MultivectorF::scalar(mm, LaurentPoly(1)), x, q, kH) == x))
      return std::pair{1.0, 0.0};
    for (int t = 0; t < 10; ++t) {
      int p = static_cast<int>(rng.below(mm + 1));
      auto f = rand_homog_f(rng, mm, p);
      std::vector<LaurentPoly> cov(mm);
      for (int i = 0; i < mm; ++i) cov[i] = LaurentPoly(rng.crational());
      std::vector<LaurentPoly> v(mm);
      for (int mu = 0; mu < mm; ++mu)
        for (int nu = 0; nu < mm; ++nu) v[mu] += q(mu, nu) * cov[nu];
      MultivectorF dvf(mm);
      for (int mu = 0; mu < mm; ++mu) dvf += fermi_derivative(f, mu) * v[mu];
      auto lhs1 = clifford_derivative_inner(sym_mul_apply(f, x, q, kH), cov, q, kH);
      auto tail = sym_mul_apply(f, clifford_derivative_inner(x, cov, q, kH), q, kH);
      auto lhs = (p & 1) ? lhs1 + tail : lhs1 - tail;
      if (!(lhs == sym_mul_apply(dvf, x, q, kH))) return std::pair{1.0, 0.0};
    }
    return std::pair{0.0, 0.0};
  });

  h.check("derivative-compatibility", [&] {
    Rng rng(cfg.seed + 33);
    const int mm = std::min(m, 4);
    auto q = rand_sym_f(rng, mm);
    for (int t = 0; t < 10; ++t) {
      auto f = rand_mvf(rng, mm);
      for (int mu = 0; mu < mm; ++mu) {
        std::vector<LaurentPoly> cov(mm);
        cov[mu] = LaurentPoly(1);
        auto inner = clifford_derivative_inner(CliffordF(f), cov, q, kH);
        MultivectorF dvf(mm);
        for (int nu = 0; nu < mm; ++nu) dvf += fermi_derivative(f, nu) * q(mu, nu);
        if (!(inner.c == dvf)) return std::pair{1.0, 0.0};
      }
    }
    return std::pair{0.0, 0.0};
  });

  h.check("quantise-intertwines-star", [&] {
    Rng rng(cfg.seed + 34);
    for (int mm : {2, 3}) {
      auto q = SqMat<LaurentPoly>::identity(mm);
      auto K = rand_antisym_f(rng, mm);
      for (std::uint32_t x = 0; x < (1u << mm); ++x)
        for (std::uint32_t y = 0; y < (1u << mm); ++y) {
          auto f = MultivectorF::monomial(mm, x, LaurentPoly(1));
          auto g = MultivectorF::monomial(mm, y, LaurentPoly(1));
          auto lhs = clifford_mul(quantize(f, K, q, kH), quantize(g, K, q, kH), q, kH);
          if (!(lhs == quantize(star_k(f, g, q, K, kH), K, q, kH))) return std::pair{1.0, 0.0};
        }
    }
    const int mm = std::min(m, 4);
    auto q = rand_sym_f(rng, mm);
    for (int t = 0; t < 15; ++t) {
      auto K = rand_antisym_f(rng, mm);
      auto f = rand_mvf(rng, mm), g = rand_mvf(rng, mm);
      auto lhs = clifford_mul(quantize(f, K, q, kH), quantize(g, K, q, kH), q, kH);
      if (!(lhs == quantize(star_k(f, g, q, K, kH), K, q, kH))) return std::pair{1.0, 0.0};
    }
    return std::pair{0.0, 0.0};
  });

  h.check("symbol-inverts-quantise", [&] {
    Rng rng(cfg.seed + 35);
    const int mm = std::min(m, 4);
    auto q = rand_sym_f(rng, mm);
    auto qid = SqMat<LaurentPoly>::identity(mm);
    for (int t = 0; t < 25; ++t) {
      auto K = rand_antisym_f(rng, mm);
      auto f = rand_mvf(rng, mm);
      if (!(symbol(quantize(f, K, q, kH), K, q, kH) == f)) return std::pair{1.0, 0.0};
      if (mm % 2 == 0) {
        auto x = CliffordF(rand_mvf(rng, mm));
        if (!(symbol_sw(x, K, qid, kH) == symbol(x, K, qid, kH))) return std::pair{1.0, 0.0};
      }
    }
    return std::pair{0.0, 0.0};
  });

  h.check("supertrace-table", [&] {
    Rng rng(cfg.seed + 36);
    for (int mm : {2, 4}) {
      const int n = mm / 2;
      LaurentPoly want(1);
      for (int k = 0; k < n; ++k)
        want *= LaurentPoly(CRational::unit_im()) * kH * LaurentPoly(Rational(1, 2));
      if (!(supertrace(CliffordF(MultivectorF::monomial(mm, (1u << mm) - 1, LaurentPoly(1))), kH) ==
            want))
        return std::pair{1.0, 0.0};
      for (std::uint32_t k = 0; k + 1 < (1u << mm); ++k)
        if (!supertrace(CliffordF(MultivectorF::monomial(mm, k, LaurentPoly(1))), kH).is_zero())
          return std::pair{1.0, 0.0};
      auto q = rand_sym_f(rng, mm);
      for (int t = 0; t < 6; ++t) {
        auto x = CliffordF(rand_mvf(rng, mm)), y = CliffordF(rand_mvf(rng, mm));
        if (!supertrace(clifford_commutator(x, y, q, kH), kH).is_zero())
          return std::pair{1.0, 0.0};
      }
    }
    return std::pair{0.0, 0.0};
  });

  h.check("flat-bundle-to-constants", [&] {
    Rng rng(cfg.seed + 37);
    const int mm = std::min(m, 4);
    auto q = rand_sym_f(rng, mm);
    for (int t = 0; t < 15; ++t) {
      auto k0 = rand_antisym_f(rng, mm), k1 = rand_antisym_f(rng, mm);
      auto f = rand_mvf(rng, mm);
      if (!(quantize(intertwine(f, k0, k1, kH), k1, q, kH) == quantize(f, k0, q, kH)))
        return std::pair{1.0, 0.0};
    }
    return std::pair{0.0, 0.0};
  });

  h.check("sw-quantiser-route", [&] {
    Rng rng(cfg.seed + 38);
    const int mm = std::min(m, 4);
    auto qid = SqMat<LaurentPoly>::identity(mm);
    auto K = rand_antisym_f(rng, mm);
    if (!(quantize_sw(MultivectorF::scalar(mm, LaurentPoly(1)), K, qid, kH) == CliffordF::one(mm)))
      return std::pair{1.0, 0.0};
    for (int t = 0; t < 10; ++t) {
      auto f = rand_mvf(rng, mm);
      if (!(quantize_sw(f, K, qid, kH) == quantize(f, K, qid, kH))) return std::pair{1.0, 0.0};
    }
    return std::pair{0.0, 0.0};
  });

  h.check("quantiser-delta-identity", [&] {
    const int mm = 2;
    auto om_a = sw_quantizer_moyal<LaurentPoly>(mm, 2, 0, kH);
    auto om_b = sw_quantizer_moyal<LaurentPoly>(mm, 2, 1, kH);
    auto prod = cg_mul(om_a, om_b, SqMat<LaurentPoly>::identity(mm), kH);
    auto tr = supertrace_cl(prod, kH);
    auto delta = grassmann_delta<LaurentPoly>(mm, 2 * mm, 0, mm);
    LaurentPoly factor = LaurentPoly(CRational::unit_im()) * kH * LaurentPoly(Rational(1, 2));
    return std::pair{exact(tr == delta * factor), 0.0};
  });

  h.check("triple-quantiser-gaussian", [&] {
    const int mm = 2, n = 1;
    const double hb = cfg.hbar;
    auto qid = SqMat<Cplx>::identity(mm);
    auto omp = sw_quantizer_moyal<Cplx>(mm, 3, 0, hb);
    auto ompp = sw_quantizer_moyal<Cplx>(mm, 3, 1, hb);
    auto om = sw_quantizer_moyal<Cplx>(mm, 3, 2, hb);
    auto tr = supertrace_cl(cg_mul(cg_mul(omp, ompp, qid, Cplx(hb)), om, qid, Cplx(hb)), Cplx(hb));
    const int gens = 3 * mm;
    auto pair_form = [&](int a_off, int b_off) {
      MultivectorC v(gens);
      for (int mu = 0; mu < mm; ++mu)
        v += wedge(MultivectorC::generator(gens, a_off + mu),
                   MultivectorC::generator(gens, b_off + mu));
      return v;
    };
    MultivectorC expo =
        (pair_form(2 * mm, 0) + pair_form(0, mm) + pair_form(mm, 2 * mm)) * Cplx(4.0 / hb);
    MultivectorC expect = exp_even(expo) * (std::pow(Cplx(0, hb), 3 * n) / std::pow(2.0, 5 * n));
    return std::pair{max_abs_diff(tr, expect), 1e-12};
  });

  h.check("kernel-integral-star", [&] {
    Rng rng(cfg.seed + 39);
    double worst = 0;
    for (int mm : {2, 4}) {
      auto qid = SqMat<Cplx>::identity(mm);
      for (double hb : {0.3, 1.0, 2.7}) {
        for (int t = 0; t < 5; ++t) {
          auto K = rand_antisym_c(rng, mm);
          auto f = rand_mvc(rng, mm), g = rand_mvc(rng, mm);
          auto kern = star_kernel_integral(f, g, K, hb);
          auto oper = star_k(f, g, qid, K, Cplx(hb));
          worst = std::max(worst, max_abs_diff(kern, oper) / std::max(1.0, max_abs(oper)));
        }
      }
    }
    return std::pair{worst, 1e-10};
  });
}

// ----------------------------------------------------------- polarization --

void suite_polarization(Harness h) {
  h.suite = "polarization";
  const SuiteConfig& cfg = h.cfg;
  const int m = even_m(cfg);

  h.check("projection-invariants", [&] {
    Rng rng(cfg.seed + 50);
    double worst = 0;
    auto metric = random_metric(rng, m);
    for (int t = 0; t < 5; ++t) {
      for (auto pol : {random_polarization_j(rng, metric), random_polarization_pair(rng, metric)}) {
        const MatrixXcd& p = pol.p();
        const MatrixXcd one = MatrixXcd::Identity(m, m);
        worst = std::max(worst, (p * p - p).norm());
        worst = std::max(worst, (p.transpose() * metric.q().cast<Cplx>() * p).norm());
        worst = std::max(worst,
                         ((one - p).transpose() * metric.q().cast<Cplx>() * (one - p)).norm());
        worst = std::max(worst, (pol.k_p() + pol.k_p().transpose()).norm());
        const int n = m / 2;
        MatrixXcd sel = MatrixXcd::Zero(m, m);
        sel.topLeftCorner(n, n) = MatrixXcd::Identity(n, n);
        worst = std::max(worst,
                         (pol.frame_basis() * sel * pol.frame_basis_inv() - p).norm());
      }
    }
    return std::pair{worst, 1e-9};
  });

  h.check("adapted-block-structure", [&] {
    Rng rng(cfg.seed + 51);
    auto metric = random_metric(rng, m);
    double worst = 0;
    const int n = m / 2;
    for (int t = 0; t < 5; ++t) {
      auto pol = random_polarization_j(rng, metric);
      const MatrixXcd q_ad =
          pol.frame_basis().transpose() * metric.q().cast<Cplx>() * pol.frame_basis();
      const MatrixXcd qs_ad = q_ad.inverse();
      const MatrixXcd lam_ad =
          pol.frame_basis_inv() * pol.lambda_p() * pol.frame_basis_inv().transpose();
      worst = std::max(worst, q_ad.topLeftCorner(n, n).norm());
      worst = std::max(worst,
                       (q_ad.bottomLeftCorner(n, n) - 0.5 * MatrixXcd::Identity(n, n)).norm());
      worst = std::max(worst,
                       (lam_ad.bottomLeftCorner(n, n) - 2.0 * qs_ad.bottomLeftCorner(n, n)).norm());
      worst = std::max(worst, lam_ad.topLeftCorner(n, n).norm());
      worst = std::max(worst, lam_ad.topRightCorner(n, n).norm());
      worst = std::max(worst, lam_ad.bottomRightCorner(n, n).norm());
    }
    return std::pair{worst, 1e-8};
  });

  h.check("retraction-identities", [&] {
    Rng rng(cfg.seed + 52);
    auto metric = random_metric(rng, m);
    double worst = 0;
    for (int t = 0; t < 5; ++t) {
      auto J = random_complex_structure(rng, metric);
      worst = std::max(
          worst, (retraction(Polarization::from_complex_structure(J)).j() - J.j()).norm());
      OrthogonalFlow flow(random_so_generator(rng, metric, 0.3), metric);
      MatrixXd g = flow.at(1.0), g2 = flow.at(0.5);
      ComplexStructure J1(g * J.j() * g.inverse(), metric);
      ComplexStructure J2(g2 * J.j() * g2.inverse(), metric);
      auto pa = Polarization::from_transverse_pair(J1, J);
      auto pb = Polarization::from_transverse_pair(J2, J);
      worst = std::max(worst, (retraction(pa).j() - retraction(pb).j()).norm());
      worst = std::max(worst, (retraction(pa).j() - J.j()).norm());
      worst = std::max(worst, (retraction_prime(pa).j() - J1.j()).norm());
    }
    return std::pair{worst, 1e-8};
  });

  h.check("transversality-determinant", [&] {
    Rng rng(cfg.seed + 53);
    auto metric = Metric::euclidean(4);
    auto J = random_complex_structure(rng, metric);
    bool ok = transversal(J, J);
    ok = ok && !transversal(J, ComplexStructure(-J.j(), metric));
    OrthogonalFlow flow(random_so_generator(rng, metric, 0.2), metric);
    MatrixXd g = flow.at(1.0);
    ok = ok && transversal(J, ComplexStructure(g * J.j() * g.inverse(), metric));
    return std::pair{exact(ok), 0.0};
  });

  h.check("tangent-validation", [&] {
    Rng rng(cfg.seed + 54);
    auto metric = random_metric(rng, m);
    double worst = 0;
    const int n = m / 2;
    for (int t = 0; t < 5; ++t) {
      auto J = random_complex_structure(rng, metric);
      auto pol = Polarization::from_complex_structure(J);
      MatrixXd X = random_so_generator(rng, metric, 1.0);
      MatrixXcd dp = X.cast<Cplx>() * pol.p() - pol.p() * X.cast<Cplx>();
      auto tan = validate_tangent(pol, dp, 1e-8);
      OrthogonalFlow flow(X, metric);
      const double eps = 1e-6;
      MatrixXd ge = flow.at(eps);
      auto pe = Polarization::from_complex_structure(
          ComplexStructure(ge * J.j() * ge.inverse(), metric));
      worst = std::max(worst, ((pe.p() - pol.p()) / eps - dp).norm() / std::max(1.0, dp.norm()));
      const MatrixXcd dk_ad =
          pol.frame_basis_inv() * tan.dk * pol.frame_basis_inv().transpose();
      worst = std::max(worst, (dk_ad.topLeftCorner(n, n) + 2.0 * tan.comp_ij).norm());
      worst = std::max(worst, (dk_ad.bottomRightCorner(n, n) + 2.0 * tan.comp_ipjp).norm());
    }
    return std::pair{worst, 1e-4};
  });

  h.check("tangent-dimensions", [&] {
    Rng rng(cfg.seed + 55);
    const int mm = 4, n = 2;
    auto metric = random_metric(rng, mm);
    auto pol = random_polarization_j(rng, metric);
    const MatrixXcd& p = pol.p();
    const MatrixXcd one = MatrixXcd::Identity(mm, mm);
    const MatrixXcd qs = metric.qsharp().cast<Cplx>();
    auto constraint = [&](auto&& fn) {
      MatrixXcd rows(mm * mm, mm * mm);
      for (int col = 0; col < mm * mm; ++col) {
        MatrixXcd basis = MatrixXcd::Zero(mm, mm);
        basis(col % mm, col / mm) = 1.0;
        MatrixXcd img = fn(basis);
        for (int i = 0; i < mm; ++i)
          for (int j = 0; j < mm; ++j) rows(i + mm * j, col) = img(i, j);
      }
      return rows;
    };
    MatrixXcd c1 = constraint([&](const MatrixXcd& d) { return p * d - d * (one - p); });
    MatrixXcd c2 = constraint(
        [&](const MatrixXcd& d) { return d * qs * p.transpose() + p * qs * d.transpose(); });
    MatrixXcd c3 = constraint([&](const MatrixXcd& d) {
      return d * qs * (one - p).transpose() + (one - p) * qs * d.transpose();
    });
    MatrixXcd stacked(3 * mm * mm, mm * mm);
    stacked << c1, c2, c3;
    Eigen::ColPivHouseholderQR<MatrixXcd> qr(stacked);
    qr.setThreshold(1e-8);
    const int nullity = mm * mm - static_cast<int>(qr.rank());

    MatrixXd real_stacked(6 * mm * mm + mm * mm, 2 * mm * mm);
    real_stacked.setZero();
    for (int blk = 0; blk < 3; ++blk) {
      const MatrixXcd& c = blk == 0 ? c1 : (blk == 1 ? c2 : c3);
      real_stacked.block(2 * blk * mm * mm, 0, mm * mm, mm * mm) = c.real();
      real_stacked.block(2 * blk * mm * mm, mm * mm, mm * mm, mm * mm) = -c.imag();
      real_stacked.block((2 * blk + 1) * mm * mm, 0, mm * mm, mm * mm) = c.imag();
      real_stacked.block((2 * blk + 1) * mm * mm, mm * mm, mm * mm, mm * mm) = c.real();
    }
    real_stacked.block(6 * mm * mm, 0, mm * mm, mm * mm) =
        MatrixXd::Identity(mm * mm, mm * mm);
    Eigen::ColPivHouseholderQR<MatrixXd> qrr(real_stacked);
    qrr.setThreshold(1e-8);
    const int real_nullity = 2 * mm * mm - static_cast<int>(qrr.rank());
    const bool ok = nullity == n * (n - 1) && real_nullity == n * (n - 1);
    return std::pair{exact(ok), 0.0};
  });

  h.check("kahler-form", [&] {
    Rng rng(cfg.seed + 56);
    auto metric = Metric::euclidean(4);
    auto J = standard_complex_structure(metric);
    auto tangent_of = [&](const MatrixXd& X) {
      return MatrixXcd((X * J.j() - J.j() * X).cast<Cplx>());
    };
    MatrixXcd d1 = tangent_of(random_so_generator(rng, metric));
    MatrixXcd d2 = tangent_of(random_so_generator(rng, metric));
    double worst = std::abs(kahler_form(J, d1, d1));
    worst = std::max(worst, std::abs(kahler_form(J, d1, d2) + kahler_form(J, d2, d1)));
    worst = std::max(worst, std::abs(std::imag(kahler_form(J, d1, d2))));
    const MatrixXcd p = 0.5 * (MatrixXcd::Identity(4, 4) - Cplx(0, 1) * J.j().cast<Cplx>());
    MatrixXcd dp1 = Cplx(0, -0.5) * d1, dp2 = Cplx(0, -0.5) * d2;
    Cplx via_p = Cplx(0, 1) * ((p * dp1 * dp2 * p).trace() - (p * dp2 * dp1 * p).trace());
    worst = std::max(worst, std::abs(via_p - kahler_form(J, d1, d2)));

    MatrixXd li(4, 4), lj(4, 4), lk(4, 4);
    li << 0, -1, 0, 0, 1, 0, 0, 0, 0, 0, 0, -1, 0, 0, 1, 0;
    lj << 0, 0, -1, 0, 0, 0, 0, 1, 1, 0, 0, 0, 0, -1, 0, 0;
    lk << 0, 0, 0, -1, 0, 0, -1, 0, 0, 1, 0, 0, 1, 0, 0, 0;
    ComplexStructure Jk(lk, metric);
    MatrixXcd dz = li.cast<Cplx>() - Cplx(0, 1) * lj.cast<Cplx>();
    MatrixXcd dzb = li.cast<Cplx>() + Cplx(0, 1) * lj.cast<Cplx>();
    worst = std::max(worst, std::abs(kahler_form(Jk, dz, dzb) - Cplx(0, 2)));
    return std::pair{worst, 1e-10};
  });

  h.check("geodesic-paths", [&] {
    Rng rng(cfg.seed + 57);
    auto metric = random_metric(rng, m);
    auto J = random_complex_structure(rng, metric);
    MatrixXd X = random_so_generator(rng, metric, 0.7);
    auto path = geodesic_path(J, X, 8);
    OrthogonalFlow flow(X, metric);
    MatrixXd g = flow.at(1.0);
    auto pend = Polarization::from_complex_structure(
        ComplexStructure(g * J.j() * g.inverse(), metric));
    return std::pair{(path.back().p() - pend.p()).norm(), 1e-9};
  });
}

// ------------------------------------------------------------------ states --

void suite_states(Harness h) {
  h.suite = "states";
  const SuiteConfig& cfg = h.cfg;
  const int m = even_m(cfg);
  const double hb = cfg.hbar;

  h.check("covariant-curvature", [&] {
    Rng rng(cfg.seed + 70);
    auto metric = random_metric(rng, m);
    double worst = 0;
    for (int t = 0; t < 5; ++t) {
      Section psi(rand_mvc(rng, m), metric, hb);
      for (int mu = 0; mu < m; ++mu)
        for (int nu = 0; nu < m; ++nu) {
          auto anti = covariant_derivative(covariant_derivative(psi, mu), nu).v +
                      covariant_derivative(covariant_derivative(psi, nu), mu).v;
          worst = std::max(worst,
                           max_abs_diff(anti, psi.v * Cplx(-2.0 * metric.q()(mu, nu) / hb)) /
                               std::max(1.0, max_abs(psi.v)));
        }
    }
    return std::pair{worst, 1e-10};
  });

  h.check("gaussian-polarized", [&] {
    Rng rng(cfg.seed + 71);
    auto metric = random_metric(rng, m);
    double worst = 0;
    for (int t = 0; t < 4; ++t) {
      for (auto pol : {random_polarization_j(rng, metric), random_polarization_pair(rng, metric)}) {
        Section gauss(gaussian_factor(pol, hb), metric, hb);
        worst = std::max(worst, polarization_residual(gauss, pol));
        auto basis = polarized_basis(pol, hb);
        if (static_cast<int>(basis.size()) != (1 << (m / 2))) return std::pair{1.0, 0.0};
        for (const auto& st : basis)
          worst = std::max(worst, polarization_residual(st.state, pol));
      }
    }
    return std::pair{worst, 1e-9};
  });

  h.check("prequantum-dirac", [&] {
    Rng rng(cfg.seed + 72);
    auto metric = random_metric(rng, 4);
    auto qs = to_sqmat_real(metric.qsharp());
    double worst = 0;
    for (int t = 0; t < 20; ++t) {
      int pf = static_cast<int>(rng.below(5)), pg = static_cast<int>(rng.below(5));
      MultivectorC f(4), g(4);
      for (std::uint32_t k = 0; k < 16u; ++k) {
        if (degree(k) == pf) f[k] = rng.cnormal();
        if (degree(k) == pg) g[k] = rng.cnormal();
      }
      Section psi(rand_mvc(rng, 4), metric, hb);
      auto fg = prequantum_op(f, prequantum_op(g, psi));
      auto gf = prequantum_op(g, prequantum_op(f, psi));
      auto comm = ((pf & 1) && (pg & 1)) ? fg.v + gf.v : fg.v - gf.v;
      auto want = prequantum_op(poisson_bracket(f, g, qs), psi).v * Cplx(hb);
      worst = std::max(worst, max_abs_diff(comm, want) / std::max(1.0, max_abs(want)));
    }
    return std::pair{worst, 1e-10};
  });

  h.check("worked-example", [&] {
    double worst = 0;
    for (double hbx : {0.5, 1.0, 2.0}) {
      auto metric = Metric::euclidean(4);
      auto pol = Polarization::from_complex_structure(standard_complex_structure(metric));
      MultivectorC t1(4), t2(4), t1b(4), t2b(4);
      t1[0b0001] = 1.0;
      t1[0b0010] = Cplx(0, 1);
      t1b[0b0001] = 1.0;
      t1b[0b0010] = Cplx(0, -1);
      t2[0b0100] = 1.0;
      t2[0b1000] = Cplx(0, 1);
      t2b[0b0100] = 1.0;
      t2b[0b1000] = Cplx(0, -1);
      auto gauss = exp_even((wedge(t1b, t1) + wedge(t2b, t2)) * Cplx(1.0 / (2.0 * hbx)));
      Section psi(wedge(wedge(t1, t2), gauss), metric, hbx);
      auto f = wedge(t2b, t1b);
      auto out = star_on_state(f, psi, pol);
      auto expect = gauss * Cplx(hbx * hbx);
      worst = std::max(worst, max_abs_diff(out.v, expect) / std::max(1.0, max_abs(expect)));
      if (!is_polarized(out, pol, 1e-9)) return std::pair{1.0, 1e-12};
      auto acted = prequantum_op(f, psi);
      auto disp = wedge(-wedge(wedge(t1b, t1), wedge(t2b, t2)) +
                            (wedge(t1b, t1) + wedge(t2b, t2)) * Cplx(hbx),
                        gauss);
      worst = std::max(worst, max_abs_diff(acted.v, disp) / std::max(1.0, max_abs(disp)));
      if (is_polarized(acted, pol, 1e-6)) return std::pair{1.0, 1e-12};
    }
    return std::pair{worst, 1e-12};
  });

  h.check("decompose-splitting", [&] {
    Rng rng(cfg.seed + 73);
    auto metric = random_metric(rng, m);
    auto pol = random_polarization_j(rng, metric);
    double worst = 0;
    for (int t = 0; t < 4; ++t) {
      Section any(rand_mvc(rng, m), metric, hb);
      auto d = decompose(any, pol);
      worst = std::max(worst, d.residual);
      worst = std::max(worst, max_abs_diff(d.polarized.v + d.complement.v, any.v));
      worst = std::max(worst, polarization_residual(d.polarized, pol));
      worst = std::max(
          worst, std::abs(hermitian_pairing(d.polarized, d.complement, pol)) /
                     std::max(1.0, norm2(any.v)));
    }
    return std::pair{worst, 1e-7};
  });

  h.check("pairing-gram", [&] {
    Rng rng(cfg.seed + 74);
    auto metric = random_metric(rng, m);
    auto pol = random_polarization_j(rng, metric);
    auto basis = polarized_basis(pol, hb);
    double worst = 0;
    for (std::size_t a = 0; a < basis.size(); ++a)
      for (std::size_t b = 0; b < basis.size(); ++b) {
        Cplx g = hermitian_pairing(basis[a].state, basis[b].state, pol);
        if (a == b)
          worst = std::max(worst,
                           std::abs(g - std::pow(hb, degree(static_cast<std::uint32_t>(a)))));
        else
          worst = std::max(worst, std::abs(g));
      }
    return std::pair{worst, 1e-9};
  });

  h.check("star-state-preserves-polarization", [&] {
    Rng rng(cfg.seed + 75);
    auto metric = random_metric(rng, m);
    double worst = 0;
    for (auto pol : {random_polarization_j(rng, metric), random_polarization_pair(rng, metric)}) {
      auto basis = polarized_basis(pol, hb);
      for (int t = 0; t < 12; ++t) {
        auto f = rand_mvc(rng, m);
        const auto& psi = basis[rng.below(basis.size())].state;
        worst = std::max(worst, polarization_residual(star_on_state(f, psi, pol), pol));
      }
    }
    return std::pair{worst, 1e-9};
  });

  h.check("star-state-prequantum-cut", [&] {
    Rng rng(cfg.seed + 76);
    auto metric = random_metric(rng, m);
    auto pol = random_polarization_j(rng, metric);
    auto basis = polarized_basis(pol, hb);
    const int n = m / 2;
    double worst = 0;
    for (int t = 0; t < 6; ++t) {
      MultivectorC f(m);
      f[0] = rng.cnormal();
      for (int j = 0; j < n; ++j) {
        MultivectorC coord(m), img(m);
        for (int mu = 0; mu < m; ++mu) {
          coord[1u << mu] = pol.frame_basis_inv()(n + j, mu);
          img[1u << mu] = pol.frame_basis_inv()(j, mu);
        }
        f += coord * rng.cnormal() + img * rng.cnormal() + wedge(img, coord) * rng.cnormal();
      }
      const auto& psi = basis.back().state;
      auto star = star_on_state(f, psi, pol);
      auto preq = prequantum_op(f, psi);
      worst = std::max(worst, max_abs_diff(star.v, preq.v) / std::max(1.0, max_abs(preq.v)));
    }
    return std::pair{worst, 1e-10};
  });

  h.check("star-state-associativity", [&] {
    Rng rng(cfg.seed + 77);
    auto metric = random_metric(rng, m);
    auto qs = to_sqmat_real(metric.qsharp());
    auto pol = random_polarization_j(rng, metric);
    auto kp = to_sqmat(pol.k_p());
    double worst = 0;
    for (int t = 0; t < 6; ++t) {
      Section psi(rand_mvc(rng, m), metric, hb);
      auto f = rand_mvc(rng, m), g = rand_mvc(rng, m);
      auto lhs = star_on_state(f, star_on_state(g, psi, pol), pol);
      auto rhs = star_on_state(star_k(f, g, qs, kp, Cplx(hb)), psi, pol);
      worst = std::max(worst, max_abs_diff(lhs.v, rhs.v) / std::max(1.0, max_abs(rhs.v)));
    }
    return std::pair{worst, 1e-8};
  });
}

// --------------------------------------------------------------- transport --

void suite_transport(Harness h) {
  h.suite = "transport";
  const SuiteConfig& cfg = h.cfg;
  const double hb = cfg.hbar;

  h.check("constant-path-identity", [&] {
    Rng rng(cfg.seed + 90);
    auto metric = random_metric(rng, 4);
    auto J = random_complex_structure(rng, metric);
    auto pol = Polarization::from_complex_structure(J);
    auto basis = polarized_basis(pol, hb);
    auto path = geodesic_projection_path(J, MatrixXd::Zero(4, 4));
    auto res = transport_state(path, metric, basis[1].state, 20, false);
    return std::pair{max_abs_diff(res.state.v, basis[1].state.v), 1e-10};
  });

  h.check("first-order-connection", [&] {
    Rng rng(cfg.seed + 91);
    auto metric = random_metric(rng, 4);
    auto J = random_complex_structure(rng, metric);
    auto pol = Polarization::from_complex_structure(J);
    auto basis = polarized_basis(pol, hb);
    MultivectorC combo(4);
    for (auto& st : basis) combo += st.state.v * rng.cnormal();
    Section psi(combo, metric, hb);
    MatrixXd X = random_so_generator(rng, metric, 1.0);
    OrthogonalFlow flow(X, metric);
    MatrixXcd dp = X.cast<Cplx>() * pol.p() - pol.p() * X.cast<Cplx>();
    auto tan = validate_tangent(pol, dp, 1e-8);
    double prev = 0, worst_ratio = 0;
    for (int k = 0; k < 3; ++k) {
      const double eps = std::pow(10.0, -2 - k);
      MatrixXd g = flow.at(eps);
      Polarization shifted(Polarization::from_complex_structure(
                               ComplexStructure(g * J.j() * g.inverse(), metric))
                               .p(),
                           metric);
      Section moved(psi.v + connection_term(psi, pol, tan.comp_ij).v * Cplx(eps), metric, hb);
      const double res = polarization_residual(moved, shifted);
      if (k > 0) worst_ratio = std::max(worst_ratio, res / prev);
      prev = res;
    }
    return std::pair{worst_ratio, 0.02};  // quadratic decay per decade
  });

  h.check("transport-unitary-polarized", [&] {
    Rng rng(cfg.seed + 92);
    auto metric = random_metric(rng, 4);
    auto J = random_complex_structure(rng, metric);
    auto pol = Polarization::from_complex_structure(J);
    auto basis = polarized_basis(pol, hb);
    MultivectorC combo(4);
    for (auto& st : basis) combo += st.state.v * rng.cnormal();
    Section psi(combo, metric, hb);
    auto path = geodesic_projection_path(J, random_so_generator(rng, metric, 0.8));
    auto res = transport_state(path, metric, psi, 150, false);
    double worst = res.polarization_residual;
    Cplx n0 = hermitian_pairing(psi, psi, pol);
    Cplx n1 = hermitian_pairing(res.state, res.state, res.end);
    worst = std::max(worst, std::abs(n1 - n0) / std::abs(n0));
    return std::pair{worst, 1e-5};
  });

  h.check("parallelogram-curvature", [&] {
    Rng rng(cfg.seed + 93);
    auto metric = Metric::euclidean(4);
    auto J = random_complex_structure(rng, metric);
    auto pol = Polarization::from_complex_structure(J);
    auto basis = polarized_basis(pol, hb);
    MatrixXd x1 = random_so_generator(rng, metric, 1.0);
    MatrixXd x2 = random_so_generator(rng, metric, 1.0);
    OrthogonalFlow f1(x1, metric), f2(x2, metric);
    auto loop_phase = [&](double d) {
      ProjectionPath path = [&, d](double t) {
        double s = 0, u = 0;
        if (t < 0.25) {
          s = 4 * t * d;
        } else if (t < 0.5) {
          s = d;
          u = (4 * t - 1) * d;
        } else if (t < 0.75) {
          s = (3 - 4 * t) * d;
          u = d;
        } else {
          u = (4 - 4 * t) * d;
        }
        MatrixXd g = f1.at(s) * f2.at(u);
        MatrixXd j = g * J.j() * g.inverse();
        return MatrixXcd(0.5 * (MatrixXcd::Identity(4, 4) - Cplx(0, 1) * j.cast<Cplx>()));
      };
      auto res = transport_state(path, metric, basis[1].state, 240, false);
      Cplx num = hermitian_pairing(basis[1].state, res.state, pol);
      Cplx den = hermitian_pairing(basis[1].state, basis[1].state, pol);
      return num / den;
    };
    MatrixXcd p = pol.p();
    MatrixXcd dp1 = x1.cast<Cplx>() * p - p * x1.cast<Cplx>();
    MatrixXcd dp2 = x2.cast<Cplx>() * p - p * x2.cast<Cplx>();
    Cplx fh = -0.5 * ((p * dp1 * dp2 * p).trace() - (p * dp2 * dp1 * p).trace());
    double e1 = std::abs(loop_phase(0.1) - std::exp(-fh * 0.01));
    double e2 = std::abs(loop_phase(0.05) - std::exp(-fh * 0.0025));
    // cubic decay: halving d should shrink the defect at least eightfold
    return std::pair{e2 / e1, 0.25};
  });

  h.check("intertwiner-compatibility", [&] {
    Rng rng(cfg.seed + 94);
    auto metric = Metric::euclidean(4);
    auto J = random_complex_structure(rng, metric);
    auto pol = Polarization::from_complex_structure(J);
    auto basis = polarized_basis(pol, hb);
    MultivectorC combo(4);
    for (auto& st : basis) combo += st.state.v * rng.cnormal();
    Section psi(combo, metric, hb);
    auto f = rand_mvc(rng, 4);
    auto path = geodesic_projection_path(J, random_so_generator(rng, metric, 0.6));
    auto res = transport_state(path, metric, star_on_state(f, psi, pol), 240, false);
    auto res_psi = transport_state(path, metric, psi, 240, false);
    auto moved_f =
        intertwine(f, to_sqmat(pol.k_p()), to_sqmat(res_psi.end.k_p()), Cplx(hb));
    auto rhs = star_on_state(moved_f, res_psi.state, res_psi.end);
    return std::pair{max_abs_diff(res.state.v, rhs.v) / std::max(1.0, max_abs(rhs.v)), 1e-5};
  });

  h.check("infinitesimal-compatibility", [&] {
    Rng rng(cfg.seed + 95);
    auto metric = Metric::euclidean(4);
    auto J = random_complex_structure(rng, metric);
    auto pol = Polarization::from_complex_structure(J);
    auto qs = to_sqmat_real(metric.qsharp());
    auto basis = polarized_basis(pol, hb);
    MultivectorC combo(4);
    for (auto& st : basis) combo += st.state.v * rng.cnormal();
    Section psi(combo, metric, hb);
    auto f = rand_mvc(rng, 4);
    MatrixXd X = random_so_generator(rng, metric, 1.0);
    OrthogonalFlow flow(X, metric);
    MatrixXcd dp = X.cast<Cplx>() * pol.p() - pol.p() * X.cast<Cplx>();
    auto tan = validate_tangent(pol, dp, 1e-8);

    auto residual_at = [&](double eps) {
      MatrixXd g = flow.at(eps);
      Polarization pe(Polarization::from_complex_structure(
                          ComplexStructure(g * J.j() * g.inverse(), metric))
                          .p(),
                      metric);
      auto lhs = star_on_state(f, psi, pe).v - star_on_state(f, psi, pol).v;
      // d(f *_P psi) - (df) *_P psi - f *_P (dpsi)
      auto dstar = connection_term(star_on_state(f, psi, pol), pol, tan.comp_ij).v;
      SqMat<Cplx> dk = to_sqmat(tan.dk);
      auto df = quadratic_derivative(f, dk) * Cplx(-hb / 8.0);
      auto dpsi = connection_term(psi, pol, tan.comp_ij).v;
      auto rhs = dstar - star_on_state(df, psi, pol).v -
                 star_on_state(f, Section(dpsi, metric, hb), pol).v;
      return max_abs_diff(lhs, rhs * Cplx(eps));
    };
    const double r1 = residual_at(1e-2), r2 = residual_at(1e-3), r3 = residual_at(1e-4);
    const double slope1 = std::log10(r1 / r2), slope2 = std::log10(r2 / r3);
    // Residual must vanish at second order: slope >= 1.9 per decade.
    const double worst_slope = std::min(slope1, slope2);
    return std::pair{1.9 - worst_slope, 0.0};
  });
}

// ------------------------------------------------------------- metaplectic --

void suite_metaplectic(Harness h) {
  h.suite = "metaplectic";
  const SuiteConfig& cfg = h.cfg;
  const double hb = cfg.hbar;

  h.check("constant-path-phase", [&] {
    Rng rng(cfg.seed + 110);
    auto metric = random_metric(rng, 4);
    auto J = random_complex_structure(rng, metric);
    auto pol = Polarization::from_complex_structure(J);
    auto basis = polarized_basis(pol, hb);
    auto path = geodesic_projection_path(J, MatrixXd::Zero(4, 4));
    auto res = transport_state(path, metric, basis[2].state, 20, true);
    double worst = std::abs(res.metaplectic_phase - Cplx(1.0));
    worst = std::max(worst, max_abs_diff(res.state.v, basis[2].state.v));
    return std::pair{worst, 1e-9};
  });

  h.check("loop-flatness", [&] {
    Rng rng(cfg.seed + 111);
    auto metric = Metric::euclidean(4);
    auto J = random_complex_structure(rng, metric);
    auto pol = Polarization::from_complex_structure(J);
    auto basis = polarized_basis(pol, hb);
    Section psi = basis[2].state;
    MatrixXd x1 = random_so_generator(rng, metric, 0.5);
    MatrixXd x2 = random_so_generator(rng, metric, 0.5);
    OrthogonalFlow f1(x1, metric), f2(x2, metric);
    const MatrixXd g1 = f1.at(1.0), g2 = g1 * f2.at(1.0);
    MatrixXd x3 = connecting_generator(ComplexStructure(g2 * J.j() * g2.inverse(), metric), J);
    OrthogonalFlow f3(x3, metric);
    ProjectionPath tri = [&](double t) {
      MatrixXd g;
      if (t < 1.0 / 3)
        g = f1.at(3 * t);
      else if (t < 2.0 / 3)
        g = g1 * f2.at(3 * t - 1);
      else
        g = f3.at(3 * t - 2) * g2;
      MatrixXd j = g * J.j() * g.inverse();
      return MatrixXcd(0.5 * (MatrixXcd::Identity(4, 4) - Cplx(0, 1) * j.cast<Cplx>()));
    };
    const int steps = static_cast<int>(420 * std::max(1.0, 1.0 / hb));
    auto plain = transport_state(tri, metric, psi, steps, false);
    auto fixed = transport_state(tri, metric, psi, steps, true);
    const double scale = std::max(1.0, max_abs(psi.v));
    const double err_fixed = max_abs_diff(fixed.state.v, psi.v) / scale;
    const double err_plain = max_abs_diff(plain.state.v, psi.v) / scale;
    if (err_plain < 10 * std::max(err_fixed, 1e-7)) return std::pair{1.0, 1e-6};
    return std::pair{err_fixed, 1e-6};
  });

  h.check("path-independence", [&] {
    Rng rng(cfg.seed + 112);
    auto metric = Metric::euclidean(4);
    auto J = random_complex_structure(rng, metric);
    auto pol = Polarization::from_complex_structure(J);
    auto basis = polarized_basis(pol, hb);
    MultivectorC combo(4);
    for (auto& st : basis) combo += st.state.v * rng.cnormal();
    Section psi(combo, metric, hb);
    MatrixXd x = random_so_generator(rng, metric, 0.5);
    OrthogonalFlow fx(x, metric);
    const MatrixXd gend = fx.at(1.0);
    ComplexStructure J1(gend * J.j() * gend.inverse(), metric);
    auto pa = geodesic_projection_path(J, x);
    MatrixXd y = random_so_generator(rng, metric, 0.4);
    OrthogonalFlow fy(y, metric);
    const MatrixXd gmid = fy.at(1.0);
    ComplexStructure Jmid(gmid * J.j() * gmid.inverse(), metric);
    MatrixXd x2 = connecting_generator(Jmid, J1);
    OrthogonalFlow fseg(x2, metric);
    ProjectionPath pb = [&](double t) {
      MatrixXd g = (t < 0.5) ? fy.at(2 * t) : fseg.at(2 * t - 1) * gmid;
      MatrixXd j = g * J.j() * g.inverse();
      return MatrixXcd(0.5 * (MatrixXcd::Identity(4, 4) - Cplx(0, 1) * j.cast<Cplx>()));
    };
    auto ra = transport_state(pa, metric, psi, 400, true);
    auto rb = transport_state(pb, metric, psi, 400, true);
    const double scale = std::max(1.0, max_abs(ra.state.v));
    double worst = max_abs_diff(ra.state.v, rb.state.v) / scale;
    if (std::abs(std::abs(ra.metaplectic_phase) - 1.0) > 1e-9) return std::pair{1.0, 2e-6};
    return std::pair{worst, 2e-6};
  });
}

// ------------------------------------------------------------ equivariance --

void suite_equivariance(Harness h) {
  h.suite = "equivariance";
  const SuiteConfig& cfg = h.cfg;
  const int m = even_m(cfg, 4, 4);
  const double hb = cfg.hbar;

  h.check("function-equivariance", [&] {
    Rng rng(cfg.seed + 130);
    auto metric = random_metric(rng, m);
    auto qs = to_sqmat_real(metric.qsharp());
    double worst = 0;
    for (int t = 0; t < 10; ++t) {
      auto g = random_rotation(rng, metric);
      auto f = rand_mvc(rng, m), w = rand_mvc(rng, m);
      worst = std::max(
          worst, max_abs_diff(rotate_function(poisson_bracket(f, w, qs), g),
                              poisson_bracket(rotate_function(f, g), rotate_function(w, g), qs)));
      MatrixXcd kk(m, m);
      auto sk = rand_antisym_c(rng, m);
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) kk(i, j) = sk(i, j);
      Bivector K(kk);
      auto lhs = rotate_function(star_k(f, w, qs, K.k_c(), Cplx(hb)), g);
      auto rhs = star_k(rotate_function(f, g), rotate_function(w, g), qs,
                        K.rotated(g.g()).k_c(), Cplx(hb));
      worst = std::max(worst, max_abs_diff(lhs, rhs));
      auto l2 = rotate_function(intertwine(f, SqMat<Cplx>(m), K.k_c(), Cplx(hb)), g);
      auto r2 = intertwine(rotate_function(f, g), SqMat<Cplx>(m), K.rotated(g.g()).k_c(),
                           Cplx(hb));
      worst = std::max(worst, max_abs_diff(l2, r2));
    }
    return std::pair{worst, 1e-9};
  });

  h.check("clifford-equivariance", [&] {
    Rng rng(cfg.seed + 131);
    auto metric = Metric::euclidean(m);
    auto qs = to_sqmat_real(metric.qsharp());
    double worst = 0;
    for (int t = 0; t < 8; ++t) {
      auto g = random_rotation(rng, metric);
      SqMat<Cplx> ginv = to_sqmat_real(g.ginv());
      auto x = CliffordC(rand_mvc(rng, m)), y = CliffordC(rand_mvc(rng, m));
      auto lhs = rotate_clifford(clifford_mul(x, y, qs, Cplx(hb)), ginv, qs, Cplx(hb));
      auto rhs = clifford_mul(rotate_clifford(x, ginv, qs, Cplx(hb)),
                              rotate_clifford(y, ginv, qs, Cplx(hb)), qs, Cplx(hb));
      worst = std::max(worst, max_abs_diff(lhs.c, rhs.c));
      MatrixXcd kk(m, m);
      auto sk = rand_antisym_c(rng, m);
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) kk(i, j) = sk(i, j);
      Bivector K(kk);
      auto f = rand_mvc(rng, m);
      auto l2 = rotate_clifford(quantize(f, K.k_c(), qs, Cplx(hb)), ginv, qs, Cplx(hb));
      auto r2 = quantize(rotate_function(f, g), K.rotated(g.g()).k_c(), qs, Cplx(hb));
      worst = std::max(worst, max_abs_diff(l2.c, r2.c));
    }
    return std::pair{worst, 1e-9};
  });

  h.check("quantiser-equivariance", [&] {
    Rng rng(cfg.seed + 132);
    const int mm = 2;
    auto metric = Metric::euclidean(mm);
    auto qs = to_sqmat_real(metric.qsharp());
    auto g = random_rotation(rng, metric);
    SqMat<Cplx> ginv = to_sqmat_real(g.ginv());
    MatrixXcd kk(mm, mm);
    auto sk = rand_antisym_c(rng, mm);
    for (int i = 0; i < mm; ++i)
      for (int j = 0; j < mm; ++j) kk(i, j) = sk(i, j);
    Bivector K(kk);
    auto om = sw_quantizer<Cplx>(mm, to_sqmat(K.k()), Cplx(hb));
    ClGrass<Cplx> rotated(mm, MultivectorC(2 * mm));
    std::vector<MultivectorC> images;
    for (int mu = 0; mu < mm; ++mu) {
      MultivectorC v(mm);
      for (int nu = 0; nu < mm; ++nu) v[1u << nu] = Cplx(g.ginv()(mu, nu), 0.0);
      images.push_back(std::move(v));
    }
    for (std::uint32_t gm = 0; gm < (1u << mm); ++gm) {
      MultivectorC slice(mm);
      for (std::uint32_t cm = 0; cm < (1u << mm); ++cm) slice[cm] = om.v[cm | (gm << mm)];
      if (slice.is_zero()) continue;
      auto cl_rot = rotate_clifford(CliffordC(slice), ginv, qs, Cplx(hb));
      MultivectorC gr(mm);
      gr[gm] = 1.0;
      auto gr_rot = substitute<Cplx>(gr, images, mm);
      for (std::uint32_t cm = 0; cm < (1u << mm); ++cm)
        for (std::uint32_t gm2 = 0; gm2 < (1u << mm); ++gm2)
          rotated.v[cm | (gm2 << mm)] += cl_rot.c[cm] * gr_rot[gm2];
    }
    auto om_rot = sw_quantizer<Cplx>(mm, to_sqmat(K.rotated(g.g()).k()), Cplx(hb));
    return std::pair{max_abs_diff(rotated.v, om_rot.v), 1e-9};
  });

  h.check("polarization-equivariance", [&] {
    Rng rng(cfg.seed + 133);
    auto metric = random_metric(rng, m);
    double worst = 0;
    for (int t = 0; t < 6; ++t) {
      auto pol = random_polarization_j(rng, metric);
      auto g = random_rotation(rng, metric);
      Polarization pg(g.g().cast<Cplx>() * pol.p() * g.ginv().cast<Cplx>(), metric);
      worst = std::max(
          worst,
          (pg.k_p() - g.g().cast<Cplx>() * pol.k_p() * g.g().transpose().cast<Cplx>()).norm());
      worst = std::max(worst, (retraction(pg).j() - g.g() * retraction(pol).j() * g.ginv()).norm());
    }
    return std::pair{worst, 1e-8};
  });

  h.check("section-equivariance", [&] {
    Rng rng(cfg.seed + 134);
    auto metric = random_metric(rng, m);
    double worst = 0;
    for (int t = 0; t < 6; ++t) {
      auto pol = random_polarization_j(rng, metric);
      auto g = random_rotation(rng, metric);
      auto f = rand_mvc(rng, m);
      Section psi(rand_mvc(rng, m), metric, hb);
      Polarization moved(g.g().cast<Cplx>() * pol.p() * g.ginv().cast<Cplx>(), metric);
      auto lhs = rotate_section(star_on_state(f, psi, pol), g);
      auto rhs = star_on_state(rotate_function(f, g), rotate_section(psi, g), moved);
      worst = std::max(worst, max_abs_diff(lhs.v, rhs.v) / std::max(1.0, max_abs(rhs.v)));
    }
    return std::pair{worst, 1e-9};
  });

  h.check("projective-representation", [&] {
    Rng rng(cfg.seed + 135);
    auto metric = Metric::euclidean(4);
    auto pol = Polarization::from_complex_structure(standard_complex_structure(metric));
    auto basis = polarized_basis(pol, hb);
    OrthogonalFlow fa(random_so_generator(rng, metric, 0.22), metric);
    OrthogonalFlow fb(random_so_generator(rng, metric, 0.22), metric);
    Rotation ga(fa.at(1.0), metric), gb(fb.at(1.0), metric);
    Rotation gab(ga.g() * gb.g(), metric);
    const int steps = 220;
    double worst = 0;
    for (bool meta : {false, true}) {
      std::vector<Cplx> ratios;
      for (int which : {1, 2}) {
        const auto& st = basis[which].state;
        auto lhs = group_action_rep(pol, gab, st, steps, meta);
        auto inner = group_action_rep(pol, gb, st, steps, meta);
        auto rhs = group_action_rep(pol, ga, inner.state, steps, meta);
        Cplx num = hermitian_pairing(rhs.state, lhs.state, pol);
        Cplx den = hermitian_pairing(rhs.state, rhs.state, pol);
        ratios.push_back(num / den);
        worst = std::max(worst, max_abs_diff(lhs.state.v, rhs.state.v * (num / den)) /
                                    std::max(1.0, max_abs(lhs.state.v)));
      }
      worst = std::max(worst, std::abs(ratios[0] - ratios[1]));
      worst = std::max(worst, std::abs(std::abs(ratios[0]) - 1.0));
      if (meta) worst = std::max(worst, std::abs(ratios[0] - Cplx(1.0)));
    }
    return std::pair{worst, 1e-5};
  });
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {
      "algebra",   "star",      "clifford",    "polarization",
      "states",    "transport", "metaplectic", "equivariance"};
  return names;
}

std::vector<CheckResult> run_suites(const SuiteConfig& cfg) {
  std::vector<CheckResult> out;
  Harness h{cfg, &out, ""};
  suite_algebra(h);
  suite_star(h);
  suite_clifford(h);
  suite_polarization(h);
  suite_states(h);
  suite_transport(h);
  suite_metaplectic(h);
  suite_equivariance(h);
  return out;
}

nlohmann::json report_json(const SuiteConfig& cfg, const std::vector<CheckResult>& results) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& r : results) {
    checks.push_back({{"suite", r.suite},
                      {"check", r.name},
                      {"status", r.pass ? "pass" : "fail"},
                      {"max_residual", r.residual},
                      {"threshold", r.threshold},
                      {"ms", r.ms}});
  }
  return nlohmann::json{{"schema", 1},
                        {"m", cfg.m},
                        {"hbar", cfg.hbar},
                        {"seed", cfg.seed},
                        {"tol", cfg.tol},
                        {"pass", all_passed(results)},
                        {"checks", std::move(checks)}};
}

bool all_passed(const std::vector<CheckResult>& results) {
  for (const auto& r : results)
    if (!r.pass) return false;
  return !results.empty();
}

}  // namespace fermion::verify
