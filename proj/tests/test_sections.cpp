#include "doctest.h"

#include <vector>

#include "fermion/sections.hpp"
#include "fermion/star.hpp"
#include "support.hpp"

using namespace fermion;
using namespace fermion::testing;

namespace {

// The explicit example frame at m = 4: theta-tilde^1 = th1 + i th2,
// theta-tilde^2 = th3 + i th4, with q euclidean and the standard J; the
// adapted metric blocks are q(e-bar_i, e_j) = delta/2.
struct ExampleSetup {
  Metric metric = Metric::euclidean(4);
  double hbar;
  MultivectorC t1{4}, t2{4}, t1b{4}, t2b{4};
  Polarization pol;

  explicit ExampleSetup(double hb)
      : hbar(hb), pol(Polarization::from_complex_structure(standard_complex_structure(metric))) {
    t1[0b0001] = 1.0;
    t1[0b0010] = Cplx(0, 1);
    t1b[0b0001] = 1.0;
    t1b[0b0010] = Cplx(0, -1);
    t2[0b0100] = 1.0;
    t2[0b1000] = Cplx(0, 1);
    t2b[0b0100] = 1.0;
    t2b[0b1000] = Cplx(0, -1);
  }

  MultivectorC gaussian() const {
    auto expo = (wedge(t1b, t1) + wedge(t2b, t2)) * Cplx(1.0 / (2.0 * hbar));
    return exp_even(expo);
  }
  Section state() const {
    return Section(wedge(wedge(t1, t2), gaussian()), metric, hbar);
  }
  MultivectorC observable() const { return wedge(t2b, t1b); }
};

}  // namespace

TEST_CASE("covariant derivative curvature and gauge") {
  Rng rng(90);
  auto metric = random_metric(rng, 4);
  const double hb = 0.8;
  for (int trial = 0; trial < 10; ++trial) {
    Section psi(random_mv(rng, 4), metric, hb);
    for (int mu = 0; mu < 4; ++mu)
      for (int nu = 0; nu < 4; ++nu) {
        auto anti = covariant_derivative(covariant_derivative(psi, mu), nu).v +
                    covariant_derivative(covariant_derivative(psi, nu), mu).v;
        auto want = psi.v * Cplx(-2.0 * metric.q()(mu, nu) / hb);
        CHECK(max_abs_diff(anti, want) < 1e-10);
      }
  }

  // nabla_mu 1 = -hbar^{-1} q_{mu nu} theta^nu.
  Section one(MultivectorC::scalar(4, 1.0), metric, hb);
  for (int mu = 0; mu < 4; ++mu) {
    MultivectorC want(4);
    for (int nu = 0; nu < 4; ++nu) want[1u << nu] = Cplx(-metric.q()(mu, nu) / hb, 0);
    CHECK(max_abs_diff(covariant_derivative(one, mu).v, want) < 1e-14);
  }

  // The Gaussian factor is annihilated by every kernel-frame direction.
  auto pol = random_polarization_j(rng, metric);
  Section gauss(gaussian_factor(pol, hb), metric, hb);
  CHECK(polarization_residual(gauss, pol) < 1e-10);
}

TEST_CASE("prequantum operator satisfies the dirac condition") {
  Rng rng(91);
  auto metric = random_metric(rng, 4);
  auto qs = to_sqmat_real(metric.qsharp());
  const double hb = 1.3;
  for (int trial = 0; trial < 25; ++trial) {
    int pf = static_cast<int>(rng.below(5)), pg = static_cast<int>(rng.below(5));
    auto f = random_homogeneous(rng, 4, pf);
    auto g = random_homogeneous(rng, 4, pg);
    Section psi(random_mv(rng, 4), metric, hb);

    Section unit = prequantum_op(MultivectorC::scalar(4, 1.0), psi);
    CHECK(max_abs_diff(unit.v, psi.v) < 1e-12);

    auto fg = prequantum_op(f, prequantum_op(g, psi));
    auto gf = prequantum_op(g, prequantum_op(f, psi));
    auto comm = ((pf & 1) && (pg & 1)) ? fg.v + gf.v : fg.v - gf.v;
    auto want = prequantum_op(poisson_bracket(f, g, qs), psi).v * Cplx(hb);
    CHECK(max_abs_diff(comm, want) < 1e-9 * std::max(1.0, max_abs(want)));
  }
}

TEST_CASE("worked example: prequantum action leaves the state space") {
  for (double hb : {0.5, 1.0, 2.0}) {
    ExampleSetup ex(hb);
    Section psi = ex.state();
    CHECK(is_polarized(psi, ex.pol, 1e-10));

    Section acted = prequantum_op(ex.observable(), psi);
    // (-tb1 t1 tb2 t2 + hbar tb1 t1 + hbar tb2 t2) ^ gaussian
    auto expect = wedge(-wedge(wedge(ex.t1b, ex.t1), wedge(ex.t2b, ex.t2)) +
                            (wedge(ex.t1b, ex.t1) + wedge(ex.t2b, ex.t2)) * Cplx(hb),
                        ex.gaussian());
    CHECK(max_abs_diff(acted.v, expect) < 1e-12 * std::max(1.0, max_abs(expect)));
    CHECK_FALSE(is_polarized(acted, ex.pol, 1e-6));
  }
}

TEST_CASE("worked example: the star product stays polarized") {
  for (double hb : {0.5, 1.0, 2.0}) {
    ExampleSetup ex(hb);
    Section psi = ex.state();
    Section out = star_on_state(ex.observable(), psi, ex.pol);
    auto expect = ex.gaussian() * Cplx(hb * hb);
    CHECK(max_abs_diff(out.v, expect) < 1e-12 * std::max(1.0, max_abs(expect)));
    CHECK(is_polarized(out, ex.pol, 1e-10));
  }
}

TEST_CASE("polarized basis spans the state space") {
  Rng rng(92);
  for (int m : {4, 6}) {
    auto metric = random_metric(rng, m);
    auto pol = random_polarization_j(rng, metric);
    const double hb = 0.9;
    auto basis = polarized_basis(pol, hb);
    const int n = m / 2;
    CHECK(static_cast<int>(basis.size()) == (1 << n));
    MatrixXcd mat(1u << m, basis.size());
    for (std::size_t c = 0; c < basis.size(); ++c) {
      CHECK(polarization_residual(basis[c].state, pol) < 1e-9);
      for (std::uint32_t r = 0; r < (1u << m); ++r) mat(r, c) = basis[c].state.v[r];
    }
    Eigen::ColPivHouseholderQR<MatrixXcd> qr(mat);
    qr.setThreshold(1e-10);
    CHECK(static_cast<int>(qr.rank()) == (1 << n));
  }
}

TEST_CASE("decomposition splits sections exactly") {
  Rng rng(93);
  auto metric = random_metric(rng, 4);
  auto pol = random_polarization_j(rng, metric);
  const double hb = 1.1;

  auto basis = polarized_basis(pol, hb);
  Section in_h = basis[2].state;
  auto d1 = decompose(in_h, pol);
  CHECK(norm2(d1.complement.v) < 1e-9 * norm2(in_h.v));

  // A pure nabla_i image decomposes with zero polarized part.
  Section chi(random_mv(rng, 4), metric, hb);
  Section der = covariant_derivative(chi, VectorXcd(pol.frame_image().col(1)));
  auto d2 = decompose(der, pol);
  CHECK(norm2(d2.polarized.v) < 1e-8 * std::max(1.0, norm2(der.v)));

  // General sections split with tiny defect and recombine.
  Section any(random_mv(rng, 4), metric, hb);
  auto d3 = decompose(any, pol);
  CHECK(d3.residual < 1e-10);
  CHECK(max_abs_diff(d3.polarized.v + d3.complement.v, any.v) < 1e-10);
  CHECK(is_polarized(d3.polarized, pol, 1e-7));

  // At a complex-structure polarization the split is orthogonal.
  CHECK(std::abs(hermitian_pairing(d3.polarized, d3.complement, pol)) <
        1e-9 * std::max(1.0, norm2(any.v)));
}

TEST_CASE("hermitian pairing: fock weights, adjointness, positivity") {
  Rng rng(94);
  auto metric = random_metric(rng, 4);
  auto pol = random_polarization_j(rng, metric);
  const double hb = 0.7;
  auto basis = polarized_basis(pol, hb);

  for (std::size_t a = 0; a < basis.size(); ++a)
    for (std::size_t b = 0; b < basis.size(); ++b) {
      Cplx g = hermitian_pairing(basis[a].state, basis[b].state, pol);
      if (a != b) {
        CHECK(std::abs(g) < 1e-10);
      } else {
        const int deg = degree(static_cast<std::uint32_t>(a));
        CHECK(std::abs(g - std::pow(hb, deg)) < 1e-10);
      }
    }

  // Polarized states are orthogonal to every image-direction derivative:
  // the orthogonality of the direct-sum decomposition in pairing form.
  for (int trial = 0; trial < 10; ++trial) {
    MultivectorC combo(4);
    for (auto& st : basis) combo += st.state.v * rng.cnormal();
    Section h(combo, metric, hb);
    Section chi(random_mv(rng, 4), metric, hb);
    for (int i = 0; i < 2; ++i) {
      Section der = covariant_derivative(chi, VectorXcd(pol.frame_image().col(i)));
      const double scale = std::max(1.0, norm2(h.v) * norm2(der.v));
      CHECK(std::abs(hermitian_pairing(h, der, pol)) < 1e-9 * scale);
      CHECK(std::abs(hermitian_pairing(der, h, pol)) < 1e-9 * scale);
    }
  }

  // Positive definite on the polarized subspace.
  for (int trial = 0; trial < 10; ++trial) {
    MultivectorC combo(4);
    for (auto& st : basis) combo += st.state.v * rng.cnormal();
    Section s(combo, metric, hb);
    Cplx norm = hermitian_pairing(s, s, pol);
    CHECK(std::abs(std::imag(norm)) < 1e-9 * std::abs(norm));
    CHECK(std::real(norm) > 0.0);
  }
}

TEST_CASE("star on a state: polarization preservation and first order") {
  Rng rng(95);
  for (int m : {4, 6}) {
    auto metric = random_metric(rng, m);
    const double hb = 1.2;
    for (auto pol : {random_polarization_j(rng, metric), random_polarization_pair(rng, metric)}) {
      auto basis = polarized_basis(pol, hb);
      for (int trial = 0; trial < 10; ++trial) {
        auto f = random_mv(rng, m);
        const auto& psi = basis[rng.below(basis.size())].state;
        Section out = star_on_state(f, psi, pol);
        CHECK(polarization_residual(out, pol) < 1e-9);
      }

      // f constant or linear in the kernel coordinates acts prequantumly.
      MultivectorC f(m);
      f[0] = rng.cnormal();
      for (int j = 0; j < pol.n(); ++j) {
        MultivectorC coord(m);
        for (int mu = 0; mu < m; ++mu) {
          coord[1u << mu] = pol.frame_basis_inv()(pol.n() + j, mu);
        }
        f += coord * rng.cnormal();
        // and arbitrary dependence on the image coordinates is fine too
        MultivectorC img(m);
        for (int mu = 0; mu < m; ++mu) img[1u << mu] = pol.frame_basis_inv()(j, mu);
        f += wedge(img, coord) * rng.cnormal();
        f += img * rng.cnormal();
      }
      const auto& psi = basis.back().state;
      auto star = star_on_state(f, psi, pol);
      auto preq = prequantum_op(f, psi);
      CHECK(max_abs_diff(star.v, preq.v) < 1e-10 * std::max(1.0, max_abs(preq.v)));
    }
  }
}

TEST_CASE("star on a state is associative against the function star") {
  Rng rng(96);
  for (int m : {4, 6}) {
    auto metric = random_metric(rng, m);
    auto qs = to_sqmat_real(metric.qsharp());
    auto pol = random_polarization_j(rng, metric);
    const double hb = 0.9;
    auto kp = to_sqmat(pol.k_p());
    Section psi(random_mv(rng, m), metric, hb);  // any section, not only states
    for (int trial = 0; trial < 8; ++trial) {
      auto f = random_mv(rng, m);
      auto g = random_mv(rng, m);
      auto lhs = star_on_state(f, star_on_state(g, psi, pol), pol);
      auto rhs = star_on_state(star_k(f, g, qs, kp, Cplx(hb)), psi, pol);
      CHECK(max_abs_diff(lhs.v, rhs.v) < 1e-8 * std::max(1.0, max_abs(rhs.v)));
    }
  }
}

TEST_CASE("deformation away from the prequantum action is second order") {
  Rng rng(97);
  auto metric = random_metric(rng, 4);
  auto pol = random_polarization_j(rng, metric);
  const double hb = 0.8;
  auto basis = polarized_basis(pol, hb);
  const auto& psi = basis[1].state;
  auto f = random_mv(rng, 4);
  // On a polarized state the prequantum operator equals the r <= 1 cut of
  // the state star series, so the discrepancy is exactly the tail with two
  // or more derivative pairs.
  auto star = star_on_state(f, psi, pol);
  auto preq = prequantum_op(f, psi);
  auto lam = pol.lambda_p();
  MultivectorC doubled = tensor_embed(f, psi.v);
  auto diff = star.v - preq.v;
  {
    // Observables without quadratic kernel-coordinate dependence act
    // prequantumly on the nose.
    MultivectorC img_only = MultivectorC::scalar(4, rng.cnormal());
    MultivectorC c0(4), c1(4);
    for (int mu = 0; mu < 4; ++mu) {
      c0[1u << mu] = pol.frame_basis_inv()(0, mu);
      c1[1u << mu] = pol.frame_basis_inv()(1, mu);
    }
    img_only += c0 * rng.cnormal() + c1 * rng.cnormal() + wedge(c0, c1) * rng.cnormal();
    auto s2 = star_on_state(img_only, psi, pol);
    auto p2 = prequantum_op(img_only, psi);
    CHECK(max_abs_diff(s2.v, p2.v) < 1e-10 * std::max(1.0, max_abs(p2.v)));
  }
  // The general difference is reproduced by the order >= 2 series tail,
  // computed independently here.
  {
    BiOperator<Cplx> op;
    const int m = 4;
    const Cplx scale(-hb / 4.0);
    MatrixXcd gauge = -(1.0 / hb) * lam * metric.q().cast<Cplx>();
    for (int mu = 0; mu < m; ++mu)
      for (int nu = 0; nu < m; ++nu) {
        if (lam(mu, nu) != Cplx(0)) op.dd.push_back({mu, m + nu, scale * lam(mu, nu)});
        if (gauge(mu, nu) != Cplx(0)) op.dw.push_back({mu, m + nu, scale * gauge(mu, nu)});
      }
    MultivectorC first(2 * m);
    apply_bioperator(op, doubled.data(), first.data(), 2 * m);
    MultivectorC term = first;
    MultivectorC tail(2 * m);
    for (int k = 2; k <= 2 * m; ++k) {
      MultivectorC next(2 * m);
      apply_bioperator(op, term.data(), next.data(), 2 * m);
      term = std::move(next) * Cplx(1.0 / k);
      if (term.is_zero()) break;
      tail += term;
    }
    CHECK(max_abs_diff(diff, diagonal_pullback(tail)) < 1e-9 * std::max(1.0, max_abs(diff)));
  }
}

TEST_CASE("rotations intertwine the state star product") {
  Rng rng(98);
  auto metric = random_metric(rng, 4);
  const double hb = 1.4;
  for (int trial = 0; trial < 6; ++trial) {
    auto pol = random_polarization_j(rng, metric);
    auto g = random_rotation(rng, metric);
    auto f = random_mv(rng, 4);
    Section psi(random_mv(rng, 4), metric, hb);
    Polarization moved(g.g().cast<Cplx>() * pol.p() * g.ginv().cast<Cplx>(), metric);

    auto lhs = rotate_section(star_on_state(f, psi, pol), g);
    auto rhs = star_on_state(rotate_function(f, g), rotate_section(psi, g), moved);
    CHECK(max_abs_diff(lhs.v, rhs.v) < 1e-9 * std::max(1.0, max_abs(rhs.v)));

    // Polarized states map to polarized states of the conjugated structure.
    auto basis = polarized_basis(pol, hb);
    CHECK(polarization_residual(rotate_section(basis[1].state, g), moved) < 1e-8);
  }
}
