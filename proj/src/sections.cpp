#include "fermion/sections.hpp"

#include <Eigen/QR>

#include "fermion/errors.hpp"
#include "fermion/star.hpp"

namespace fermion {

namespace {

// Adapted coordinate functions theta-tilde^a = sum_mu (B^{-1})(a, mu) th^mu.
MultivectorC frame_coordinate(const Polarization& pol, int a) {
  const int m = pol.dim();
  MultivectorC out(m);
  for (int mu = 0; mu < m; ++mu) {
    const Cplx c = pol.frame_basis_inv()(a, mu);
    if (c != Cplx(0)) out[1u << mu] += c;
  }
  return out;
}

// The doubled-algebra operator sum_{mn} C^{mn} d_m o nabla-tilde_n acting on
// f (x) psi, where nabla-tilde_n = d_{m+n} - hbar^{-1} q_{n l} w_{m+l} is the
// second-slot covariant derivative. Scale is folded into the terms.
BiOperator<Cplx> state_bioperator(const MatrixXcd& coeffs, const Metric& metric, double hbar,
                                  Cplx scale) {
  const int m = metric.dim();
  BiOperator<Cplx> op;
  const MatrixXcd gauge = -(1.0 / hbar) * coeffs * metric.q().cast<Cplx>();
  for (int mu = 0; mu < m; ++mu)
    for (int nu = 0; nu < m; ++nu) {
      if (coeffs(mu, nu) != Cplx(0)) op.dd.push_back({mu, m + nu, scale * coeffs(mu, nu)});
      if (gauge(mu, nu) != Cplx(0)) op.dw.push_back({mu, m + nu, scale * gauge(mu, nu)});
    }
  return op;
}

}  // namespace

Section::Section(MultivectorC value, Metric q, double hb)
    : v(std::move(value)), metric(std::move(q)), hbar(hb) {
  if (metric.dim() != v.gens()) throw DimensionError("section/metric dimension mismatch");
  if (!(hbar > 0)) throw ConstraintError("hbar must be positive");
}

Section covariant_derivative(const Section& s, int mu) {
  if (mu < 0 || mu >= s.gens()) throw DimensionError("direction index out of range");
  MultivectorC out = fermi_derivative(s.v, mu);
  MultivectorC gauge(s.gens());
  for (int nu = 0; nu < s.gens(); ++nu) {
    const double c = s.metric.q()(mu, nu);
    if (c != 0.0) gauge[1u << nu] += Cplx(c / s.hbar, 0.0);
  }
  out -= wedge(gauge, s.v);
  return Section(std::move(out), s.metric, s.hbar);
}

Section covariant_derivative(const Section& s, const VectorXcd& direction) {
  if (direction.size() != s.gens()) throw DimensionError("direction dimension mismatch");
  MultivectorC acc(s.gens());
  for (int mu = 0; mu < s.gens(); ++mu) {
    if (direction(mu) == Cplx(0)) continue;
    acc += covariant_derivative(s, mu).v * direction(mu);
  }
  return Section(std::move(acc), s.metric, s.hbar);
}

Section prequantum_op(const MultivectorC& f, const Section& s) {
  f.check_same(s.v);
  const int m = s.gens();
  MultivectorC doubled = tensor_embed(f, s.v);
  // One application of -(hbar/2) q^{mn} d_m (x) nabla_n, both index blocks.
  BiOperator<Cplx> op =
      state_bioperator(s.metric.qsharp().cast<Cplx>(), s.metric, s.hbar, Cplx(-s.hbar / 2.0));
  MultivectorC correction(2 * m);
  apply_bioperator(op, doubled.data(), correction.data(), 2 * m);
  return Section(diagonal_pullback(doubled + correction), s.metric, s.hbar);
}

MultivectorC gaussian_factor(const Polarization& pol, double hbar) {
  const int m = pol.dim(), n = pol.n();
  const MatrixXcd cross =
      pol.frame_kernel().transpose() * pol.metric().q().cast<Cplx>() * pol.frame_image();
  MultivectorC expo(m);
  for (int ip = 0; ip < n; ++ip) {
    MultivectorC ci = frame_coordinate(pol, n + ip);
    for (int j = 0; j < n; ++j) {
      const Cplx c = cross(ip, j) / hbar;
      if (c == Cplx(0)) continue;
      expo += wedge(ci, frame_coordinate(pol, j)) * c;
    }
  }
  return exp_even(expo);
}

std::vector<PolarizedState> polarized_basis(const Polarization& pol, double hbar) {
  const int n = pol.n();
  MultivectorC gauss = gaussian_factor(pol, hbar);
  std::vector<PolarizedState> out;
  out.reserve(1u << n);
  for (std::uint32_t set = 0; set < (1u << n); ++set) {
    MultivectorC phi = MultivectorC::scalar(pol.dim(), 1.0);
    for (int i = 0; i < n; ++i)
      if (set & (1u << i)) phi = wedge(phi, frame_coordinate(pol, i));
    out.push_back(PolarizedState{Section(wedge(phi, gauss), pol.metric(), hbar), pol, phi});
  }
  return out;
}

double polarization_residual(const Section& s, const Polarization& pol) {
  const double scale = norm2(s.v);
  if (scale == 0.0) return 0.0;
  double worst = 0.0;
  for (int ip = 0; ip < pol.n(); ++ip) {
    const VectorXcd dir = pol.frame_kernel().col(ip);
    worst = std::max(worst, norm2(covariant_derivative(s, dir).v));
  }
  return worst / scale;
}

bool is_polarized(const Section& s, const Polarization& pol, double tol) {
  return polarization_residual(s, pol) <= tol;
}

Decomposition decompose(const Section& s, const Polarization& pol) {
  const int m = s.gens(), n = pol.n();
  const std::uint32_t dim = 1u << m;
  auto basis = polarized_basis(pol, s.hbar);

  // Columns: the 2^n polarized states, then nabla_i of every monomial.
  const int hp_cols = n << m;
  MatrixXcd a(dim, (1u << n) + hp_cols);
  for (std::uint32_t c = 0; c < (1u << n); ++c)
    for (std::uint32_t r = 0; r < dim; ++r) a(r, c) = basis[c].state.v[r];
  int col = 1 << n;
  for (int i = 0; i < n; ++i) {
    const VectorXcd dir = pol.frame_image().col(i);
    for (std::uint32_t mask = 0; mask < dim; ++mask, ++col) {
      Section chi(MultivectorC::monomial(m, mask, 1.0), s.metric, s.hbar);
      const MultivectorC der = covariant_derivative(chi, dir).v;
      for (std::uint32_t r = 0; r < dim; ++r) a(r, col) = der[r];
    }
  }
  VectorXcd rhs(dim);
  for (std::uint32_t r = 0; r < dim; ++r) rhs(r) = s.v[r];
  const VectorXcd x = a.colPivHouseholderQr().solve(rhs);
  const double defect = (a * x - rhs).norm() / std::max(1e-30, rhs.norm());
  if (defect > 1e-8) throw ConstraintError("section does not split against this polarization");

  MultivectorC h(m), phi(m);
  for (std::uint32_t c = 0; c < (1u << n); ++c) {
    for (std::uint32_t r = 0; r < dim; ++r) h[r] += x(c) * basis[c].state.v[r];
    phi += basis[c].holo * x(c);
  }
  Section pol_part(std::move(h), s.metric, s.hbar);
  Section rest(s.v - pol_part.v, s.metric, s.hbar);
  return Decomposition{std::move(pol_part), std::move(rest), std::move(phi), defect};
}

Section star_on_state(const MultivectorC& f, const Section& s, const Polarization& pol) {
  f.check_same(s.v);
  if (pol.dim() != s.gens()) throw DimensionError("polarization dimension mismatch");
  MultivectorC doubled = tensor_embed(f, s.v);
  BiOperator<Cplx> op =
      state_bioperator(pol.lambda_p(), s.metric, s.hbar, Cplx(-s.hbar / 4.0));
  return Section(diagonal_pullback(exp_bioperator(op, doubled)), s.metric, s.hbar);
}

Section connection_term(const Section& s, const Polarization& pol, const MatrixXcd& comp_ij) {
  const int n = pol.n();
  if (comp_ij.rows() != n || comp_ij.cols() != n)
    throw DimensionError("connection components must be n x n");
  MultivectorC acc(s.gens());
  std::vector<Section> first;
  first.reserve(n);
  for (int j = 0; j < n; ++j)
    first.push_back(covariant_derivative(s, VectorXcd(pol.frame_image().col(j))));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const Cplx c = comp_ij(i, j);
      if (c == Cplx(0)) continue;
      acc += covariant_derivative(first[j], VectorXcd(pol.frame_image().col(i))).v * c;
    }
  return Section(acc * Cplx(0.25 * s.hbar), s.metric, s.hbar);
}

Cplx hermitian_pairing(const Section& a, const Section& b, const Polarization& pol) {
  const int m = pol.dim(), n = pol.n();
  const MatrixXcd one = MatrixXcd::Identity(m, m);
  if ((pol.p().conjugate() - (one - pol.p())).norm() > 1e-8 * std::max(1.0, pol.p().norm()))
    throw ConstraintError("pairing requires a complex-structure polarization");
  // Berezin density of the graded star of a against b; the Gaussian factors
  // of the states supply the weight. Normalised against the frame volume
  // (the Berezin integral of the ordered adapted top monomial) so that the
  // vacuum has unit norm and the basis carries the Fock weights hbar^{|S|}.
  MultivectorC top = MultivectorC::scalar(m, 1.0);
  for (int i = 0; i < n; ++i)
    top = wedge(top, wedge(frame_coordinate(pol, n + i), frame_coordinate(pol, i)));
  const Cplx frame_volume = berezin_integral(top);
  const Cplx factor = std::pow(Cplx(a.hbar, 0.0), n) / frame_volume;
  return factor * berezin_integral(wedge(super_conj(a.v), b.v));
}

Section rotate_section(const Section& s, const Rotation& g) {
  return Section(rotate_function(s.v, g), s.metric, s.hbar);
}

}  // namespace fermion
