#include "fermion/geometry.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "fermion/errors.hpp"

namespace fermion {

namespace {

double rel_scale(const MatrixXcd& m) { return std::max(1.0, m.norm()); }

MatrixXcd thin_orthonormal(const MatrixXcd& m) {
  Eigen::HouseholderQR<MatrixXcd> qr(m);
  return qr.householderQ() * MatrixXcd::Identity(m.rows(), m.cols());
}

// Orthonormal basis of the column space of a rank-n projection-like matrix.
// Built by pushing a fixed seed through the matrix, so the result is a
// continuous function of the input near generic points; column-pivoted
// factorisations are avoided because a pivot flip between two evaluations of
// numerically equal inputs changes the frame volume by -1, which the
// metaplectic square-root tracking cannot tolerate.
MatrixXcd column_space_basis(const MatrixXcd& m, int want_rank, double tol) {
  const int rows = static_cast<int>(m.rows());
  for (int shift = 0; shift <= rows - 1; ++shift) {
    MatrixXcd seed = MatrixXcd::Zero(rows, want_rank);
    for (int c = 0; c < want_rank; ++c) seed((c + shift) % rows, c) = 1.0;
    const MatrixXcd img = m * seed;
    Eigen::HouseholderQR<MatrixXcd> qr(img);
    const MatrixXcd r = qr.matrixQR().topRows(want_rank).triangularView<Eigen::Upper>();
    double dmin = 1e300;
    for (int c = 0; c < want_rank; ++c) dmin = std::min(dmin, std::abs(r(c, c)));
    if (dmin > 1e-3) return thin_orthonormal(img);
  }
  // Rank-revealing fallback for degenerate inputs (also validates the rank).
  Eigen::ColPivHouseholderQR<MatrixXcd> qr(m);
  qr.setThreshold(tol);
  if (qr.rank() != want_rank) throw ConstraintError("projection has unexpected rank");
  return qr.householderQ() * MatrixXcd::Identity(rows, want_rank);
}

}  // namespace

SqMat<Cplx> to_sqmat(const MatrixXcd& m) {
  SqMat<Cplx> out(static_cast<int>(m.rows()));
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) out(i, j) = m(i, j);
  return out;
}

SqMat<Cplx> to_sqmat_real(const MatrixXd& m) {
  SqMat<Cplx> out(static_cast<int>(m.rows()));
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) out(i, j) = Cplx(m(i, j), 0.0);
  return out;
}

Metric::Metric(MatrixXd q, double tol) : q_(std::move(q)) {
  if (q_.rows() != q_.cols() || q_.rows() < 1) throw DimensionError("metric must be square");
  if ((q_ - q_.transpose()).norm() > tol * std::max(1.0, q_.norm()))
    throw ConstraintError("metric must be symmetric");
  q_ = 0.5 * (q_ + q_.transpose());
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(q_);
  if (es.eigenvalues().minCoeff() <= 0) throw ConstraintError("metric must be positive definite");
  const VectorXd lam = es.eigenvalues();
  qsharp_ = es.eigenvectors() * lam.cwiseInverse().asDiagonal() * es.eigenvectors().transpose();
  sqrt_q_ = es.eigenvectors() * lam.cwiseSqrt().asDiagonal() * es.eigenvectors().transpose();
  inv_sqrt_q_ =
      es.eigenvectors() * lam.cwiseSqrt().cwiseInverse().asDiagonal() * es.eigenvectors().transpose();
}

Metric Metric::euclidean(int m) { return Metric(MatrixXd::Identity(m, m)); }

bool Metric::is_euclidean(double tol) const {
  return (q_ - MatrixXd::Identity(dim(), dim())).norm() <= tol;
}

Bivector::Bivector(MatrixXcd k, double tol) : k_(std::move(k)) {
  if (k_.rows() != k_.cols()) throw DimensionError("bivector must be square");
  if ((k_ + k_.transpose()).norm() > tol * std::max(1.0, k_.norm()))
    throw ConstraintError("bivector must be antisymmetric");
  k_ = 0.5 * (k_ - k_.transpose());
}

Rotation::Rotation(MatrixXd g, const Metric& metric, double tol) : g_(std::move(g)) {
  if (g_.rows() != metric.dim() || g_.cols() != metric.dim())
    throw DimensionError("rotation dimension mismatch");
  if ((g_.transpose() * metric.q() * g_ - metric.q()).norm() > tol * std::max(1.0, metric.q().norm()))
    throw ConstraintError("rotation does not preserve the metric");
  if (std::abs(g_.determinant() - 1.0) > tol)
    throw ConstraintError("rotation must have unit determinant");
  ginv_ = metric.qsharp() * g_.transpose() * metric.q();
}

ComplexStructure::ComplexStructure(MatrixXd j, const Metric& metric, double tol)
    : j_(std::move(j)), metric_(metric) {
  const int m = metric.dim();
  if (j_.rows() != m || j_.cols() != m) throw DimensionError("complex structure dimension mismatch");
  if (m % 2 != 0) throw ConstraintError("complex structure needs even dimension");
  if ((j_ * j_ + MatrixXd::Identity(m, m)).norm() > tol * std::max(1.0, j_.squaredNorm()))
    throw ConstraintError("J^2 must be -1");
  if ((j_.transpose() * metric.q() * j_ - metric.q()).norm() > tol * std::max(1.0, metric.q().norm()))
    throw ConstraintError("J must be q-orthogonal");

  // Orientation: greedily build the real frame (x1, Jx1, ..., xn, Jxn) and
  // demand a positive volume.
  MatrixXd frame(m, m);
  int filled = 0;
  const MatrixXd& q = metric.q();
  for (int cand = 0; cand < m && filled < m; ++cand) {
    VectorXd v = VectorXd::Unit(m, cand);
    for (int c = 0; c < filled; ++c) {
      const VectorXd w = frame.col(c);
      v -= w * (w.dot(q * v) / w.dot(q * w));
    }
    if (std::sqrt(v.dot(q * v)) < 1e-6) continue;
    v /= std::sqrt(v.dot(q * v));
    frame.col(filled++) = v;
    frame.col(filled++) = j_ * v;
  }
  if (filled != m) throw ConstraintError("failed to build an adapted real frame");
  if (frame.determinant() <= 0) throw ConstraintError("J is not compatible with the orientation");
}

Polarization::Polarization(MatrixXcd p, const Metric& metric, double tol)
    : p_(std::move(p)), metric_(metric) {
  const int m = metric.dim();
  if (p_.rows() != m || p_.cols() != m) throw DimensionError("projection dimension mismatch");
  if (m % 2 != 0) throw ConstraintError("polarization needs even dimension");
  const double s = rel_scale(p_);
  if ((p_ * p_ - p_).norm() > tol * s) throw ConstraintError("P^2 = P violated");
  const MatrixXcd one = MatrixXcd::Identity(m, m);
  if ((p_.transpose() * metric.q() * p_).norm() > tol * s * s)
    throw ConstraintError("im P is not isotropic");
  if (((one - p_).transpose() * metric.q() * (one - p_)).norm() > tol * s * s)
    throw ConstraintError("ker P is not isotropic");
  build_frames();
}

void Polarization::build_frames() {
  const int m = dim();
  const MatrixXcd one = MatrixXcd::Identity(m, m);
  MatrixXcd e = column_space_basis(p_, n(), 1e-10);
  const bool conj_pair = (p_.conjugate() - (one - p_)).norm() < 1e-8 * rel_scale(p_);
  if (conj_pair) {
    // Hermitian normalisation 2 q(e-bar_i, e_j) = delta, kernel frame the
    // exact conjugate.
    const MatrixXcd gram = 2.0 * (e.adjoint() * metric_.q() * e);
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(gram);
    const MatrixXcd gram_inv_sqrt = es.eigenvectors() *
                                    es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
                                    es.eigenvectors().adjoint();
    e = e * gram_inv_sqrt;
    set_frames(e, e.conjugate());
    return;
  }
  MatrixXcd ep = column_space_basis(one - p_, n(), 1e-10);
  // Scale the kernel frame so q(e_{i'}, e_j) = delta_{ij}/2.
  const MatrixXcd cross = ep.transpose() * metric_.q() * e;  // rows i', cols j
  ep = ep * (0.5 * cross.inverse().transpose());
  set_frames(std::move(e), std::move(ep));
}

void Polarization::set_frames(MatrixXcd e, MatrixXcd ep) {
  const int m = dim();
  e_ = std::move(e);
  ep_ = std::move(ep);
  basis_.resize(m, m);
  basis_ << e_, ep_;
  basis_inv_ = basis_.inverse();
  if (!basis_inv_.allFinite()) throw ConstraintError("degenerate adapted frame");
}

Polarization Polarization::from_complex_structure(const ComplexStructure& j) {
  const int m = j.dim();
  const MatrixXcd p =
      0.5 * (MatrixXcd::Identity(m, m) - Cplx(0, 1) * j.j().cast<Cplx>());
  return Polarization(p, j.metric());
}

Polarization Polarization::from_transverse_pair(const ComplexStructure& j,
                                                const ComplexStructure& jp) {
  if (!transversal(j, jp)) throw ConstraintError("pair is not transverse");
  const Metric& metric = j.metric();
  Polarization pj = from_complex_structure(j);
  Polarization pjp = from_complex_structure(jp);
  const int m = metric.dim(), half = m / 2;
  MatrixXcd basis(m, m);
  basis << pjp.frame_image(), pj.frame_image().conjugate();
  MatrixXcd sel = MatrixXcd::Zero(m, m);
  sel.topLeftCorner(half, half) = MatrixXcd::Identity(half, half);
  return Polarization(basis * sel * basis.inverse(), metric);
}

MatrixXcd Polarization::k_p() const {
  const MatrixXcd one = MatrixXcd::Identity(dim(), dim());
  const MatrixXcd qs = metric_.qsharp().cast<Cplx>();
  return (one - p_) * qs * p_.transpose() - p_ * qs * (one - p_).transpose();
}

MatrixXcd Polarization::lambda_p() const { return metric_.qsharp().cast<Cplx>() + k_p(); }

Polarization Polarization::with_frames_from(const Polarization& prev) const {
  Polarization out = *this;
  const MatrixXcd one = MatrixXcd::Identity(dim(), dim());
  MatrixXcd e = thin_orthonormal(p_ * prev.e_);
  MatrixXcd ep = (one - p_) * prev.ep_;
  const MatrixXcd cross = ep.transpose() * metric_.q() * e;
  ep = ep * (0.5 * cross.inverse().transpose());
  out.set_frames(std::move(e), std::move(ep));
  return out;
}

PolTangent validate_tangent(const Polarization& pol, const MatrixXcd& dp, double tol) {
  const int m = pol.dim(), half = pol.n();
  if (dp.rows() != m || dp.cols() != m) throw DimensionError("tangent dimension mismatch");
  const MatrixXcd one = MatrixXcd::Identity(m, m);
  const MatrixXcd& p = pol.p();
  const MatrixXcd qs = pol.metric().qsharp().cast<Cplx>();
  const double s = std::max(1.0, dp.norm());
  if ((p * dp - dp * (one - p)).norm() > tol * s)
    throw ConstraintError("tangent violates P dP = dP (1-P)");
  if (((one - p) * dp - dp * p).norm() > tol * s)
    throw ConstraintError("tangent violates (1-P) dP = dP P");
  if ((dp * qs * p.transpose() + p * qs * dp.transpose()).norm() > tol * s)
    throw ConstraintError("tangent violates isotropy of im P");
  if ((dp * qs * (one - p).transpose() + (one - p) * qs * dp.transpose()).norm() > tol * s)
    throw ConstraintError("tangent violates isotropy of ker P");

  PolTangent t;
  t.dp = dp;
  t.dk = -2.0 * dp * qs;
  const MatrixXcd dp_ad = pol.adapted(dp);
  const MatrixXcd q_ad = pol.frame_basis().transpose() * pol.metric().q().cast<Cplx>() *
                         pol.frame_basis();
  const MatrixXcd qs_ad = q_ad.inverse();
  t.comp_ij = dp_ad.topRightCorner(half, half) * qs_ad.bottomLeftCorner(half, half);
  t.comp_ipjp = dp_ad.bottomLeftCorner(half, half) * qs_ad.topRightCorner(half, half);
  return t;
}

ComplexStructure retraction(const Polarization& pol) {
  const MatrixXcd& p = pol.p();
  const MatrixXcd pbar = p.conjugate();
  const MatrixXcd one = MatrixXcd::Identity(pol.dim(), pol.dim());
  const MatrixXcd inv = (p - pbar).inverse();
  if (!inv.allFinite()) throw ConstraintError("P - conj(P) is singular");
  const MatrixXcd j = Cplx(0, 1) * (p * inv * (one - pbar) + pbar * inv * (one - p));
  if (j.imag().norm() > 1e-8 * std::max(1.0, j.norm()))
    throw ConstraintError("retraction produced a non-real structure");
  return ComplexStructure(j.real(), pol.metric());
}

ComplexStructure retraction_prime(const Polarization& pol) {
  // The image of conj(1 - P) is the conjugate of ker P, whose structure lies
  // in the orientation-compatible component for every n (the raw complement
  // retracts to its negative, which falls outside it when n is odd).
  const MatrixXcd one = MatrixXcd::Identity(pol.dim(), pol.dim());
  return retraction(Polarization((one - pol.p()).conjugate(), pol.metric()));
}

bool transversal(const ComplexStructure& j, const ComplexStructure& jp, double tol) {
  return std::abs((0.5 * (j.j() + jp.j())).determinant()) > tol;
}

Cplx kahler_form(const ComplexStructure& j, const MatrixXcd& dj1, const MatrixXcd& dj2,
                 double tol) {
  const int m = j.dim();
  const MatrixXd& jm = j.j();
  const MatrixXd& q = j.metric().q();
  for (const MatrixXcd* dj : {&dj1, &dj2}) {
    const double s = std::max(1.0, dj->norm());
    if ((jm.cast<Cplx>() * *dj + *dj * jm.cast<Cplx>()).norm() > tol * s)
      throw ConstraintError("tangent must anticommute with J");
    if ((dj->transpose() * q.cast<Cplx>() * jm.cast<Cplx>() +
         jm.transpose().cast<Cplx>() * q.cast<Cplx>() * *dj)
            .norm() > tol * s)
      throw ConstraintError("tangent must preserve the metric condition");
  }
  const MatrixXcd p = 0.5 * (MatrixXcd::Identity(m, m) - Cplx(0, 1) * jm.cast<Cplx>());
  const Cplx t12 = (p * dj1 * dj2 * p).trace();
  const Cplx t21 = (p * dj2 * dj1 * p).trace();
  return Cplx(0, -0.25) * (t12 - t21);
}

OrthogonalFlow::OrthogonalFlow(const MatrixXd& x, const Metric& metric, double tol) {
  const int m = metric.dim();
  if (x.rows() != m || x.cols() != m) throw DimensionError("generator dimension mismatch");
  if ((metric.q() * x + x.transpose() * metric.q()).norm() > tol * std::max(1.0, x.norm()))
    throw ConstraintError("generator must be q-antisymmetric");
  w_ = metric.sqrt_q();
  w_inv_ = metric.inv_sqrt_q();
  const MatrixXd xt = w_ * x * w_inv_;  // plain antisymmetric, hence normal
  Eigen::ComplexEigenSolver<MatrixXcd> es(xt.cast<Cplx>());
  vecs_ = es.eigenvectors();
  vecs_inv_ = vecs_.inverse();
  vals_ = es.eigenvalues();
}

MatrixXd OrthogonalFlow::at(double t) const {
  const VectorXcd ex = (vals_.array() * t).exp();
  const MatrixXcd g = vecs_ * ex.asDiagonal() * vecs_inv_;
  return w_inv_ * g.real() * w_;
}

std::vector<Polarization> geodesic_path(const ComplexStructure& j0, const MatrixXd& x,
                                        int steps) {
  if (steps < 1) throw DimensionError("path needs at least one step");
  OrthogonalFlow flow(x, j0.metric());
  std::vector<Polarization> out;
  out.reserve(steps + 1);
  for (int k = 0; k <= steps; ++k) {
    const MatrixXd g = flow.at(static_cast<double>(k) / steps);
    out.push_back(Polarization::from_complex_structure(
        ComplexStructure(g * j0.j() * g.inverse(), j0.metric())));
  }
  return out;
}

MatrixXd connecting_generator(const ComplexStructure& j0, const ComplexStructure& j1) {
  const Metric& metric = j0.metric();
  const int m = metric.dim();
  const MatrixXd g0 = MatrixXd::Identity(m, m) - j1.j() * j0.j();
  const MatrixXd mmat = 2.0 * MatrixXd::Identity(m, m) - (j0.j() * j1.j() + j1.j() * j0.j());
  const MatrixXd& w = metric.sqrt_q();
  const MatrixXd& winv = metric.inv_sqrt_q();
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(w * mmat * winv);
  if (es.eigenvalues().minCoeff() < 1e-12)
    throw ConstraintError("endpoints are antipodal; no principal connecting generator");
  const MatrixXd m_inv_sqrt =
      winv *
      (es.eigenvectors() * es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
       es.eigenvectors().transpose()) *
      w;
  const MatrixXd g = g0 * m_inv_sqrt;

  Eigen::ComplexEigenSolver<MatrixXcd> ces((w * g * winv).cast<Cplx>());
  VectorXcd logs(m);
  for (int i = 0; i < m; ++i) {
    const Cplx lam = ces.eigenvalues()(i);
    if (std::abs(lam + 1.0) < 1e-10)
      throw ConstraintError("rotation has a -1 eigenvalue; no principal log");
    logs(i) = Cplx(0.0, std::arg(lam));
  }
  const MatrixXcd xt = ces.eigenvectors() * logs.asDiagonal() * ces.eigenvectors().inverse();
  return winv * xt.real() * w;
}

MultivectorC rotate_function(const MultivectorC& f, const Rotation& g) {
  const int m = f.gens();
  if (g.g().rows() != m) throw DimensionError("rotation dimension mismatch");
  std::vector<MultivectorC> images;
  images.reserve(m);
  for (int mu = 0; mu < m; ++mu) {
    MultivectorC v(m);
    for (int nu = 0; nu < m; ++nu) {
      const double c = g.ginv()(mu, nu);
      if (c != 0.0) v[1u << nu] = Cplx(c, 0.0);
    }
    images.push_back(std::move(v));
  }
  return substitute<Cplx>(f, images, m);
}

ComplexStructure standard_complex_structure(const Metric& metric) {
  const int m = metric.dim();
  if (m % 2 != 0) throw ConstraintError("complex structure needs even dimension");
  MatrixXd jcan = MatrixXd::Zero(m, m);
  for (int k = 0; k < m / 2; ++k) {
    jcan(2 * k, 2 * k + 1) = -1.0;
    jcan(2 * k + 1, 2 * k) = 1.0;
  }
  return ComplexStructure(metric.inv_sqrt_q() * jcan * metric.sqrt_q(), metric);
}

Metric random_metric(Rng& rng, int m, double spread) {
  MatrixXd s(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) s(i, j) = rng.normal();
  s = (0.5 * (s + s.transpose())).eval();
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(s);
  return Metric(es.eigenvectors() * (spread * es.eigenvalues()).array().exp().matrix().asDiagonal() *
                es.eigenvectors().transpose());
}

Rotation random_rotation(Rng& rng, const Metric& metric) {
  const int m = metric.dim();
  MatrixXd a(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) a(i, j) = rng.normal();
  Eigen::HouseholderQR<MatrixXd> qr(a);
  MatrixXd qm = qr.householderQ();
  const MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int c = 0; c < m; ++c)
    if (r(c, c) < 0) qm.col(c) *= -1.0;
  if (qm.determinant() < 0) qm.col(0) *= -1.0;
  return Rotation(metric.inv_sqrt_q() * qm * metric.sqrt_q(), metric);
}

MatrixXd random_so_generator(Rng& rng, const Metric& metric, double scale) {
  const int m = metric.dim();
  MatrixXd a = MatrixXd::Zero(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      const double v = scale * rng.normal();
      a(i, j) = v;
      a(j, i) = -v;
    }
  return metric.inv_sqrt_q() * a * metric.sqrt_q();
}

ComplexStructure random_complex_structure(Rng& rng, const Metric& metric) {
  Rotation g = random_rotation(rng, metric);
  const MatrixXd j = standard_complex_structure(metric).j();
  return ComplexStructure(g.g() * j * g.ginv(), metric);
}

Polarization random_polarization_j(Rng& rng, const Metric& metric) {
  return Polarization::from_complex_structure(random_complex_structure(rng, metric));
}

Polarization random_polarization_pair(Rng& rng, const Metric& metric, double spread) {
  for (int attempt = 0; attempt < 8; ++attempt) {
    ComplexStructure j = random_complex_structure(rng, metric);
    OrthogonalFlow flow(random_so_generator(rng, metric, spread), metric);
    const MatrixXd g = flow.at(1.0);
    ComplexStructure jp(g * j.j() * g.inverse(), metric);
    if (!transversal(j, jp)) continue;
    Polarization p = Polarization::from_transverse_pair(j, jp);
    // Keep only genuinely non-J kernels.
    if ((p.p().conjugate() - (MatrixXcd::Identity(p.dim(), p.dim()) - p.p())).norm() >
        1e-6 * std::max(1.0, p.p().norm()))
      return p;
  }
  throw ConstraintError("failed to sample a generic polarization");
}

}  // namespace fermion
