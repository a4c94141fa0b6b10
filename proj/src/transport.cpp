#include "fermion/transport.hpp"

#include <cmath>

#include "fermion/errors.hpp"

namespace fermion {

namespace {

MatrixXcd projection_from_structure(const MatrixXd& j) {
  const int m = static_cast<int>(j.rows());
  return 0.5 * (MatrixXcd::Identity(m, m) - Cplx(0, 1) * j.cast<Cplx>());
}

// P with im = V^{1,0} of j_im and ker = V^{0,1} of j_ker, from raw matrices.
MatrixXcd projection_from_pair(const MatrixXd& j_ker, const MatrixXd& j_im, const Metric& metric) {
  const int m = metric.dim(), n = m / 2;
  Eigen::ColPivHouseholderQR<MatrixXcd> qr_im(projection_from_structure(j_im));
  MatrixXcd e = qr_im.householderQ() * MatrixXcd::Identity(m, n);
  Eigen::ColPivHouseholderQR<MatrixXcd> qr_ker(projection_from_structure(j_ker));
  MatrixXcd ep = (qr_ker.householderQ() * MatrixXcd::Identity(m, n)).conjugate();
  MatrixXcd basis(m, m);
  basis << e, ep;
  MatrixXcd sel = MatrixXcd::Zero(m, m);
  sel.topLeftCorner(n, n) = MatrixXcd::Identity(n, n);
  return basis * sel * basis.inverse();
}

}  // namespace

ProjectionPath geodesic_projection_path(const ComplexStructure& j0, const MatrixXd& x) {
  OrthogonalFlow flow(x, j0.metric());
  const MatrixXd j = j0.j();
  return [flow, j](double t) {
    const MatrixXd g = flow.at(t);
    return projection_from_structure(g * j * g.inverse());
  };
}

ProjectionPath pair_projection_path(const ComplexStructure& j0, const MatrixXd& x_ker,
                                    const MatrixXd& x_im) {
  OrthogonalFlow fk(x_ker, j0.metric());
  OrthogonalFlow fi(x_im, j0.metric());
  const MatrixXd j = j0.j();
  const Metric metric = j0.metric();
  return [fk, fi, j, metric](double t) {
    const MatrixXd gk = fk.at(t), gi = fi.at(t);
    return projection_from_pair(gk * j * gk.inverse(), gi * j * gi.inverse(), metric);
  };
}

ProjectionPath connecting_projection_path(const Polarization& p0, const Polarization& p1) {
  const Metric metric = p0.metric();
  const ComplexStructure ja0 = retraction(p0), ja1 = retraction(p1);
  const ComplexStructure jb0 = retraction_prime(p0), jb1 = retraction_prime(p1);
  const MatrixXd xa = connecting_generator(ja0, ja1);
  const MatrixXd xb = connecting_generator(jb0, jb1);
  OrthogonalFlow fa(xa, metric), fb(xb, metric);
  const MatrixXd a0 = ja0.j(), b0 = jb0.j();
  return [fa, fb, a0, b0, metric](double t) {
    const MatrixXd ga = fa.at(t), gb = fb.at(t);
    // im from the retraction flow, ker = conj(V^{1,0}) of the paired flow.
    return projection_from_pair(gb * b0 * gb.inverse(), ga * a0 * ga.inverse(), metric);
  };
}

namespace {

struct StageOperator {
  Polarization pol;     // frames propagated up to this stage
  MatrixXcd comp_ij;    // raised tangent components
  MatrixXcd pdot;

  MultivectorC apply(const MultivectorC& v, const Metric& metric, double hbar) const {
    Section s(v, metric, hbar);
    return connection_term(s, pol, comp_ij).v;
  }
};

// Paths are built from flows and extend smoothly beyond [0, 1], so the
// stencil never needs clamping.
StageOperator make_stage(const ProjectionPath& path, const Metric& metric, double t,
                         const Polarization& frame_source) {
  const double h = 1e-6;
  // Corner points of piecewise paths average the one-sided derivatives,
  // which is still a tangent vector; the stencil contamination is O(h).
  const MatrixXcd pm2 = path(t - 2 * h), pm1 = path(t - h), pp1 = path(t + h),
                  pp2 = path(t + 2 * h);
  MatrixXcd pdot = (8.0 * (pp1 - pm1) - (pp2 - pm2)) / (12.0 * h);
  Polarization pol = Polarization(path(t), metric).with_frames_from(frame_source);
  PolTangent tan = validate_tangent(pol, pdot, 1e-4);
  return StageOperator{std::move(pol), tan.comp_ij, std::move(pdot)};
}

// Half-form reference frame at P, parallel-transported from the standard
// polarization along the canonical geodesic. Anchoring every reference to
// one base frame keeps the gauge angles between the references of nearby
// polarizations small, so principal square-root resolutions are consistent
// across composed transports (the phase bookkeeping is sensitive to a full
// winding per factor, not to the gauge itself).
MatrixXcd anchored_image_frame(const Polarization& pol, int steps = 160) {
  const Metric metric = pol.metric();
  ComplexStructure jstar = standard_complex_structure(metric);
  Polarization pstar = Polarization::from_complex_structure(jstar);
  const MatrixXd x = connecting_generator(jstar, retraction(pol));
  OrthogonalFlow flow(x, metric);
  const MatrixXd j0 = jstar.j();
  auto path = [&](double t) {
    const MatrixXd g = flow.at(t);
    return projection_from_structure(g * j0 * g.inverse());
  };
  auto pdot = [&](double t) {
    const double e = 1e-6;
    return MatrixXcd((8.0 * (path(t + e) - path(t - e)) - (path(t + 2 * e) - path(t - 2 * e))) /
                     (12.0 * e));
  };
  MatrixXcd frame = pstar.frame_image();
  const double h = 1.0 / steps;
  for (int k = 0; k < steps; ++k) {
    const double t = k * h;
    const MatrixXcd d0 = pdot(t), d1 = pdot(t + 0.5 * h), d2 = pdot(t + h);
    const MatrixXcd f1 = d0 * frame;
    const MatrixXcd f2 = d1 * (frame + 0.5 * h * f1);
    const MatrixXcd f3 = d1 * (frame + 0.5 * h * f2);
    const MatrixXcd f4 = d2 * (frame + h * f3);
    frame += (h / 6.0) * (f1 + 2.0 * (f2 + f3) + f4);
  }
  return frame;
}

// Dual rows extracting image-frame coordinates against the anchored frame.
MatrixXcd anchored_extractor(const Polarization& pol, const MatrixXcd& anchor) {
  const int m = pol.dim(), n = pol.n();
  MatrixXcd basis(m, m);
  basis << anchor, pol.frame_kernel();
  return basis.inverse().topRows(n);
}

}  // namespace

TransportResult transport_state(const ProjectionPath& path, const Metric& metric,
                                const Section& psi, int steps, bool metaplectic) {
  if (steps < 1) throw DimensionError("transport needs at least one step");
  Polarization start(path(0.0), metric);
  if (polarization_residual(psi, start) > 1e-6)
    throw ConstraintError("transport input is not polarized at the start of the path");

  Polarization end_canonical(path(1.0), metric);
  const int n = start.n();

  MultivectorC y = psi.v;
  MatrixXcd frame(start.dim(), n);
  MatrixXcd extractor(n, start.dim());
  if (metaplectic) {
    frame = anchored_image_frame(start);
    extractor = anchored_extractor(end_canonical, anchored_image_frame(end_canonical));
  } else {
    frame = start.frame_image();
    extractor = end_canonical.frame_basis_inv().topRows(n);
  }
  Polarization frames = start;

  Cplx det_prev = (extractor * frame).determinant();
  if (std::abs(det_prev) < 1e-9)
    throw RefinementError("endpoint frame is singular against the start of the path");
  double arg_total = std::arg(det_prev);
  const double abs_start = std::abs(det_prev);

  const double h = 1.0 / steps;
  for (int k = 0; k < steps; ++k) {
    const double t = k * h;
    StageOperator s0 = make_stage(path, metric, t, frames);
    StageOperator s1 = make_stage(path, metric, t + 0.5 * h, s0.pol);
    StageOperator s2 = make_stage(path, metric, t + h, s1.pol);

    const MultivectorC k1 = s0.apply(y, metric, psi.hbar);
    const MultivectorC k2 = s1.apply(y + k1 * Cplx(0.5 * h), metric, psi.hbar);
    const MultivectorC k3 = s1.apply(y + k2 * Cplx(0.5 * h), metric, psi.hbar);
    const MultivectorC k4 = s2.apply(y + k3 * Cplx(h), metric, psi.hbar);
    y += (k1 + (k2 + k3) * Cplx(2.0) + k4) * Cplx(h / 6.0);

    if (metaplectic) {
      const MatrixXcd f1 = s0.pdot * frame;
      const MatrixXcd f2 = s1.pdot * (frame + 0.5 * h * f1);
      const MatrixXcd f3 = s1.pdot * (frame + 0.5 * h * f2);
      const MatrixXcd f4 = s2.pdot * (frame + h * f3);
      frame += (h / 6.0) * (f1 + 2.0 * (f2 + f3) + f4);

      const Cplx det_now = (extractor * frame).determinant();
      if (std::abs(det_now) < 1e-9 * abs_start)
        throw RefinementError("volume determinant collapsed; refine the path");
      const double jump = std::arg(det_now / det_prev);
      if (std::abs(jump) > M_PI / 2)
        throw RefinementError("square-root branch jump; increase the step count");
      arg_total += jump;
      det_prev = det_now;
    }
    frames = s2.pol;
  }

  Cplx phase = 1.0;
  if (metaplectic) {
    // The corrected representative carries the transported half volume:
    // its phase cancels the projective phase of the state transport.
    const Cplx root = std::sqrt(std::abs(det_prev)) * std::exp(Cplx(0, 0.5 * arg_total));
    y *= root;
    phase = std::exp(Cplx(0, 0.5 * arg_total));
  }
  Section out(std::move(y), metric, psi.hbar);
  const double residual = polarization_residual(out, end_canonical);
  return TransportResult{std::move(out), phase, std::move(end_canonical), steps, residual};
}

TransportResult group_action_rep(const Polarization& pol, const Rotation& g, const Section& psi,
                                 int steps, bool metaplectic) {
  Section moved = rotate_section(psi, g);
  const MatrixXcd p_moved = g.g().cast<Cplx>() * pol.p() * g.ginv().cast<Cplx>();
  Polarization start(p_moved, pol.metric());
  ProjectionPath path = connecting_projection_path(start, pol);
  TransportResult out = transport_state(path, pol.metric(), moved, steps, metaplectic);
  if (metaplectic) {
    // The lift also rotates the half form: the rotated anchored frame of P
    // against the anchored frame of g P g^{-1}, principal square root. With
    // anchored references the argument stays small for rotations near the
    // identity, which is the short-path spin lift.
    const MatrixXcd coords = anchored_extractor(start, anchored_image_frame(start)) *
                             g.g().cast<Cplx>() * anchored_image_frame(pol);
    const Cplx half = std::sqrt(coords.determinant());
    out.state.v *= half;
    out.metaplectic_phase *= half / std::abs(half);
  }
  return out;
}

}  // namespace fermion
