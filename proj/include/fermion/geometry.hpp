#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "fermion/multivector.hpp"
#include "fermion/rng.hpp"
#include "fermion/smallmat.hpp"

namespace fermion {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

SqMat<Cplx> to_sqmat(const MatrixXcd& m);
SqMat<Cplx> to_sqmat_real(const MatrixXd& m);

// Euclidean structure q with its inverse q# and the orientation convention
// eps^{1..m} = +1 baked into the Berezin integral.
class Metric {
 public:
  explicit Metric(MatrixXd q, double tol = 1e-10);
  static Metric euclidean(int m);

  int dim() const { return static_cast<int>(q_.rows()); }
  const MatrixXd& q() const { return q_; }
  const MatrixXd& qsharp() const { return qsharp_; }
  const MatrixXd& sqrt_q() const { return sqrt_q_; }
  const MatrixXd& inv_sqrt_q() const { return inv_sqrt_q_; }
  SqMat<Cplx> qsharp_c() const { return to_sqmat_real(qsharp_); }
  SqMat<Cplx> q_c() const { return to_sqmat_real(q_); }
  bool is_euclidean(double tol = 1e-12) const;

 private:
  MatrixXd q_, qsharp_, sqrt_q_, inv_sqrt_q_;
};

// Antisymmetric complex bivector K; the star-product deformation parameter.
class Bivector {
 public:
  Bivector(MatrixXcd k, double tol = 1e-12);
  static Bivector zero(int m) { return Bivector(MatrixXcd::Zero(m, m)); }

  int dim() const { return static_cast<int>(k_.rows()); }
  const MatrixXcd& k() const { return k_; }
  MatrixXcd lambda(const Metric& metric) const { return metric.qsharp() + k_; }
  SqMat<Cplx> k_c() const { return to_sqmat(k_); }

  // Contravariant transformation (gamma (x) gamma) K = gamma K gamma^T.
  Bivector rotated(const MatrixXd& g) const { return Bivector(g * k_ * g.transpose()); }

 private:
  MatrixXcd k_;
};

// gamma in SO(V,q): gamma^T q gamma = q, det gamma = +1.
class Rotation {
 public:
  Rotation(MatrixXd g, const Metric& metric, double tol = 1e-10);

  const MatrixXd& g() const { return g_; }
  const MatrixXd& ginv() const { return ginv_; }

 private:
  MatrixXd g_, ginv_;
};

// Compatible linear complex structure: J^2 = -1, J^T q J = q, orientation
// compatible (the real frame x1, Jx1, ..., xn, Jxn is positively oriented).
class ComplexStructure {
 public:
  ComplexStructure(MatrixXd j, const Metric& metric, double tol = 1e-10);

  int dim() const { return static_cast<int>(j_.rows()); }
  const MatrixXd& j() const { return j_; }
  const Metric& metric() const { return metric_; }

 private:
  MatrixXd j_;
  Metric metric_;
};

// Projection P with im P and ker P a pair of transverse complex Lagrangian
// subspaces: P^2 = P, P^T q P = 0, (1-P)^T q (1-P) = 0. Carries adapted
// frames E (image) and E' (kernel), always normalised so that the only
// non-zero adapted metric block is q(e_{i'}, e_j) = delta_{ij}/2; for frames
// built from a complex structure, E' = conj(E).
class Polarization {
 public:
  Polarization(MatrixXcd p, const Metric& metric, double tol = 1e-10);
  static Polarization from_complex_structure(const ComplexStructure& j);
  // P with im P = L_{J'}, ker P = conj(L_J); requires det(J + J') != 0.
  static Polarization from_transverse_pair(const ComplexStructure& j,
                                           const ComplexStructure& jp);

  int dim() const { return static_cast<int>(p_.rows()); }
  int n() const { return dim() / 2; }
  const MatrixXcd& p() const { return p_; }
  const Metric& metric() const { return metric_; }
  const MatrixXcd& frame_image() const { return e_; }
  const MatrixXcd& frame_kernel() const { return ep_; }
  const MatrixXcd& frame_basis() const { return basis_; }      // [E | E']
  const MatrixXcd& frame_basis_inv() const { return basis_inv_; }

  MatrixXcd k_p() const;       // ((1-P)(x)P - P(x)(1-P)) q#
  MatrixXcd lambda_p() const;  // q# + K_P = 2 ((1-P)(x)P) q#
  Bivector bivector() const { return Bivector(k_p()); }

  // Components of an operator in the adapted frame: B^{-1} M B.
  MatrixXcd adapted(const MatrixXcd& m) const { return basis_inv_ * m * basis_; }

  // Same projection with frames transported from a neighbouring polarization
  // (projection + re-normalisation); keeps frame fields continuous on paths.
  Polarization with_frames_from(const Polarization& prev) const;

 private:
  void build_frames();
  void set_frames(MatrixXcd e, MatrixXcd ep);

  MatrixXcd p_;
  Metric metric_;
  MatrixXcd e_, ep_, basis_, basis_inv_;
};

// Validated infinitesimal displacement of P inside the space of projections.
struct PolTangent {
  MatrixXcd dp;
  MatrixXcd dk;        // -2 (dP (x) 1) q#
  MatrixXcd comp_ij;   // raised components (dP)^{ij} in the adapted frame
  MatrixXcd comp_ipjp; // (dP)^{i'j'}
};

PolTangent validate_tangent(const Polarization& pol, const MatrixXcd& dp, double tol = 1e-8);

ComplexStructure retraction(const Polarization& pol);
// The paired structure: retraction applied to the conjugate complement, so
// that ker P = conj(V^{1,0}) of the result; always orientation compatible.
ComplexStructure retraction_prime(const Polarization& pol);

bool transversal(const ComplexStructure& j, const ComplexStructure& jp, double tol = 1e-10);

// Kaehler form on tangents of the complex-structure space:
// omega(dJ1, dJ2) = -(i/4) [tr(P dJ1 dJ2 P) - tr(P dJ2 dJ1 P)], with the
// tangency constraints {J, dJ} = 0 and dJ^T q J + J^T q dJ = 0 enforced.
Cplx kahler_form(const ComplexStructure& j, const MatrixXcd& dj1, const MatrixXcd& dj2,
                 double tol = 1e-8);

// exp(tX) for X in so(V,q), through the eigendecomposition of the
// orthonormal-gauge image (normal matrix); cheap to evaluate at many t.
class OrthogonalFlow {
 public:
  OrthogonalFlow(const MatrixXd& x, const Metric& metric, double tol = 1e-10);
  MatrixXd at(double t) const;

 private:
  MatrixXd w_, w_inv_;  // gauge transforms
  Eigen::MatrixXcd vecs_, vecs_inv_;
  Eigen::VectorXcd vals_;
};

// J_t = e^{tX} J0 e^{-tX} sampled at steps+1 points of [0,1].
std::vector<Polarization> geodesic_path(const ComplexStructure& j0, const MatrixXd& x, int steps);

// X in so(V,q) with e^X J0 e^{-X} = J1 (principal branch; endpoints must not
// be antipodal). Built from the q-polar factor of 1 - J1 J0.
MatrixXd connecting_generator(const ComplexStructure& j0, const ComplexStructure& j1);

// Pull-back action f -> f o gamma^{-1} as an algebra morphism.
MultivectorC rotate_function(const MultivectorC& f, const Rotation& g);

// Deterministic constructions and seeded samplers used by the verification
// suites and tests.
ComplexStructure standard_complex_structure(const Metric& metric);
Metric random_metric(Rng& rng, int m, double spread = 0.3);
Rotation random_rotation(Rng& rng, const Metric& metric);
MatrixXd random_so_generator(Rng& rng, const Metric& metric, double scale = 1.0);
ComplexStructure random_complex_structure(Rng& rng, const Metric& metric);
Polarization random_polarization_j(Rng& rng, const Metric& metric);
// A polarization outside the complex-structure image (generic kernel).
Polarization random_polarization_pair(Rng& rng, const Metric& metric, double spread = 0.4);

}  // namespace fermion
