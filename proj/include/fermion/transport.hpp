#pragma once

#include <functional>

#include "fermion/sections.hpp"

namespace fermion {

// A smooth family of projections over [0, 1]; values must satisfy the
// polarization constraints at every parameter.
using ProjectionPath = std::function<MatrixXcd(double)>;

ProjectionPath geodesic_projection_path(const ComplexStructure& j0, const MatrixXd& x);
// Independent geodesics in the two structure factors (im from j', ker from j).
ProjectionPath pair_projection_path(const ComplexStructure& j0, const MatrixXd& x_ker,
                                    const MatrixXd& x_im);
// Connects two polarizations through the pair of retractions.
ProjectionPath connecting_projection_path(const Polarization& p0, const Polarization& p1);

struct TransportResult {
  Section state;
  Cplx metaplectic_phase;  // unit modulus; 1 for uncorrected transport
  Polarization end;
  int steps;
  double polarization_residual;
};

// Parallel transport of a polarized section along the path: classical
// fourth-order one-step integration of dpsi/dt = (hbar/4)(Pdot)^{ij} n_i n_j psi
// with frames propagated continuously. With `metaplectic` set, an image
// frame is transported by dV/dt = Pdot V and the state representative is
// multiplied by the continuously tracked square root of its volume against
// the canonical endpoint frame, cancelling the projective phase.
TransportResult transport_state(const ProjectionPath& path, const Metric& metric,
                                const Section& psi, int steps, bool metaplectic);

// rho_P(g) psi = U^H_{P <- g P g^{-1}} (gamma^H psi), with the default
// geodesic path between the conjugated structures; the metaplectic variant
// composes without phase ambiguity.
TransportResult group_action_rep(const Polarization& pol, const Rotation& g, const Section& psi,
                                 int steps, bool metaplectic);

}  // namespace fermion
