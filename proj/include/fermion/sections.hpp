#pragma once

#include <vector>

#include "fermion/geometry.hpp"
#include "fermion/multivector.hpp"

namespace fermion {

// Sections of the prequantum line bundle in the fixed trivialisation
//   nabla_mu = d_mu - hbar^{-1} q_{mu nu} theta^nu,
// which realises the curvature {nabla_mu, nabla_nu} = -2 hbar^{-1} q_{mu nu}.
// Numeric scalars only: the polarised Gaussian carries hbar^{-1}.
struct Section {
  MultivectorC v;
  Metric metric;
  double hbar;

  Section(MultivectorC value, Metric q, double hb);
  int gens() const { return v.gens(); }
};

Section covariant_derivative(const Section& s, int mu);
Section covariant_derivative(const Section& s, const VectorXcd& direction);

// f-hat psi = f ^ psi + (hbar/2) nabla_{H_f} psi, evaluated in the doubled
// algebra as the one-derivative cut of the state star product (plus its
// mirror term), so the two agree exactly order by order.
Section prequantum_op(const MultivectorC& f, const Section& s);

// psi = phi(theta^i) ^ exp(hbar^{-1} q_{i'j} theta^{i'} theta^j).
MultivectorC gaussian_factor(const Polarization& pol, double hbar);

struct PolarizedState {
  Section state;
  Polarization pol;
  MultivectorC holo;  // image-frame coefficient phi
};

// The 2^n states { theta^S ^ Gaussian }, linearly independent and all
// annihilated by the kernel-frame covariant derivatives.
std::vector<PolarizedState> polarized_basis(const Polarization& pol, double hbar);

// max over kernel-frame directions of |nabla_{i'} psi| / |psi|.
double polarization_residual(const Section& s, const Polarization& pol);
bool is_polarized(const Section& s, const Polarization& pol, double tol = 1e-9);

// Direct-sum split of a section into its polarised part and the complement
// spanned by image-direction covariant derivatives.
struct Decomposition {
  Section polarized;
  Section complement;
  MultivectorC holo;
  double residual;  // linear-solve defect, relative
};
Decomposition decompose(const Section& s, const Polarization& pol);

// f *_P psi = D*( exp(-hbar/4 Lambda_P^{mn} d_m (x) nabla_n) f (x) psi ).
Section star_on_state(const MultivectorC& f, const Section& s, const Polarization& pol);

// The connection term A^H(dP) psi = (hbar/4) (dP)^{ij} nabla_i nabla_j psi:
// the unique multiple of the double image derivative for which psi + A psi
// stays polarized at P + dP to first order (each nabla carries hbar^{-1},
// which fixes the normalisation).
Section connection_term(const Section& s, const Polarization& pol, const MatrixXcd& comp_ij);

// Hermitian pairing at a complex-structure polarization with conjugate
// adapted frames: the Berezin integral of the graded star of a against b,
//   <a, b> = (hbar^n / V) Int super_conj(a) ^ b,
// with V the Berezin volume of the adapted top monomial. The vacuum has unit
// norm, the polarized basis is orthogonal with weights hbar^{|S|}, and the
// direct-sum decomposition against image-direction derivatives is orthogonal.
Cplx hermitian_pairing(const Section& a, const Section& b, const Polarization& pol);

Section rotate_section(const Section& s, const Rotation& g);

}  // namespace fermion
