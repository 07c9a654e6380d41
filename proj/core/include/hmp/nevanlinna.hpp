#pragma once

#include <optional>

#include "hmp/cayley_basis.hpp"
#include "hmp/gram_model.hpp"
#include "hmp/moments.hpp"

namespace hmp {

/// Inner-product tables of a finite section:
///   frak_v(j, k)      = <v_k, u_j>     τ̂×τ̂
///   w(j, l)           = <v'_l, u_j>    τ̂×ω̂
///   t(j, l)           = <v'_l, u'_j>   δ̂×ω̂
///   c0_generator(j,k) = <v_k, u'_j>    δ̂×τ̂
///   k(j, n)           = <y_n^-, u_j>   ρ×N
/// plus a Hessenberg factorization frak_v = Q H Q^* used to solve with
/// I - ζ frak_v in O(τ̂²) per point.
struct StructureMatrices {
  CMatrix frak_v;
  CMatrix w;
  CMatrix t;
  CMatrix c0_generator;
  CMatrix k;
  int rho = 0;
  int block_size = 1;
  int section_size = 0;
  unsigned precision_bits = kDefaultPrecisionBits;

  CMatrix hessenberg;    // H
  CMatrix q_lead;        // Q^* E_ρ K, τ̂×N
  CMatrix q_w;           // Q^* W, τ̂×ω̂
  CMatrix c0_q;          // C0-generator Q, δ̂×τ̂

  int tau() const { return static_cast<int>(frak_v.rows()); }
  int delta() const { return static_cast<int>(t.rows()); }
  int omega() const { return static_cast<int>(t.cols()); }
};

StructureMatrices structure_matrices(const CayleyBasis& basis, const GramModel& model);

/// (I - ζ frak_v)^{-1} by a dense pivoted solve.
CMatrix resolvent_section(const StructureMatrices& sm, const Complex& zeta);

/// Δ(z) with Δ(j, k) = Γ_{k+N,j+N} - iΓ_{k,j+N} + zΓ_{k+N,j} + (z² - iz + 1)Γ_{k,j}.
CMatrix phi_delta(const MomentSequence& seq, const Complex& z);

/// (z - i)/(z + i).
Complex cayley_zeta(const Complex& z);

struct NevanlinnaCoefficients {
  Complex z;
  Complex zeta;
  CMatrix a;  // N×N
  CMatrix b;  // N×ω̂
  CMatrix c;  // δ̂×ω̂
  CMatrix d;  // δ̂×N
  int section_size = 0;
  int tau = 0;
  unsigned precision_bits = kDefaultPrecisionBits;
};

inline constexpr double kDefaultPoleEps = 1e-8;

/// Evaluates 𝐀, 𝐁, 𝐂, 𝐃 at z in the open upper half-plane away from i.
NevanlinnaCoefficients coefficients(const StructureMatrices& sm, const MomentSequence& seq,
                                    const Complex& z, double pole_eps = kDefaultPoleEps);

/// Leading τ̂×τ̂ block of the inverse of [[A0, -ζWF], [C0, I - ζTF]] in
/// double precision, assembled from the closed-form Schur-complement
/// expression rather than a full inversion.
Eigen::MatrixXcd schur_leading_block(const StructureMatrices& sm, std::complex<double> zeta,
                                     const Eigen::MatrixXcd& f);

}  // namespace hmp
