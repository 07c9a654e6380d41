#include "hmp/nevanlinna.hpp"

#include "hmp/error.hpp"

namespace hmp {

namespace {

// Solves (I - ζH) X = B for upper Hessenberg H with adjacent-row pivoting.
CMatrix hessenberg_solve(const CMatrix& h, const Complex& zeta, CMatrix b) {
  const Eigen::Index n = h.rows();
  CMatrix a = -zeta * h;
  for (Eigen::Index i = 0; i < n; ++i) a(i, i) += Complex(1);

  for (Eigen::Index k = 0; k + 1 < n; ++k) {
    if (abs2(a(k + 1, k)) > abs2(a(k, k))) {
      for (Eigen::Index c = k; c < n; ++c) std::swap(a(k, c), a(k + 1, c));
      b.row(k).swap(b.row(k + 1));
    }
    if (a(k, k) == Complex(0))
      fail(ErrorCode::kSingularResolvent, "I - ζ𝔙 is singular");
    const Complex mult = a(k + 1, k) / a(k, k);
    if (mult == Complex(0)) continue;
    for (Eigen::Index c = k + 1; c < n; ++c) a(k + 1, c) -= mult * a(k, c);
    b.row(k + 1) -= mult * b.row(k);
  }
  for (Eigen::Index k = n - 1; k >= 0; --k) {
    if (a(k, k) == Complex(0))
      fail(ErrorCode::kSingularResolvent, "I - ζ𝔙 is singular");
    for (Eigen::Index c = k + 1; c < n; ++c) b.row(k) -= a(k, c) * b.row(c);
    b.row(k) /= a(k, k);
  }
  return b;
}

void check_point(const Complex& z, double pole_eps) {
  if (!(imag(z) > 0))
    fail(ErrorCode::kLowerHalfPlane, "z = " + decimal_string(real(z), 53) + " + " +
                                         decimal_string(imag(z), 53) +
                                         "i is not in the open upper half-plane");
  if (abs(z - imag_unit()) < pole_eps)
    fail(ErrorCode::kExcludedPoint, "z lies within the excluded disc around i");
}

}  // namespace

StructureMatrices structure_matrices(const CayleyBasis& basis, const GramModel& model) {
  if (basis.delta() == 0 || basis.omega() == 0)
    fail(ErrorCode::kDeterminateInput,
         "defect numbers (" + std::to_string(basis.delta()) + ", " +
             std::to_string(basis.omega()) + "): no family of solutions to parametrize");
  const int n_block = model.block_size();
  if (model.section_size() < 2 * n_block)
    fail(ErrorCode::kInsufficientMoments, "section must hold x_0..x_{2N-1}");
  PrecisionScope scope(model.precision_bits());

  StructureMatrices sm;
  sm.rho = basis.rho;
  sm.block_size = n_block;
  sm.section_size = model.section_size();
  sm.precision_bits = model.precision_bits();

  const CMatrix u_adj = basis.u.adjoint();
  sm.frak_v = u_adj * basis.v;
  sm.w = u_adj * basis.v_prime;
  sm.t = basis.u_prime.adjoint() * basis.v_prime;
  sm.c0_generator = basis.u_prime.adjoint() * basis.v;

  const CMatrix& x = model.coords();
  CMatrix y_minus(model.rank(), n_block);
  for (int n = 0; n < n_block; ++n)
    y_minus.col(n) = x.col(n + n_block) - x.col(n) * imag_unit();
  sm.k = u_adj.topRows(sm.rho) * y_minus;

  const Eigen::Index tau = sm.frak_v.rows();
  CMatrix q;
  if (tau <= 2) {
    q = CMatrix::Identity(tau, tau);
    sm.hessenberg = sm.frak_v;
  } else {
    Eigen::HessenbergDecomposition<CMatrix> hd(sm.frak_v);
    q = hd.matrixQ();
    sm.hessenberg = hd.matrixH();
  }
  CMatrix lead = CMatrix::Zero(tau, n_block);
  lead.topRows(sm.rho) = sm.k;
  const CMatrix q_adj = q.adjoint();
  sm.q_lead = q_adj * lead;
  sm.q_w = q_adj * sm.w;
  sm.c0_q = sm.c0_generator * q;
  return sm;
}

CMatrix resolvent_section(const StructureMatrices& sm, const Complex& zeta) {
  PrecisionScope scope(sm.precision_bits);
  if (!(abs(zeta) < 1)) fail(ErrorCode::kInvalidArgument, "|ζ| must be below 1");
  const Eigen::Index tau = sm.tau();
  const CMatrix identity = CMatrix::Identity(tau, tau);
  Eigen::PartialPivLU<CMatrix> lu(identity - zeta * sm.frak_v);
  if (lu.rcond() <= precision_tolerance(sm.precision_bits, 1.0))
    fail(ErrorCode::kSingularResolvent, "I - ζ𝔙 is singular");
  return lu.solve(identity);
}

Complex cayley_zeta(const Complex& z) {
  const Complex i_unit = imag_unit();
  return (z - i_unit) / (z + i_unit);
}

CMatrix phi_delta(const MomentSequence& seq, const Complex& z_in) {
  const int n = seq.block_size();
  if (seq.size() < 3) fail(ErrorCode::kInsufficientMoments, "Δ(z) needs S_0, S_1 and S_2");
  PrecisionScope scope(seq.precision_bits());
  const Complex z = rounded(z_in);
  const Complex i_unit = imag_unit();
  const Complex quad = z * z - i_unit * z + Complex(1);
  CMatrix delta(n, n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      delta(j, k) = hankel_entry(seq, k + n, j + n) - i_unit * hankel_entry(seq, k, j + n) +
                    z * hankel_entry(seq, k + n, j) + quad * hankel_entry(seq, k, j);
  return delta;
}

NevanlinnaCoefficients coefficients(const StructureMatrices& sm, const MomentSequence& seq,
                                    const Complex& z_in, double pole_eps) {
  PrecisionScope scope(sm.precision_bits);
  const Complex z = rounded(z_in);
  check_point(z, pole_eps);
  const Complex i_unit = imag_unit();
  const Complex zeta = cayley_zeta(z);
  const Eigen::Index n = sm.block_size;
  const Eigen::Index omega = sm.omega();

  CMatrix rhs(sm.tau(), n + omega);
  rhs << sm.q_lead, sm.q_w;
  const CMatrix sol = hessenberg_solve(sm.hessenberg, zeta, std::move(rhs));
  const CMatrix x_lead = sol.leftCols(n);
  const CMatrix x_w = sol.rightCols(omega);
  const CMatrix lead_adj = sm.q_lead.adjoint();

  NevanlinnaCoefficients out;
  out.z = z;
  out.zeta = zeta;
  out.section_size = sm.section_size;
  out.tau = sm.tau();
  out.precision_bits = sm.precision_bits;
  const Complex two_i = i_unit * Real(2);
  out.a = two_i * (lead_adj * x_lead) - (z + i_unit) * phi_delta(seq, z);
  out.b = -two_i * zeta * (lead_adj * x_w);
  out.c = zeta * (-zeta * (sm.c0_q * x_w) - sm.t);
  out.d = -zeta * (sm.c0_q * x_lead);
  return out;
}

Eigen::MatrixXcd schur_leading_block(const StructureMatrices& sm, std::complex<double> zeta,
                                     const Eigen::MatrixXcd& f) {
  if (f.rows() != sm.omega() || f.cols() != sm.delta())
    fail(ErrorCode::kInvalidArgument, "F must be ω̂×δ̂");
  const Eigen::MatrixXcd v = to_double(sm.frak_v);
  const Eigen::MatrixXcd w = to_double(sm.w);
  const Eigen::MatrixXcd t = to_double(sm.t);
  const Eigen::MatrixXcd c0 = -zeta * to_double(sm.c0_generator);
  const Eigen::Index tau = v.rows();
  const Eigen::Index delta = t.rows();

  const Eigen::MatrixXcd r =
      (Eigen::MatrixXcd::Identity(tau, tau) - zeta * v).partialPivLu().inverse();
  const Eigen::MatrixXcd rwf = r * w * f;
  const Eigen::MatrixXcd inner_block =
      Eigen::MatrixXcd::Identity(delta, delta) - zeta * t * f + zeta * c0 * rwf;
  return r - zeta * rwf * inner_block.partialPivLu().solve(c0 * r);
}

}  // namespace hmp
