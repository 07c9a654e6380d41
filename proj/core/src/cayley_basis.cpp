#include "hmp/cayley_basis.hpp"

#include <algorithm>
#include <cmath>

#include "hmp/error.hpp"

namespace hmp {

namespace {

CMatrix as_columns(const std::vector<CVector>& vs, Eigen::Index rows) {
  CMatrix out(rows, static_cast<Eigen::Index>(vs.size()));
  for (std::size_t k = 0; k < vs.size(); ++k) out.col(static_cast<Eigen::Index>(k)) = vs[k];
  return out;
}

// Removes the components along every vector in `basis`, twice.
void project_out(CVector& w, const std::vector<CVector>& basis) {
  for (int pass = 0; pass < 2; ++pass)
    for (const CVector& q : basis) w -= q * inner(w, q);
}

// Gram–Schmidt of x_0..x_{N-1} against `basis`; the survivors are appended
// to a fresh family that is also kept orthogonal to itself.
CMatrix complete_basis(const GramModel& model, const std::vector<CVector>& basis,
                       const Real& tol) {
  std::vector<CVector> span = basis;
  std::vector<CVector> extra;
  const int n_gen = std::min(model.block_size(), model.section_size());
  for (int n = 0; n < n_gen; ++n) {
    CVector w = model.coords().col(n);
    const Real original = vector_norm(w);
    if (original == 0) continue;
    project_out(w, span);
    const Real rest = vector_norm(w);
    if (rest <= tol * original) continue;
    w /= rest;
    span.push_back(w);
    extra.push_back(std::move(w));
  }
  return as_columns(extra, model.rank());
}

}  // namespace

CayleyBasis orthogonalize(const GramModel& model, std::optional<double> deflate_tol) {
  if (model.empty()) fail(ErrorCode::kEmptyModel, "the model space is {0}");
  PrecisionScope scope(model.precision_bits());

  const int n_block = model.block_size();
  const int m = model.section_size();
  const int count = std::max(0, m - n_block);
  const Eigen::Index r = model.rank();
  const CMatrix& x = model.coords();

  CayleyBasis basis;
  basis.section_size = m;
  basis.block_size = n_block;
  basis.precision_bits = model.precision_bits();
  basis.deflate_tol = deflate_tol ? Real(*deflate_tol)
                                  : precision_tolerance(model.precision_bits(), 3.0);

  const Complex i_unit = imag_unit();
  std::vector<CVector> us;
  std::vector<CVector> xi_rows;
  for (int j = 0; j < count; ++j) {
    CVector w = x.col(j + n_block) - x.col(j) * i_unit;
    const Real original = vector_norm(w);
    if (original == 0) continue;
    CVector c = CVector::Zero(count);
    c(j) = Complex(1);
    for (int pass = 0; pass < 2; ++pass)
      for (std::size_t l = 0; l < us.size(); ++l) {
        const Complex h = inner(w, us[l]);
        w -= us[l] * h;
        c -= xi_rows[l] * h;
      }
    const Real rest = vector_norm(w);
    if (rest <= basis.deflate_tol * original) continue;
    const Real scale = Real(1) / rest;
    us.push_back(w * scale);
    xi_rows.push_back(c * scale);
    basis.source_index.push_back(j);
    if (j < n_block) ++basis.rho;
  }

  const int tau = static_cast<int>(us.size());
  basis.u = as_columns(us, r);
  basis.xi.resize(tau, count);
  for (int k = 0; k < tau; ++k) basis.xi.row(k) = xi_rows[k].transpose();

  CMatrix y_plus(r, count);
  for (int j = 0; j < count; ++j) y_plus.col(j) = x.col(j + n_block) + x.col(j) * i_unit;
  basis.v = y_plus * basis.xi.transpose();

  std::vector<CVector> vs;
  vs.reserve(static_cast<std::size_t>(tau));
  for (int k = 0; k < tau; ++k) vs.push_back(basis.v.col(k));

  basis.u_prime = complete_basis(model, us, basis.deflate_tol);
  basis.v_prime = complete_basis(model, vs, basis.deflate_tol);
  return basis;
}

Real determinacy_residual(const CayleyBasis& basis, const GramModel& model, Side side, int n) {
  const int n_block = model.block_size();
  if (n < 0 || n >= n_block || n >= model.section_size())
    fail(ErrorCode::kIndexOutOfRange, "residual index must be below the block size");
  PrecisionScope scope(model.precision_bits());
  const CMatrix& g = model.gamma();
  const int count = static_cast<int>(basis.xi.cols());
  const Complex i_unit = side == Side::kA ? imag_unit() : -imag_unit();

  CVector against(count);
  for (int j = 0; j < count; ++j) against(j) = g(n, j + n_block) + g(n, j) * i_unit;

  Real parseval(0);
  for (int k = 0; k < basis.tau(); ++k) {
    Complex s(0);
    const int last = basis.source_index[k];
    for (int j = 0; j <= last; ++j) s += conj(basis.xi(k, j)) * against(j);
    parseval += abs2(s);
  }
  return real(g(n, n)) - parseval;
}

std::string_view to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::kDeterminate: return "determinate";
    case Verdict::kIndeterminate: return "indeterminate";
    case Verdict::kInconclusive: return "inconclusive";
  }
  return "inconclusive";
}

std::vector<int> section_schedule(const MomentSequence& seq, int initial, int max) {
  if (initial < 1) fail(ErrorCode::kInvalidArgument, "initial section must be positive");
  const int cap = std::min(max, seq.max_section());
  std::vector<int> sizes;
  for (int s = initial; s <= cap; s *= 2) sizes.push_back(s);
  if (sizes.empty() && cap >= 1) sizes.push_back(cap);
  return sizes;
}

namespace {

SectionEvidence gather(const MomentSequence& seq, int m, const DeterminacyPolicy& policy,
                       double theta) {
  const GramModel model = embed(seq, m, policy.embed);
  SectionEvidence ev;
  ev.section_size = m;
  ev.rank = model.rank();
  ev.discarded_eigenvalue = model.discarded_eigenvalue();
  ev.precision_limited =
      ev.discarded_eigenvalue > to_double(precision_tolerance(seq.precision_bits(), 4.0 / 3.0));
  const int n_block = std::min(seq.block_size(), m);
  ev.residual_a.assign(static_cast<std::size_t>(n_block), 0.0);
  ev.residual_b.assign(static_cast<std::size_t>(n_block), 0.0);
  if (model.empty()) return ev;

  const CayleyBasis basis = orthogonalize(model, policy.deflate_tol);
  ev.tau = basis.tau();
  ev.delta = basis.delta();
  ev.omega = basis.omega();
  ev.rho = basis.rho;
  for (int n = 0; n < n_block; ++n) {
    const Real diag = real(model.gamma()(n, n));
    if (diag <= 0) continue;
    ev.residual_a[n] = to_double(determinacy_residual(basis, model, Side::kA, n) / diag);
    ev.residual_b[n] = to_double(determinacy_residual(basis, model, Side::kB, n) / diag);
  }
  ev.witness_a = *std::max_element(ev.residual_a.begin(), ev.residual_a.end());
  ev.witness_b = *std::max_element(ev.residual_b.begin(), ev.residual_b.end());
  const double lowest = std::min(*std::min_element(ev.residual_a.begin(), ev.residual_a.end()),
                                 *std::min_element(ev.residual_b.begin(), ev.residual_b.end()));
  if (lowest < -theta) ev.precision_limited = true;
  return ev;
}

bool side_vanishes(const std::vector<SectionEvidence>& h, bool side_a, double theta,
                   double floor) {
  const SectionEvidence& last = h.back();
  const std::vector<double>& res = side_a ? last.residual_a : last.residual_b;
  const double w = side_a ? last.witness_a : last.witness_b;
  for (double v : res)
    if (!(v < theta)) return false;
  if (w <= floor) return true;
  if (h.size() < 2) return false;
  const SectionEvidence& prev = h[h.size() - 2];
  return w < (side_a ? prev.witness_a : prev.witness_b);
}

bool side_stabilized(const std::vector<SectionEvidence>& h, bool side_a, double theta,
                     double tol) {
  if (h.size() < 3) return false;
  for (std::size_t i = h.size() - 3; i < h.size(); ++i) {
    const double w = side_a ? h[i].witness_a : h[i].witness_b;
    if (!(w > theta) || h[i].precision_limited) return false;
  }
  for (std::size_t i = h.size() - 2; i < h.size(); ++i) {
    const double now = side_a ? h[i].witness_a : h[i].witness_b;
    const double before = side_a ? h[i - 1].witness_a : h[i - 1].witness_b;
    if (std::abs(now - before) > tol * std::abs(now)) return false;
  }
  return true;
}

}  // namespace

DeterminacyVerdict classify_determinacy(const MomentSequence& seq,
                                        const DeterminacyPolicy& policy) {
  PrecisionScope scope(seq.precision_bits());
  DeterminacyVerdict out;
  const double theta =
      policy.theta.value_or(std::max(1e-6, to_double(precision_tolerance(seq.precision_bits(), 4.0))));
  out.threshold = theta;

  if (seq.is_zero()) {
    out.verdict = Verdict::kDeterminate;
    out.zero_sequence = true;
    out.reason = "all moments vanish; the zero measure is the only solution";
    return out;
  }

  const std::vector<int> schedule =
      section_schedule(seq, policy.initial_section, policy.max_section);
  if (schedule.empty()) fail(ErrorCode::kInsufficientMoments, "no feasible section size");
  for (int m : schedule) out.history.push_back(gather(seq, m, policy, theta));

  const SectionEvidence& last = out.history.back();
  out.side_a_residuals = last.residual_a;
  out.side_b_residuals = last.residual_b;
  if (last.precision_limited) {
    out.verdict = Verdict::kInconclusive;
    out.reason = "section " + std::to_string(last.section_size) +
                 " is limited by the working precision (rank cut inside a continuing "
                 "spectrum); raise the precision";
    return out;
  }

  const double floor = to_double(precision_tolerance(seq.precision_bits(), 2.0));
  const bool a_vanishes = side_vanishes(out.history, true, theta, floor);
  const bool b_vanishes = side_vanishes(out.history, false, theta, floor);
  if (a_vanishes || b_vanishes) {
    out.verdict = Verdict::kDeterminate;
    out.reason = std::string("Parseval identity holds on side ") + (a_vanishes ? "a" : "b") +
                 " at section " + std::to_string(last.section_size);
    return out;
  }
  if (side_stabilized(out.history, true, theta, policy.stabilization_tol) &&
      side_stabilized(out.history, false, theta, policy.stabilization_tol)) {
    out.verdict = Verdict::kIndeterminate;
    out.reason = "residuals on both sides stabilized above the threshold over two doublings";
    return out;
  }
  out.verdict = Verdict::kInconclusive;
  out.reason =
      "residuals neither fell below the threshold nor stabilized; raise the precision "
      "or the maximum section size";
  return out;
}

AtomicMatrixMeasure unique_solution_atoms(const GramModel& model, const CayleyBasis& basis) {
  if (model.empty()) fail(ErrorCode::kEmptyModel, "the model space is {0}");
  if (basis.delta() != 0 || basis.omega() != 0)
    fail(ErrorCode::kNotFiniteRank,
         "the section still has defect (" + std::to_string(basis.delta()) + ", " +
             std::to_string(basis.omega()) + "); no finite-rank self-adjoint shift");
  PrecisionScope scope(model.precision_bits());

  const Eigen::Index r = model.rank();
  const CMatrix identity = CMatrix::Identity(r, r);
  const CMatrix cayley = basis.v * basis.u.adjoint();
  Eigen::PartialPivLU<CMatrix> lu(cayley - identity);
  if (lu.rcond() <= precision_tolerance(model.precision_bits(), 1.0))
    fail(ErrorCode::kSingularResolvent, "Cayley transform has eigenvalue 1");
  CMatrix shift = (cayley + identity) * lu.inverse() * imag_unit();
  shift = (shift + CMatrix(shift.adjoint())) * Real(0.5);

  const HermitianEigen eig = hermitian_eigen(shift);
  const int n_block = model.block_size();
  const CMatrix coeff = eig.vectors.adjoint() * model.coords().leftCols(n_block);

  Real biggest(1);
  for (Eigen::Index s = 0; s < r; ++s) biggest = max(biggest, abs(eig.values(s)));
  const Real merge = precision_tolerance(model.precision_bits(), 3.0) * biggest;

  AtomicMatrixMeasure out;
  out.block_size = n_block;
  for (Eigen::Index s = 0; s < r; ++s) {
    CMatrix w(n_block, n_block);
    for (int k = 0; k < n_block; ++k)
      for (int j = 0; j < n_block; ++j) w(k, j) = coeff(s, k) * conj(coeff(s, j));
    if (!out.atoms.empty() && eig.values(s) - out.atoms.back() <= merge) {
      out.weights.back() += w;
      continue;
    }
    out.atoms.push_back(eig.values(s));
    out.weights.push_back(std::move(w));
  }
  return out;
}

}  // namespace hmp
