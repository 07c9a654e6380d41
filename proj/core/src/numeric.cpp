#include "hmp/numeric.hpp"

#include <algorithm>
#include <cmath>

#include <mpfr.h>

namespace hmp {

unsigned digits10_for_bits(unsigned bits) {
  return static_cast<unsigned>(std::ceil(bits * std::log10(2.0)));
}

unsigned current_precision_bits() {
  const Real probe(0);
  return static_cast<unsigned>(mpfr_get_prec(probe.backend().data()));
}

PrecisionScope::PrecisionScope(unsigned bits) {
  saved_digits10_ = Real::default_precision();
  const unsigned wanted = digits10_for_bits(bits);
  if (wanted != saved_digits10_) {
    Real::default_precision(wanted);
    changed_ = true;
  }
}

PrecisionScope::~PrecisionScope() {
  if (changed_) Real::default_precision(saved_digits10_);
}

Real precision_tolerance(unsigned bits, double divisor) {
  return pow(Real(2), -Real(static_cast<double>(bits) / divisor));
}

Real rounded(const Real& x) {
  Real out;
  mpfr_set(out.backend().data(), x.backend().data(), MPFR_RNDN);
  return out;
}

Complex rounded(const Complex& z) { return Complex(rounded(real(z)), rounded(imag(z))); }

CMatrix rounded(const CMatrix& m) {
  CMatrix out(m.rows(), m.cols());
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i) out(i, j) = rounded(m(i, j));
  return out;
}

std::string decimal_string(const Real& x, unsigned bits) {
  const auto held = static_cast<unsigned>(mpfr_get_prec(x.backend().data()));
  return x.str(static_cast<std::streamsize>(digits10_for_bits(std::max(bits, held)) + 1),
               std::ios_base::fmtflags(0));
}

Eigen::MatrixXcd to_double(const CMatrix& m) {
  Eigen::MatrixXcd out(m.rows(), m.cols());
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i) out(i, j) = to_std(m(i, j));
  return out;
}

CMatrix from_double(const Eigen::MatrixXcd& m) {
  CMatrix out(m.rows(), m.cols());
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      out(i, j) = make_complex(m(i, j).real(), m(i, j).imag());
  return out;
}

Complex inner(const CVector& a, const CVector& b) {
  Complex acc(0);
  for (Eigen::Index i = 0; i < a.size(); ++i) acc += a(i) * conj(b(i));
  return acc;
}

Real vector_norm(const CVector& a) {
  Real acc(0);
  for (Eigen::Index i = 0; i < a.size(); ++i) acc += abs2(a(i));
  return sqrt(acc);
}

Real max_abs(const CMatrix& m) {
  Real best(0);
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      const Real a = abs(m(i, j));
      if (a > best) best = a;
    }
  return best;
}

Real frobenius_norm(const CMatrix& m) {
  Real acc(0);
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i) acc += abs2(m(i, j));
  return sqrt(acc);
}

CMatrix imaginary_part(const CMatrix& s) {
  const Complex half_over_i = make_complex(0.0, -0.5);
  CMatrix out(s.rows(), s.cols());
  for (Eigen::Index j = 0; j < s.cols(); ++j)
    for (Eigen::Index i = 0; i < s.rows(); ++i)
      out(i, j) = (s(i, j) - conj(s(j, i))) * half_over_i;
  return out;
}

namespace {

bool is_real(const CMatrix& h) {
  for (Eigen::Index j = 0; j < h.cols(); ++j)
    for (Eigen::Index i = 0; i < h.rows(); ++i)
      if (imag(h(i, j)) != 0) return false;
  return true;
}

}  // namespace

HermitianEigen hermitian_eigen(const CMatrix& h, bool with_vectors) {
  HermitianEigen out;
  if (h.rows() == 0) return out;
  const int options = with_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly;
  if (is_real(h)) {
    RMatrix r(h.rows(), h.cols());
    for (Eigen::Index j = 0; j < h.cols(); ++j)
      for (Eigen::Index i = 0; i < h.rows(); ++i) r(i, j) = real(h(i, j));
    Eigen::SelfAdjointEigenSolver<RMatrix> es(r, options);
    out.values = es.eigenvalues();
    if (with_vectors) out.vectors = es.eigenvectors().cast<Complex>();
  } else {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(h, options);
    out.values = es.eigenvalues();
    if (with_vectors) out.vectors = es.eigenvectors();
  }
  return out;
}

Real min_eigenvalue(const CMatrix& hermitian) {
  if (hermitian.rows() == 0) return Real(0);
  return hermitian_eigen(hermitian, false).values(0);
}

Real spectral_norm(const CMatrix& m) {
  if (m.size() == 0) return Real(0);
  const CMatrix g = m.adjoint() * m;
  const HermitianEigen e = hermitian_eigen(g, false);
  const Real top = e.values(e.values.size() - 1);
  return top > 0 ? sqrt(top) : Real(0);
}

}  // namespace hmp
