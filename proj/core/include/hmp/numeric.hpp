#pragma once

// Multiprecision scalar types and the small set of dense kernels shared by
// the pipeline modules.
//
// All arithmetic runs on MPFR through Boost.Multiprecision. The working
// precision is the process-wide MPFR default; public operations install it
// from their input with a PrecisionScope. Callers that fan work out over
// threads must keep every thread on the same precision.

#include <complex>
#include <cstddef>
#include <limits>
#include <string>

#include <boost/multiprecision/complex_adaptor.hpp>
#include <boost/multiprecision/mpfr.hpp>
#include <Eigen/Core>

namespace hmp {

namespace bmp = boost::multiprecision;

using Real = bmp::number<bmp::mpfr_float_backend<0>, bmp::et_off>;
using Complex =
    bmp::number<bmp::complex_adaptor<bmp::mpfr_float_backend<0>>, bmp::et_off>;

}  // namespace hmp

namespace Eigen {

template <>
struct NumTraits<hmp::Real> : GenericNumTraits<hmp::Real> {
  using Real = hmp::Real;
  using NonInteger = hmp::Real;
  using Literal = hmp::Real;
  using Nested = hmp::Real;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 8,
    AddCost = 16,
    MulCost = 32
  };
  static Real epsilon() { return std::numeric_limits<Real>::epsilon(); }
  static Real dummy_precision() { return epsilon() * 1024; }
  static Real highest() { return (std::numeric_limits<Real>::max)(); }
  static Real lowest() { return std::numeric_limits<Real>::lowest(); }
  static Real infinity() { return std::numeric_limits<Real>::infinity(); }
  static Real quiet_NaN() { return std::numeric_limits<Real>::quiet_NaN(); }
  static int digits10() { return static_cast<int>(Real::default_precision()); }
};

template <>
struct NumTraits<hmp::Complex> : GenericNumTraits<hmp::Complex> {
  using Real = hmp::Real;
  using NonInteger = hmp::Complex;
  using Literal = hmp::Complex;
  using Nested = hmp::Complex;
  enum {
    IsComplex = 1,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 16,
    AddCost = 32,
    MulCost = 128
  };
  static Real epsilon() { return std::numeric_limits<Real>::epsilon(); }
  static Real dummy_precision() { return epsilon() * 1024; }
  static hmp::Complex highest() { return hmp::Complex((std::numeric_limits<Real>::max)()); }
  static hmp::Complex lowest() { return hmp::Complex(std::numeric_limits<Real>::lowest()); }
  static Real infinity() { return std::numeric_limits<Real>::infinity(); }
  static Real quiet_NaN() { return std::numeric_limits<Real>::quiet_NaN(); }
  static int digits10() { return static_cast<int>(Real::default_precision()); }
};

template <typename BinaryOp>
struct ScalarBinaryOpTraits<hmp::Real, hmp::Complex, BinaryOp> {
  using ReturnType = hmp::Complex;
};
template <typename BinaryOp>
struct ScalarBinaryOpTraits<hmp::Complex, hmp::Real, BinaryOp> {
  using ReturnType = hmp::Complex;
};

}  // namespace Eigen

#include <Eigen/Dense>

namespace hmp {

using CMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>;
using CVector = Eigen::Matrix<Complex, Eigen::Dynamic, 1>;
using RMatrix = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
using RVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

inline constexpr unsigned kDefaultPrecisionBits = 53;

/// Decimal digits handed to MPFR so that at least `bits` significand bits
/// are allocated.
unsigned digits10_for_bits(unsigned bits);

/// Significand bits of a freshly constructed Real at the current default.
unsigned current_precision_bits();

/// Sets the MPFR default precision for the lifetime of the scope and
/// restores the previous value afterwards. Does not write when the requested
/// precision is already in effect, so nested scopes on worker threads that
/// share one precision do not race.
class PrecisionScope {
 public:
  explicit PrecisionScope(unsigned bits);
  ~PrecisionScope();
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

 private:
  unsigned saved_digits10_ = 0;
  bool changed_ = false;
};

/// 2^(-bits/divisor); the shape of every precision-scaled default tolerance.
Real precision_tolerance(unsigned bits, double divisor);

inline Complex make_complex(const Real& re, const Real& im = Real(0)) {
  return Complex(re, im);
}
inline Complex make_complex(double re, double im = 0.0) {
  return Complex(Real(re), Real(im));
}
inline Complex imag_unit() { return Complex(Real(0), Real(1)); }

/// Copies carry their source precision; these re-round to the current default.
Real rounded(const Real& x);
Complex rounded(const Complex& z);
CMatrix rounded(const CMatrix& m);

/// Decimal string with enough digits to round-trip at `bits` significand bits.
std::string decimal_string(const Real& x, unsigned bits);

inline double to_double(const Real& x) { return x.convert_to<double>(); }
inline std::complex<double> to_std(const Complex& z) {
  return {to_double(real(z)), to_double(imag(z))};
}
Eigen::MatrixXcd to_double(const CMatrix& m);
CMatrix from_double(const Eigen::MatrixXcd& m);

inline Real max(const Real& a, const Real& b) { return a < b ? b : a; }
inline Real min(const Real& a, const Real& b) { return b < a ? b : a; }

inline Real abs2(const Complex& z) {
  const Real re = real(z);
  const Real im = imag(z);
  return re * re + im * im;
}

/// <a, b> = sum_i a_i conj(b_i): linear in the first slot.
Complex inner(const CVector& a, const CVector& b);
Real vector_norm(const CVector& a);

Real max_abs(const CMatrix& m);
Real frobenius_norm(const CMatrix& m);

/// (S - S^*) / (2i), the Hermitian imaginary part.
CMatrix imaginary_part(const CMatrix& s);

struct HermitianEigen {
  RVector values;   // ascending
  CMatrix vectors;  // columns, empty when not requested
};

/// Eigen-decomposition of a Hermitian matrix. Takes the real symmetric path
/// when every imaginary part is exactly zero.
HermitianEigen hermitian_eigen(const CMatrix& h, bool with_vectors = true);

Real min_eigenvalue(const CMatrix& hermitian);
Real spectral_norm(const CMatrix& m);

}  // namespace hmp
