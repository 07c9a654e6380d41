#include "hmp/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "hmp/error.hpp"

namespace hmp::oracle {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr unsigned kMaxDepth = 20;

double quadrature_tol(unsigned bits) {
  return std::max(1e-13, std::ldexp(1.0, -static_cast<int>(bits / 2)));
}

// Integrates g over the density's window, in u = ln x when requested;
// g receives x and the density value there.
template <typename G>
double integrate(const DensityMeasure& d, double tol, G g) {
  using boost::math::quadrature::gauss_kronrod;
  double err = 0.0;
  double l1 = 0.0;
  double value = 0.0;
  if (d.log_variable) {
    auto f = [&](double u) {
      const double x = std::exp(u);
      return g(x) * x;
    };
    value = gauss_kronrod<double, 61>::integrate(f, d.lo, d.hi, kMaxDepth, tol, &err, &l1);
  } else {
    value = gauss_kronrod<double, 61>::integrate(g, d.lo, d.hi, kMaxDepth, tol, &err, &l1);
  }
  if (!std::isfinite(value) || err > 100.0 * tol * std::max(l1, 1e-300))
    fail(ErrorCode::kQuadratureNonconvergent,
         "adaptive quadrature missed its target (estimated error " + std::to_string(err) + ")");
  return value;
}

// x^k v, with underflowed tails kept at zero where x^k overflows.
double power_weighted(double x, int k, double v) { return v == 0.0 ? 0.0 : std::pow(x, k) * v; }

Real pow_int(const Real& base, int n) {
  Real acc(1);
  for (int k = 0; k < n; ++k) acc *= base;
  return acc;
}

}  // namespace

MomentSequence atomic_moments(const AtomicMatrixMeasure& m, int count, unsigned precision_bits) {
  if (count < 2) fail(ErrorCode::kInsufficientMoments, "need at least two moments");
  PrecisionScope scope(precision_bits);
  const int n = m.block_size;
  std::vector<CMatrix> moments;
  moments.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    CMatrix s = CMatrix::Zero(n, n);
    for (std::size_t a = 0; a < m.atoms.size(); ++a) {
      const Real p = pow_int(rounded(m.atoms[a]), k);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) s(i, j) += rounded(m.weights[a](i, j)) * p;
    }
    moments.push_back(std::move(s));
  }
  return MomentSequence::create(n, std::move(moments), precision_bits);
}

DensityMeasure gaussian_density() {
  DensityMeasure d;
  d.lo = -40.0;
  d.hi = 40.0;
  d.density = [](double x) {
    Eigen::MatrixXcd v(1, 1);
    v(0, 0) = std::exp(-0.5 * x * x) / std::sqrt(2.0 * kPi);
    return v;
  };
  return d;
}

DensityMeasure lognormal_density(double epsilon) {
  DensityMeasure d;
  d.lo = -40.0;
  d.hi = 64.0;
  d.log_variable = true;
  d.density = [epsilon](double x) {
    const double u = std::log(x);
    Eigen::MatrixXcd v(1, 1);
    v(0, 0) = std::exp(-0.5 * u * u) / (x * std::sqrt(2.0 * kPi)) *
              (1.0 + epsilon * std::sin(2.0 * kPi * u));
    return v;
  };
  return d;
}

DensityMeasure zero_density(int block_size) {
  DensityMeasure d;
  d.block_size = block_size;
  d.lo = -1.0;
  d.hi = 1.0;
  d.density = [block_size](double) { return Eigen::MatrixXcd::Zero(block_size, block_size).eval(); };
  return d;
}

MomentSequence quadrature_moments(const DensityMeasure& d, int count, unsigned precision_bits) {
  if (count < 2) fail(ErrorCode::kInsufficientMoments, "need at least two moments");
  const double tol = quadrature_tol(precision_bits);
  const int n = d.block_size;
  std::vector<Eigen::MatrixXcd> values;
  for (int k = 0; k < count; ++k) {
    Eigen::MatrixXcd s(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const double re = integrate(d, tol, [&](double x) {
          return power_weighted(x, k, d.density(x)(i, j).real());
        });
        const double im = integrate(d, tol, [&](double x) {
          return power_weighted(x, k, d.density(x)(i, j).imag());
        });
        s(i, j) = {re, im};
      }
    values.push_back(std::move(s));
  }
  PrecisionScope scope(precision_bits);
  std::vector<CMatrix> moments;
  for (const Eigen::MatrixXcd& s : values) moments.push_back(from_double(s));
  return MomentSequence::create(n, std::move(moments), precision_bits);
}

MomentSequence lognormal_moments(int count, unsigned precision_bits) {
  PrecisionScope scope(precision_bits);
  std::vector<CMatrix> moments;
  for (int k = 0; k < count; ++k) {
    CMatrix s(1, 1);
    s(0, 0) = Complex(exp(Real(k) * Real(k) / 2));
    moments.push_back(std::move(s));
  }
  return MomentSequence::create(1, std::move(moments), precision_bits);
}

MomentSequence gaussian_moments(int count, unsigned precision_bits) {
  PrecisionScope scope(precision_bits);
  std::vector<CMatrix> moments;
  Real double_factorial(1);
  for (int k = 0; k < count; ++k) {
    CMatrix s(1, 1);
    if (k % 2 == 1) {
      s(0, 0) = Complex(0);
    } else {
      if (k >= 2) double_factorial *= Real(k - 1);
      s(0, 0) = Complex(double_factorial);
    }
    moments.push_back(std::move(s));
  }
  return MomentSequence::create(1, std::move(moments), precision_bits);
}

CMatrix direct_transform(const AtomicMatrixMeasure& m, const Complex& z) {
  const int n = m.block_size;
  CMatrix s = CMatrix::Zero(n, n);
  for (std::size_t a = 0; a < m.atoms.size(); ++a) {
    const Complex gap = Complex(m.atoms[a]) - z;
    if (gap == Complex(0)) fail(ErrorCode::kPoleOnSupport, "z coincides with an atom");
    const Complex inv = Complex(1) / gap;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) s(i, j) += m.weights[a](i, j) * inv;
  }
  return s;
}

Eigen::MatrixXcd direct_transform(const DensityMeasure& d, std::complex<double> z) {
  const double x_lo = d.log_variable ? std::exp(d.lo) : d.lo;
  const double x_hi = d.log_variable ? std::exp(d.hi) : d.hi;
  if (z.imag() == 0.0 && z.real() >= x_lo && z.real() <= x_hi)
    fail(ErrorCode::kPoleOnSupport, "z lies on the support of the density");
  const double tol = 1e-12;
  const int n = d.block_size;
  Eigen::MatrixXcd s(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      auto part = [&](bool imag_part) {
        return integrate(d, tol, [&](double x) {
          const std::complex<double> v = d.density(x)(i, j) / (x - z);
          return imag_part ? v.imag() : v.real();
        });
      };
      s(i, j) = {part(false), part(true)};
    }
  return s;
}

std::pair<DensityMeasure, DensityMeasure> lognormal_pair(double epsilon) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0))
    fail(ErrorCode::kInvalidArgument, "perturbation must lie in [0, 1]");
  return {lognormal_density(0.0), lognormal_density(epsilon)};
}

CarlemanHint carleman_hint(const MomentSequence& seq) {
  PrecisionScope scope(seq.precision_bits());
  std::vector<double> terms;
  for (int k = 1; 2 * k < seq.size(); ++k) {
    const Real t = real(seq.moment(2 * k).trace());
    if (t <= 0) return CarlemanHint::kSuggestsDeterminate;
    terms.push_back(to_double(exp(-log(t) / Real(2 * k))));
  }
  if (terms.size() < 3) return CarlemanHint::kNoInformation;
  double partial = 0.0;
  for (double a : terms) partial += a;
  const double k = static_cast<double>(terms.size());
  return k * terms.back() >= 0.25 * partial ? CarlemanHint::kSuggestsDeterminate
                                             : CarlemanHint::kNoInformation;
}

MomentSequence block_diagonal(const MomentSequence& a, const MomentSequence& b) {
  const unsigned bits = std::max(a.precision_bits(), b.precision_bits());
  PrecisionScope scope(bits);
  const int na = a.block_size();
  const int nb = b.block_size();
  const int count = std::min(a.size(), b.size());
  std::vector<CMatrix> moments;
  for (int k = 0; k < count; ++k) {
    CMatrix s = CMatrix::Zero(na + nb, na + nb);
    for (int i = 0; i < na; ++i)
      for (int j = 0; j < na; ++j) s(i, j) = rounded(a.moment(k)(i, j));
    for (int i = 0; i < nb; ++i)
      for (int j = 0; j < nb; ++j) s(na + i, na + j) = rounded(b.moment(k)(i, j));
    moments.push_back(std::move(s));
  }
  return MomentSequence::create(na + nb, std::move(moments), bits);
}

AtomicMatrixMeasure random_atomic_measure(std::uint64_t seed, int block_size, int atoms) {
  if (block_size < 1 || atoms < 1 || atoms > 16)
    fail(ErrorCode::kInvalidArgument, "need 1..16 atoms and a positive block size");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> place(-2.0, 2.0);
  std::normal_distribution<double> gauss(0.0, 1.0);

  std::vector<double> points;
  while (static_cast<int>(points.size()) < atoms) {
    const double p = place(rng);
    const bool clear = std::all_of(points.begin(), points.end(),
                                   [p](double q) { return std::abs(p - q) >= 0.25; });
    if (clear) points.push_back(p);
  }
  std::sort(points.begin(), points.end());

  AtomicMatrixMeasure m;
  m.block_size = block_size;
  for (double p : points) {
    Eigen::MatrixXcd b(block_size, block_size);
    for (int i = 0; i < block_size; ++i)
      for (int j = 0; j < block_size; ++j)
        b(i, j) = {gauss(rng), block_size == 1 ? 0.0 : gauss(rng)};
    const Eigen::MatrixXcd w = b * b.adjoint() / static_cast<double>(block_size);
    m.atoms.push_back(Real(p));
    m.weights.push_back(from_double(w));
  }
  return m;
}

}  // namespace hmp::oracle
