#pragma once

// Reference constructions used to certify the pipeline. Nothing here calls
// the embedding, orthogonalization or coefficient code; densities are
// integrated in double precision with adaptive Gauss–Kronrod quadrature.

#include <complex>
#include <cstdint>
#include <functional>
#include <utility>

#include "hmp/measure.hpp"
#include "hmp/moments.hpp"

namespace hmp::oracle {

/// S_n = Σ_s atoms[s]^n weights[s] for n < count.
MomentSequence atomic_moments(const AtomicMatrixMeasure& m, int count,
                              unsigned precision_bits = kDefaultPrecisionBits);

/// Matrix density on a window. With `log_variable` the window is in
/// u = ln x and the density is still a function of x.
struct DensityMeasure {
  int block_size = 1;
  double lo = 0.0;
  double hi = 0.0;
  bool log_variable = false;
  std::function<Eigen::MatrixXcd(double)> density;
};

DensityMeasure gaussian_density();
/// (2π)^{-1/2} x^{-1} e^{-(ln x)²/2} (1 + ε sin(2π ln x)) on (0, ∞).
DensityMeasure lognormal_density(double epsilon = 0.0);
DensityMeasure zero_density(int block_size = 1);

/// Moments by quadrature, relative target max(2^(-bits/2), 1e-13).
MomentSequence quadrature_moments(const DensityMeasure& d, int count,
                                  unsigned precision_bits = kDefaultPrecisionBits);

/// Closed forms: e^{n²/2} and (n-1)!! (zero for odd n).
MomentSequence lognormal_moments(int count, unsigned precision_bits = kDefaultPrecisionBits);
MomentSequence gaussian_moments(int count, unsigned precision_bits = kDefaultPrecisionBits);

CMatrix direct_transform(const AtomicMatrixMeasure& m, const Complex& z);
Eigen::MatrixXcd direct_transform(const DensityMeasure& d, std::complex<double> z);

/// The lognormal density and its sine perturbation; both share every moment.
std::pair<DensityMeasure, DensityMeasure> lognormal_pair(double epsilon);

enum class CarlemanHint { kSuggestsDeterminate, kNoInformation };

/// Heuristic on a_n = (tr S_{2n})^{-1/(2n)}: suggests determinacy when the
/// last term still carries at least a quarter of the running mean, i.e.
/// K·a_K ≥ Σ_{n≤K} a_n / 4. A vanishing even trace also suggests it.
CarlemanHint carleman_hint(const MomentSequence& seq);

MomentSequence block_diagonal(const MomentSequence& a, const MomentSequence& b);

/// Atoms in [-2, 2] at least 0.25 apart, weights B B^* with Gaussian B.
AtomicMatrixMeasure random_atomic_measure(std::uint64_t seed, int block_size, int atoms);

}  // namespace hmp::oracle
