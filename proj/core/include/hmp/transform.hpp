#pragma once

#include <complex>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "hmp/cayley_basis.hpp"
#include "hmp/measure.hpp"
#include "hmp/moments.hpp"
#include "hmp/nevanlinna.hpp"

namespace hmp {

/// Contraction-valued parameter F(z) with values ω̂×δ̂.
///
/// Analyticity of an evaluator is the caller's obligation; the contraction
/// bound is checked on every evaluation.
class SchurParameter {
 public:
  enum class Kind { kZero, kScalar, kConstant, kMoebius, kEvaluator };
  using Evaluator = std::function<CMatrix(const Complex& z, int rows, int cols)>;

  static SchurParameter zero();
  /// c times the rectangular identity.
  static SchurParameter scalar(std::complex<double> c);
  static SchurParameter constant(CMatrix value);
  /// c·(z - a)/(z - conj(a)) times the rectangular identity; |c| <= 1, Im a > 0.
  static SchurParameter moebius(std::complex<double> c, std::complex<double> a);
  static SchurParameter evaluator(Evaluator fn);

  Kind kind() const { return kind_; }

  /// F(z) as an rows×cols matrix. Raises contraction-violated when the
  /// largest singular value exceeds 1 + 1e-12 and invalid-argument on a
  /// shape mismatch.
  CMatrix value(const Complex& z, int rows, int cols) const;

 private:
  Kind kind_ = Kind::kZero;
  std::complex<double> c_{0.0, 0.0};
  std::complex<double> a_{0.0, 1.0};
  CMatrix constant_;
  Evaluator fn_;
};

struct TransformSample {
  Complex z;
  CMatrix s;               // ∫ dM(λ)/(λ - z), N×N
  double herglotz_margin;  // λ_min of (S - S^*)/(2i)
};

/// S = G^T with G = [𝐀 + 𝐁F(I + 𝐂F)^{-1}𝐃]/(z² + 1)².
TransformSample evaluate_transform(const NevanlinnaCoefficients& coeffs, const SchurParameter& f);

inline constexpr double kDefaultHerglotzEps = 1e-8;

struct HerglotzReport {
  double min_margin = std::numeric_limits<double>::infinity();
  std::complex<double> worst_z;
  std::vector<double> margins;
  bool pass = true;
};

HerglotzReport herglotz_scan(const std::vector<TransformSample>& samples,
                             double eps = kDefaultHerglotzEps);
HerglotzReport herglotz_scan(const std::vector<NevanlinnaCoefficients>& coeffs,
                             const SchurParameter& f, double eps = kDefaultHerglotzEps);

/// Double-precision view of a Stieltjes transform, z -> N×N.
using TransformSampler = std::function<Eigen::MatrixXcd(std::complex<double>)>;

struct InversionOptions {
  double epsilon = 1e-3;
  /// Grid step; defaults to 1e-4·(b - a).
  std::optional<double> step;
  int threads = 1;
};

struct InversionResult {
  std::vector<double> lambda;
  std::vector<Eigen::MatrixXcd> density;     // (1/π) Im S(λ + iε)
  std::vector<Eigen::MatrixXcd> cumulative;  // trapezoid from a
  double min_increment_eigenvalue = 0.0;
  bool monotone = true;
};

InversionResult stieltjes_invert(const TransformSampler& sampler, double a, double b,
                                 const InversionOptions& options = {});

/// Sampler for Σ_s W_s/(λ_s - z).
TransformSampler atomic_transform(const AtomicMatrixMeasure& measure);

/// Evaluates the parametrized transform at one section size.
class TransformEvaluator {
 public:
  TransformEvaluator(const MomentSequence& seq, int section_size, const EmbedOptions& embed = {},
                     std::optional<double> deflate_tol = std::nullopt);

  const StructureMatrices& structure() const { return sm_; }
  const MomentSequence& sequence() const { return seq_; }

  NevanlinnaCoefficients coefficients_at(const Complex& z) const;
  TransformSample evaluate(const Complex& z, const SchurParameter& f) const;
  /// Evaluates a whole grid; with threads > 1 the grid is split into
  /// contiguous chunks and the result is identical to the serial loop.
  std::vector<TransformSample> evaluate(const std::vector<Complex>& grid,
                                        const SchurParameter& f, int threads = 1) const;
  TransformSampler sampler(const SchurParameter& f) const;

 private:
  MomentSequence seq_;
  StructureMatrices sm_;
};

struct ConvergencePolicy {
  int initial_section = 16;
  int max_section = 128;
  /// Frobenius gap between consecutive sections; infinity accepts the first.
  double tol = 1e-6;
  EmbedOptions embed;
  std::optional<double> deflate_tol;
  int threads = 1;
};

struct ConvergedTransform {
  std::vector<TransformSample> samples;
  int section_size = 0;
  std::vector<int> sections;
  std::vector<double> gap_history;
  double achieved_gap = std::numeric_limits<double>::infinity();
  StructureMatrices structure;
};

/// Doubles the section until the grid values move by at most `tol`.
/// Raises no-convergence with the gap history when max_section is reached.
ConvergedTransform convergence_driver(const MomentSequence& seq, const std::vector<Complex>& grid,
                                      const SchurParameter& f,
                                      const ConvergencePolicy& policy = {});

}  // namespace hmp
