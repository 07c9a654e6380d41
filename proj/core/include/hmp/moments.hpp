#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "hmp/numeric.hpp"

namespace hmp {

/// The input of the problem: Hermitian N×N moments S_0..S_{L-1} together
/// with the working precision used by everything downstream.
class MomentSequence {
 public:
  /// Validates shapes and Hermiticity. Moments whose anti-Hermitian defect
  /// is within `herm_tol` (default 2^(-bits/2) relative to max(1, |S_n|))
  /// are symmetrized; larger defects raise non-hermitian-input.
  static MomentSequence create(int block_size, std::vector<CMatrix> moments,
                               unsigned precision_bits = kDefaultPrecisionBits,
                               std::optional<double> herm_tol = std::nullopt);

  int block_size() const { return block_size_; }
  int size() const { return static_cast<int>(moments_.size()); }
  const CMatrix& moment(int n) const;
  const std::vector<CMatrix>& moments() const { return moments_; }
  unsigned precision_bits() const { return precision_bits_; }

  /// True when every moment is exactly zero.
  bool is_zero() const;

  /// Largest n with 2n <= L-1.
  int max_order() const { return (size() - 1) / 2; }
  /// Largest scalar section M for which every Γ_{n,m}, n,m < M, is known.
  int max_section() const { return block_size_ * ((size() + 1) / 2); }

 private:
  MomentSequence() = default;
  int block_size_ = 1;
  unsigned precision_bits_ = kDefaultPrecisionBits;
  std::vector<CMatrix> moments_;
};

struct BlockHankel {
  int order = 0;
  CMatrix entries;
};

/// Scalar entry Γ_{row,col} = (S_{r+t})_{j,n} with row = rN+j, col = tN+n.
Complex hankel_entry(const MomentSequence& seq, int row, int col);

/// Γ_n, the (n+1)N square block Hankel matrix.
BlockHankel build_gamma(const MomentSequence& seq, int order);

/// Leading M×M scalar corner of Γ.
CMatrix gamma_section(const MomentSequence& seq, int m);

enum class SolvabilityVerdict { kSolvable, kRejected };

struct SolvabilityReport {
  int checked_depth = 0;
  std::vector<double> min_eigenvalue_per_order;
  std::vector<double> max_eigenvalue_per_order;
  SolvabilityVerdict verdict = SolvabilityVerdict::kSolvable;
  int rejected_order = -1;
  double epsilon_psd = 0.0;
};

/// Checks Γ_0..Γ_depth for positive semidefiniteness. A negative eigenvalue
/// below -ε·max(λ_max, 1) rejects at that order. `depth` defaults to the
/// deepest feasible order; `epsilon_psd` to 2^(-bits/2).
SolvabilityReport validate_solvability(const MomentSequence& seq,
                                       std::optional<int> depth = std::nullopt,
                                       std::optional<double> epsilon_psd = std::nullopt);

/// Moment file: {"N": int, "precision_bits": int?, "moments": [[[re, im], ...], ...]}
/// with each moment row-major and reals as numbers or decimal strings.
/// `precision_override` wins over the file's precision_bits field.
MomentSequence parse_moment_json(const std::string& text,
                                 std::optional<unsigned> precision_override = std::nullopt);
MomentSequence read_moment_file(const std::filesystem::path& path,
                                std::optional<unsigned> precision_override = std::nullopt);

/// Serializes reals as round-trip decimal strings at the sequence's
/// precision. Output is deterministic.
std::string to_moment_json(const MomentSequence& seq);

}  // namespace hmp
