#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hmp/gram_model.hpp"
#include "hmp/measure.hpp"
#include "hmp/moments.hpp"

namespace hmp {

/// Orthonormal families of the finite section. Each family is stored as an
/// r×count coordinate matrix (one vector per column).
///
/// u_k come from Gram–Schmidt on y_j^- and satisfy u_k = Σ_j ξ(k, j) y_j^-;
/// v_k = Σ_j ξ(k, j) y_j^+ is the image of u_k under the Cayley transform.
/// u' and v' complete the u and v families through x_0..x_{N-1}.
struct CayleyBasis {
  CMatrix u;
  CMatrix v;
  CMatrix u_prime;
  CMatrix v_prime;
  CMatrix xi;  // τ̂×(M-N), row k nonzero only up to source_index[k]
  std::vector<int> source_index;
  int rho = 0;
  int section_size = 0;
  int block_size = 1;
  unsigned precision_bits = kDefaultPrecisionBits;
  Real deflate_tol;

  int tau() const { return static_cast<int>(u.cols()); }
  int delta() const { return static_cast<int>(u_prime.cols()); }
  int omega() const { return static_cast<int>(v_prime.cols()); }
};

/// Two-pass modified Gram–Schmidt. A vector is dropped when its residual
/// norm is at most deflate_tol (default 2^(-bits/3)) times its original norm.
CayleyBasis orthogonalize(const GramModel& model, std::optional<double> deflate_tol = std::nullopt);

enum class Side { kA, kB };

/// Γ_{n,n} - Σ_k |<x_n, w_k>|², with w = u on side a and w = v on side b.
/// The inner products are assembled from Γ and ξ without touching the
/// coordinates.
Real determinacy_residual(const CayleyBasis& basis, const GramModel& model, Side side, int n);

struct DeterminacyPolicy {
  int initial_section = 16;
  int max_section = 64;
  /// Relative threshold; defaults to max(1e-6, 2^(-bits/4)).
  std::optional<double> theta;
  /// Relative change allowed between consecutive doublings for a residual
  /// to count as stabilized.
  double stabilization_tol = 1e-2;
  EmbedOptions embed;
  std::optional<double> deflate_tol;
};

struct SectionEvidence {
  int section_size = 0;
  int rank = 0;
  int tau = 0;
  int delta = 0;
  int omega = 0;
  int rho = 0;
  std::vector<double> residual_a;  // relative to Γ_{n,n}, n < N
  std::vector<double> residual_b;
  double witness_a = 0.0;          // max over n
  double witness_b = 0.0;
  double discarded_eigenvalue = 0.0;
  /// The eigenvalue cut fell inside a continuing spectrum (largest discarded
  /// eigenvalue above 2^(-3·bits/4)) or a residual broke Bessel's
  /// inequality by more than the threshold. Such a section cannot support
  /// a verdict.
  bool precision_limited = false;
};

enum class Verdict { kDeterminate, kIndeterminate, kInconclusive };

struct DeterminacyVerdict {
  Verdict verdict = Verdict::kInconclusive;
  bool zero_sequence = false;
  double threshold = 0.0;
  std::vector<SectionEvidence> history;
  std::vector<double> side_a_residuals;  // deepest section
  std::vector<double> side_b_residuals;
  std::string reason;
};

std::string_view to_string(Verdict v) noexcept;

/// Powers of two from `initial` up to min(`max`, seq.max_section()). When the
/// feasible maximum is below `initial` the schedule is that maximum alone.
std::vector<int> section_schedule(const MomentSequence& seq, int initial, int max);

DeterminacyVerdict classify_determinacy(const MomentSequence& seq,
                                        const DeterminacyPolicy& policy = {});

/// Spectral measure of the self-adjoint shift when the section has no
/// defect (δ̂ = ω̂ = 0). Eigenvalues closer than 2^(-bits/3)·max(1, |λ|)
/// are merged.
AtomicMatrixMeasure unique_solution_atoms(const GramModel& model, const CayleyBasis& basis);

}  // namespace hmp
