#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "hmp/moments.hpp"
#include "hmp/numeric.hpp"

namespace hmp {

struct EmbedOptions {
  /// Relative eigenvalue cut; defaults to 2^(-bits/2).
  std::optional<double> rank_tol;
  /// When set, the coordinate axes are permuted and rephased with this seed.
  /// The result is a unitarily equivalent embedding of the same Gram data.
  std::optional<std::uint64_t> basis_shuffle_seed;
};

/// Coordinates x_0..x_{M-1} in C^r with <x_n, x_m> = Γ_{n,m}.
class GramModel {
 public:
  int section_size() const { return static_cast<int>(coords_.cols()); }
  int rank() const { return static_cast<int>(coords_.rows()); }
  int block_size() const { return block_size_; }
  unsigned precision_bits() const { return precision_bits_; }
  bool empty() const { return coords_.rows() == 0; }

  /// r×M matrix whose column n holds x_n.
  const CMatrix& coords() const { return coords_; }
  /// The M×M section of Γ the model realizes.
  const CMatrix& gamma() const { return gamma_; }
  /// Eigenvalue cut that was applied, relative to the largest eigenvalue.
  const Real& rank_tol() const { return rank_tol_; }
  /// Largest discarded eigenvalue of the equilibrated section relative to
  /// the largest one; zero when nothing was cut.
  double discarded_eigenvalue() const { return discarded_; }

 private:
  friend GramModel embed(const MomentSequence&, int, const EmbedOptions&);
  int block_size_ = 1;
  unsigned precision_bits_ = kDefaultPrecisionBits;
  CMatrix coords_;
  CMatrix gamma_;
  Real rank_tol_;
  double discarded_ = 0.0;
};

enum class Sign { kPlus, kMinus };

struct ModelVector {
  CVector coefficients;
  std::string tag;
};

/// Factorizes the M×M section of Γ through a Hermitian eigendecomposition
/// of its diagonally equilibrated form, discarding eigenvalues below
/// rank_tol·λ_max.
GramModel embed(const MomentSequence& seq, int section_size, const EmbedOptions& options = {});

ModelVector x_vector(const GramModel& model, int n);

/// y_k^± = x_{k+N} ± i x_k.
ModelVector y_vector(const GramModel& model, int k, Sign sign);

/// max over n, m of |<x_n, x_m> - Γ_{n,m}| / sqrt(Γ_{n,n} Γ_{m,m}); entries
/// with a zero diagonal factor are measured absolutely.
double gram_reconstruction_error(const GramModel& model);

}  // namespace hmp
