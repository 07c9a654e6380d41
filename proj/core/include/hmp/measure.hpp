#pragma once

#include <vector>

#include "hmp/numeric.hpp"

namespace hmp {

/// Finitely supported N×N matrix measure: sum_s weights[s] δ(atoms[s]).
/// Atoms are strictly increasing; weights are Hermitian PSD.
struct AtomicMatrixMeasure {
  int block_size = 1;
  std::vector<Real> atoms;
  std::vector<CMatrix> weights;
};

}  // namespace hmp
