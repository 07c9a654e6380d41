#pragma once

#include <complex>
#include <initializer_list>
#include <string>
#include <vector>

#include "hmp/measure.hpp"
#include "hmp/moments.hpp"

namespace hmp::testing {

inline MomentSequence scalar_sequence(std::initializer_list<double> values,
                                      unsigned bits = kDefaultPrecisionBits) {
  PrecisionScope scope(bits);
  std::vector<CMatrix> moments;
  for (double v : values) {
    CMatrix s(1, 1);
    s(0, 0) = make_complex(v);
    moments.push_back(s);
  }
  return MomentSequence::create(1, moments, bits);
}

inline AtomicMatrixMeasure scalar_measure(std::vector<double> atoms, std::vector<double> weights) {
  AtomicMatrixMeasure m;
  for (std::size_t k = 0; k < atoms.size(); ++k) {
    m.atoms.emplace_back(atoms[k]);
    CMatrix w(1, 1);
    w(0, 0) = make_complex(weights[k]);
    m.weights.push_back(w);
  }
  return m;
}

inline AtomicMatrixMeasure two_atom() { return scalar_measure({-1.0, 1.0}, {0.5, 0.5}); }

inline std::string data_path(const std::string& name) {
  return std::string(HMP_TEST_DATA_DIR) + "/" + name;
}

inline double max_abs_diff(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace hmp::testing
