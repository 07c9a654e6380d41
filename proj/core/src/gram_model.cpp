#include "hmp/gram_model.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

#include "hmp/error.hpp"

namespace hmp {

GramModel embed(const MomentSequence& seq, int section_size, const EmbedOptions& options) {
  PrecisionScope scope(seq.precision_bits());
  if (section_size < 1) fail(ErrorCode::kInvalidArgument, "section size must be positive");
  const int m = section_size;

  GramModel model;
  model.block_size_ = seq.block_size();
  model.precision_bits_ = seq.precision_bits();
  model.gamma_ = gamma_section(seq, m);
  model.rank_tol_ = options.rank_tol ? Real(*options.rank_tol)
                                     : precision_tolerance(seq.precision_bits(), 2.0);

  std::vector<Real> d(static_cast<std::size_t>(m));
  std::vector<Real> d_inv(static_cast<std::size_t>(m));
  for (int n = 0; n < m; ++n) {
    const Real diag = real(model.gamma_(n, n));
    if (diag < 0) fail(ErrorCode::kIndefiniteSection, "negative diagonal entry in Γ");
    d[n] = sqrt(diag);
    d_inv[n] = diag > 0 ? Real(1) / d[n] : Real(0);
  }
  CMatrix scaled(m, m);
  for (int c = 0; c < m; ++c)
    for (int r = 0; r < m; ++r) scaled(r, c) = model.gamma_(r, c) * (d_inv[r] * d_inv[c]);

  const HermitianEigen eig = hermitian_eigen(scaled);
  const Real top = eig.values(m - 1);
  std::vector<int> kept;
  if (top > 0) {
    for (int i = m - 1; i >= 0; --i) {
      const Real& lam = eig.values(i);
      if (lam < -model.rank_tol_ * top)
        fail(ErrorCode::kIndefiniteSection,
             "section of size " + std::to_string(m) + " has a negative eigenvalue " +
                 decimal_string(lam, 53));
      if (lam > model.rank_tol_ * top)
        kept.push_back(i);
      else if (model.discarded_ == 0.0)
        model.discarded_ = std::max(0.0, to_double(lam / top));
    }
  }

  const int r = static_cast<int>(kept.size());
  model.coords_.resize(r, m);
  for (int row = 0; row < r; ++row) {
    const int i = kept[row];
    const Real s = sqrt(eig.values(i));
    for (int n = 0; n < m; ++n) model.coords_(row, n) = eig.vectors(n, i) * (s * d[n]);
  }

  if (options.basis_shuffle_seed && r > 0) {
    std::mt19937_64 rng(*options.basis_shuffle_seed);
    std::vector<int> perm(static_cast<std::size_t>(r));
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * 3.141592653589793);
    CMatrix shuffled(r, m);
    for (int row = 0; row < r; ++row) {
      const Real a(angle(rng));
      const Complex phase = make_complex(cos(a), sin(a));
      for (int n = 0; n < m; ++n) shuffled(row, n) = model.coords_(perm[row], n) * phase;
    }
    model.coords_ = std::move(shuffled);
  }
  return model;
}

ModelVector x_vector(const GramModel& model, int n) {
  if (model.empty()) fail(ErrorCode::kEmptyModel, "the model space is {0}");
  if (n < 0 || n >= model.section_size())
    fail(ErrorCode::kIndexOutOfRange, "x_" + std::to_string(n) + " is outside the section");
  return {model.coords().col(n), "x_" + std::to_string(n)};
}

ModelVector y_vector(const GramModel& model, int k, Sign sign) {
  if (model.empty()) fail(ErrorCode::kEmptyModel, "the model space is {0}");
  const int shift = model.block_size();
  if (k < 0 || k + shift >= model.section_size())
    fail(ErrorCode::kIndexOutOfRange,
         "y_" + std::to_string(k) + " needs x_" + std::to_string(k + shift));
  PrecisionScope scope(model.precision_bits());
  const Complex i_unit = sign == Sign::kPlus ? imag_unit() : -imag_unit();
  CVector y = model.coords().col(k + shift) + model.coords().col(k) * i_unit;
  return {std::move(y), std::string("y_") + std::to_string(k) + (sign == Sign::kPlus ? "+" : "-")};
}

double gram_reconstruction_error(const GramModel& model) {
  PrecisionScope scope(model.precision_bits());
  const int m = model.section_size();
  const CMatrix& x = model.coords();
  const CMatrix& g = model.gamma();
  Real worst(0);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      const Complex ip = x.rows() == 0 ? Complex(0) : inner(x.col(a), x.col(b));
      Real err = abs(ip - g(a, b));
      const Real scale = sqrt(real(g(a, a)) * real(g(b, b)));
      if (scale > 0) err /= scale;
      if (err > worst) worst = err;
    }
  return to_double(worst);
}

}  // namespace hmp
