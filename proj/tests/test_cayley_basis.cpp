#include <algorithm>

#include <gtest/gtest.h>

#include "hmp/cayley_basis.hpp"
#include "hmp/error.hpp"
#include "hmp/oracle.hpp"
#include "support.hpp"

namespace hmp {
namespace {

// 1/(w^* T^{-1} w) from tests/oracles/christoffel_lognormal.py.
struct ChristoffelValue {
  int section;
  double residual;
};
constexpr ChristoffelValue kLognormalResidual[] = {
    {8, 0.4084271182828514328432171},
    {16, 0.4081213439429541186087065},
    {32, 0.4081212413775789224477513},
};

double orthonormality_defect(const CMatrix& a, const CMatrix& b, bool same) {
  if (a.cols() == 0 || b.cols() == 0) return 0.0;
  CMatrix g = b.adjoint() * a;
  if (same) g -= CMatrix::Identity(a.cols(), a.cols());
  return to_double(max_abs(g));
}

TEST(Orthogonalize, FamiliesAreOrthonormalAndComplementary) {
  const MomentSequence seq = oracle::lognormal_moments(65, 256);
  const GramModel model = embed(seq, 16);
  const CayleyBasis b = orthogonalize(model);
  PrecisionScope scope(256);
  EXPECT_EQ(b.tau(), 15);
  EXPECT_EQ(b.delta(), 1);
  EXPECT_EQ(b.omega(), 1);
  EXPECT_EQ(b.tau() + b.delta(), model.rank());
  EXPECT_EQ(b.tau() + b.omega(), model.rank());
  EXPECT_LT(orthonormality_defect(b.u, b.u, true), 1e-60);
  EXPECT_LT(orthonormality_defect(b.v, b.v, true), 1e-60);
  EXPECT_LT(orthonormality_defect(b.u_prime, b.u, false), 1e-60);
  EXPECT_LT(orthonormality_defect(b.v_prime, b.v, false), 1e-60);
  EXPECT_LT(orthonormality_defect(b.u_prime, b.u_prime, true), 1e-60);
}

TEST(Orthogonalize, CayleyImageMatchesGeneratorCoefficients) {
  const MomentSequence seq = oracle::lognormal_moments(33, 256);
  const GramModel model = embed(seq, 12);
  const CayleyBasis b = orthogonalize(model);
  PrecisionScope scope(256);
  for (int k = 0; k < b.tau(); ++k) {
    CVector u = CVector::Zero(model.rank());
    CVector v = CVector::Zero(model.rank());
    for (int j = 0; j <= b.source_index[k]; ++j) {
      u += y_vector(model, j, Sign::kMinus).coefficients * b.xi(k, j);
      v += y_vector(model, j, Sign::kPlus).coefficients * b.xi(k, j);
    }
    EXPECT_LT(to_double(vector_norm(CVector(u - b.u.col(k)))), 1e-50) << k;
    EXPECT_LT(to_double(vector_norm(CVector(v - b.v.col(k)))), 1e-50) << k;
  }
}

TEST(Residual, LognormalMatchesChristoffelOracle) {
  const MomentSequence seq = oracle::lognormal_moments(65, 256);
  for (const ChristoffelValue& c : kLognormalResidual) {
    const GramModel model = embed(seq, c.section);
    const CayleyBasis b = orthogonalize(model);
    EXPECT_NEAR(to_double(determinacy_residual(b, model, Side::kA, 0)), c.residual, 1e-15)
        << c.section;
    EXPECT_NEAR(to_double(determinacy_residual(b, model, Side::kB, 0)), c.residual, 1e-15)
        << c.section;
  }
}

TEST(Residual, FiniteRankParsevalIsExact) {
  const MomentSequence seq = oracle::atomic_moments(testing::two_atom(), 8);
  const GramModel model = embed(seq, 4);
  const CayleyBasis b = orthogonalize(model);
  EXPECT_EQ(b.delta(), 0);
  EXPECT_EQ(b.omega(), 0);
  EXPECT_LT(abs(determinacy_residual(b, model, Side::kA, 0)), 1e-14);
  EXPECT_LT(abs(determinacy_residual(b, model, Side::kB, 0)), 1e-14);
}

TEST(Residual, InvariantUnderBasisShuffle) {
  const MomentSequence seq = oracle::lognormal_moments(33, 256);
  const GramModel plain = embed(seq, 16);
  const GramModel shuffled = embed(seq, 16, {.rank_tol = std::nullopt, .basis_shuffle_seed = 9});
  const double a = to_double(determinacy_residual(orthogonalize(plain), plain, Side::kA, 0));
  const double b = to_double(determinacy_residual(orthogonalize(shuffled), shuffled, Side::kA, 0));
  EXPECT_NEAR(a, b, 1e-40);
}

TEST(Schedule, PowersOfTwoUpToFeasible) {
  const MomentSequence seq = oracle::lognormal_moments(65, 256);
  EXPECT_EQ(section_schedule(seq, 16, 64), (std::vector<int>{16, 32}));
  const MomentSequence longer = oracle::lognormal_moments(129, 256);
  EXPECT_EQ(section_schedule(longer, 16, 64), (std::vector<int>{16, 32, 64}));
  const MomentSequence short_seq = oracle::atomic_moments(testing::two_atom(), 8);
  EXPECT_EQ(section_schedule(short_seq, 16, 64), (std::vector<int>{4}));
}

TEST(Classify, ZeroSequence) {
  const DeterminacyVerdict v = classify_determinacy(testing::scalar_sequence({0, 0, 0, 0, 0}));
  EXPECT_EQ(v.verdict, Verdict::kDeterminate);
  EXPECT_TRUE(v.zero_sequence);
}

TEST(Classify, TwoAtomIsDeterminate) {
  const DeterminacyVerdict v =
      classify_determinacy(oracle::atomic_moments(testing::two_atom(), 16));
  EXPECT_EQ(v.verdict, Verdict::kDeterminate);
  ASSERT_FALSE(v.side_a_residuals.empty());
  EXPECT_LT(v.side_a_residuals[0], 1e-10);
}

TEST(Classify, LognormalIsIndeterminate) {
  const DeterminacyVerdict v = classify_determinacy(oracle::lognormal_moments(129, 256));
  EXPECT_EQ(v.verdict, Verdict::kIndeterminate) << v.reason;
  ASSERT_EQ(v.history.size(), 3u);
  for (const SectionEvidence& e : v.history) EXPECT_FALSE(e.precision_limited);
  EXPECT_NEAR(v.side_a_residuals[0], kLognormalResidual[2].residual, 1e-12);
  EXPECT_NEAR(v.side_b_residuals[0], kLognormalResidual[2].residual, 1e-12);
}

TEST(Classify, GaussianAtDoublePrecisionIsInconclusive) {
  DeterminacyPolicy policy;
  policy.max_section = 32;
  const DeterminacyVerdict v = classify_determinacy(oracle::gaussian_moments(64), policy);
  EXPECT_EQ(v.verdict, Verdict::kInconclusive);
  EXPECT_NE(v.reason.find("raise the precision"), std::string::npos) << v.reason;
}

TEST(Classify, GaussianAtHighPrecisionIsDeterminate) {
  const DeterminacyVerdict v = classify_determinacy(oracle::gaussian_moments(129, 256));
  EXPECT_EQ(v.verdict, Verdict::kDeterminate) << v.reason;
}

TEST(UniqueSolution, TwoAtom) {
  const MomentSequence seq = oracle::atomic_moments(testing::two_atom(), 8);
  const GramModel model = embed(seq, 4);
  const AtomicMatrixMeasure m = unique_solution_atoms(model, orthogonalize(model));
  ASSERT_EQ(m.atoms.size(), 2u);
  EXPECT_NEAR(to_double(m.atoms[0]), -1.0, 1e-14);
  EXPECT_NEAR(to_double(m.atoms[1]), 1.0, 1e-14);
  for (const CMatrix& w : m.weights) EXPECT_NEAR(to_double(real(w(0, 0))), 0.5, 1e-14);
}

TEST(UniqueSolution, RandomBlockMeasure) {
  const AtomicMatrixMeasure truth = oracle::random_atomic_measure(7, 2, 3);
  const MomentSequence seq = oracle::atomic_moments(truth, 12);
  const GramModel model = embed(seq, 8);
  const AtomicMatrixMeasure m = unique_solution_atoms(model, orthogonalize(model));
  ASSERT_EQ(m.atoms.size(), 3u);
  std::vector<std::size_t> order = {0, 1, 2};
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return truth.atoms[a] < truth.atoms[b]; });
  PrecisionScope scope(seq.precision_bits());
  for (std::size_t s = 0; s < 3; ++s) {
    EXPECT_NEAR(to_double(m.atoms[s]), to_double(truth.atoms[order[s]]), 1e-12);
    EXPECT_LT(to_double(spectral_norm(CMatrix(m.weights[s] - truth.weights[order[s]]))), 1e-12);
  }
}

TEST(UniqueSolution, RequiresFiniteRank) {
  const MomentSequence seq = oracle::lognormal_moments(33, 256);
  const GramModel model = embed(seq, 8);
  try {
    unique_solution_atoms(model, orthogonalize(model));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotFiniteRank);
  }
}

}  // namespace
}  // namespace hmp
