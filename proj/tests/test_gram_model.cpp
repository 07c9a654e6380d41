#include <gtest/gtest.h>

#include "hmp/error.hpp"
#include "hmp/gram_model.hpp"
#include "hmp/oracle.hpp"
#include "support.hpp"

namespace hmp {
namespace {

TEST(Embed, TwoAtomHasRankTwo) {
  const MomentSequence seq = oracle::atomic_moments(testing::two_atom(), 8);
  const GramModel model = embed(seq, 4);
  EXPECT_EQ(model.rank(), 2);
  EXPECT_EQ(model.section_size(), 4);
  EXPECT_LT(gram_reconstruction_error(model), 1e-14);
  EXPECT_LT(model.discarded_eigenvalue(), 1e-15);
}

TEST(Embed, RandomBlockMeasureRank) {
  const MomentSequence seq = oracle::atomic_moments(oracle::random_atomic_measure(7, 2, 3), 12);
  const GramModel model = embed(seq, 8);
  EXPECT_EQ(model.rank(), 6);
  EXPECT_LT(gram_reconstruction_error(model), 1e-13);
}

TEST(Embed, LognormalIsFullRankAtHighPrecision) {
  const MomentSequence seq = oracle::lognormal_moments(33, 256);
  const GramModel model = embed(seq, 16);
  EXPECT_EQ(model.rank(), 16);
  EXPECT_LT(gram_reconstruction_error(model), 1e-60);
}

TEST(Embed, ZeroSequenceGivesEmptyModel) {
  const GramModel model = embed(testing::scalar_sequence({0, 0, 0, 0, 0}), 3);
  EXPECT_TRUE(model.empty());
  try {
    x_vector(model, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyModel);
  }
}

TEST(Embed, IndefiniteSectionRaises) {
  try {
    embed(testing::scalar_sequence({1, 0, -1}), 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIndefiniteSection);
  }
}

TEST(ModelVectors, ShiftedCombinations) {
  const MomentSequence seq = oracle::atomic_moments(oracle::random_atomic_measure(5, 2, 4), 12);
  const GramModel model = embed(seq, 8);
  PrecisionScope scope(model.precision_bits());
  const ModelVector plus = y_vector(model, 1, Sign::kPlus);
  const ModelVector minus = y_vector(model, 1, Sign::kMinus);
  const CVector x1 = x_vector(model, 1).coefficients;
  const CVector x3 = x_vector(model, 3).coefficients;
  EXPECT_EQ(plus.tag, "y_1+");
  EXPECT_EQ(minus.tag, "y_1-");
  EXPECT_LT(to_double(vector_norm(CVector((plus.coefficients + minus.coefficients) -
                                          x3 * make_complex(2.0)))),
            1e-15);
  EXPECT_LT(to_double(vector_norm(CVector((plus.coefficients - minus.coefficients) -
                                          x1 * make_complex(0.0, 2.0)))),
            1e-15);
}

TEST(ModelVectors, IndexChecks) {
  const GramModel model = embed(oracle::atomic_moments(testing::two_atom(), 8), 4);
  for (auto fn : {+[](const GramModel& m) { x_vector(m, 4); },
                  +[](const GramModel& m) { x_vector(m, -1); },
                  +[](const GramModel& m) { y_vector(m, 3, Sign::kPlus); }}) {
    try {
      fn(model);
      ADD_FAILURE();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kIndexOutOfRange);
    }
  }
}

TEST(Embed, ShuffledBasisPreservesGramData) {
  const MomentSequence seq = oracle::lognormal_moments(33, 256);
  const GramModel plain = embed(seq, 12);
  const GramModel shuffled = embed(seq, 12, {.rank_tol = std::nullopt, .basis_shuffle_seed = 42});
  EXPECT_NE(plain.coords(), shuffled.coords());
  EXPECT_LT(gram_reconstruction_error(shuffled), 1e-60);
}

}  // namespace
}  // namespace hmp
