#include <gtest/gtest.h>

#include <cmath>

#include "qfp/embeddings.hpp"
#include "qfp/problems.hpp"
#include "random_instances.hpp"

namespace qfp {
namespace {

using testing_support::random_threshold_instance;

// alpha_x = (1, sqrt2 e_x)/sqrt3, beta_y = (1, -sqrt2 e_y)/sqrt3.
Realization eq_third_realization(Index n) {
  RealMatrix alphas = RealMatrix::Zero(n + 1, n);
  RealMatrix betas = RealMatrix::Zero(n + 1, n);
  for (Index i = 0; i < n; ++i) {
    alphas(0, i) = betas(0, i) = 1.0 / std::sqrt(3.0);
    alphas(i + 1, i) = std::sqrt(2.0 / 3.0);
    betas(i + 1, i) = -std::sqrt(2.0 / 3.0);
  }
  return Realization(alphas, betas, 1.0 / 3.0);
}

TEST(SignMatrix, Validation) {
  EXPECT_THROW(SignMatrix(RealMatrix(0, 2)), DimensionError);
  EXPECT_THROW(SignMatrix(RealMatrix::Zero(2, 2)), PreconditionError);
  EXPECT_THROW(SignMatrix(RealMatrix::Constant(1, 1, 0.5)), PreconditionError);
  RealMatrix promise = RealMatrix::Zero(2, 2);
  promise(0, 1) = -1.0;
  const SignMatrix m(promise);
  EXPECT_FALSE(m.is_total());
  EXPECT_EQ(m.nonzero_count(), 1);
  EXPECT_EQ(m(0, 1), -1);
  EXPECT_EQ(m.transposed()(1, 0), -1);
  EXPECT_TRUE(eq_matrix(2).is_total());
}

TEST(ThresholdEmbedding, Validation) {
  const RealMatrix e = RealMatrix::Identity(2, 2);
  EXPECT_NO_THROW(ThresholdEmbedding(e, e, 0.0, 1.0));
  EXPECT_THROW(ThresholdEmbedding(e, e, 0.5, 0.5), PreconditionError);
  EXPECT_THROW(ThresholdEmbedding(e, e, -0.1, 0.5), PreconditionError);
  EXPECT_THROW(ThresholdEmbedding(e, e, 0.1, 1.5), PreconditionError);
  EXPECT_THROW(ThresholdEmbedding(2.0 * e, e, 0.0, 1.0), PreconditionError);
  EXPECT_THROW(ThresholdEmbedding(e, RealMatrix::Identity(3, 3), 0.0, 1.0), DimensionError);
  EXPECT_THROW(Realization(e, e, 0.0), PreconditionError);
  EXPECT_THROW(Realization(e, e, 1.01), PreconditionError);
}

TEST(VerifyThreshold, OrthonormalEq) {
  const RealMatrix id = RealMatrix::Identity(4, 4);
  const SignMatrix eq = eq_matrix(2);
  EXPECT_TRUE(verify_threshold_embedding(ThresholdEmbedding(id, id, 0.0, 1.0), eq).valid);

  RealMatrix flipped = id;
  flipped.col(2) *= -1.0;
  EXPECT_TRUE(verify_threshold_embedding(ThresholdEmbedding(id, flipped, 0.0, 1.0), eq).valid);
}

TEST(VerifyThreshold, CollapsedVectorsInvalid) {
  const RealMatrix same = RealVector::Unit(2, 0).replicate(1, 2);
  const auto report = verify_threshold_embedding(ThresholdEmbedding(same, same, 0.0, 1.0), eq_matrix(1));
  EXPECT_FALSE(report.valid);
  ASSERT_TRUE(report.violation.has_value());
  EXPECT_NE(report.violation->x, report.violation->y);
}

TEST(VerifyThreshold, PromiseEntriesIgnored) {
  const RealMatrix same = RealVector::Unit(2, 0).replicate(1, 2);
  RealMatrix entries(2, 2);
  entries << -1, 0, 0, -1;
  EXPECT_TRUE(verify_threshold_embedding(ThresholdEmbedding(same, same, 0.0, 1.0), SignMatrix(entries)).valid);
}

TEST(VerifyThreshold, DimensionMismatch) {
  const RealMatrix id = RealMatrix::Identity(2, 2);
  EXPECT_THROW(verify_threshold_embedding(ThresholdEmbedding(id, id, 0.0, 1.0), eq_matrix(2)), DimensionError);
}

TEST(VerifyRealization, Examples) {
  const auto report = verify_realization(eq_third_realization(4), eq_matrix(2));
  EXPECT_TRUE(report.valid);
  EXPECT_NEAR(report.achieved_margin, 1.0 / 3.0, 1e-15);

  const RealMatrix one = RealMatrix::Ones(1, 1);
  const auto trivial = verify_realization(Realization(one, one, 1.0), SignMatrix(one));
  EXPECT_TRUE(trivial.valid);
  EXPECT_EQ(trivial.achieved_margin, 1.0);
}

TEST(VerifyRealization, ClaimAboveAchievedIsInvalid) {
  const auto r = eq_third_realization(4);
  const Realization overclaim(r.alphas(), r.betas(), 0.5);
  const auto report = verify_realization(overclaim, eq_matrix(2));
  EXPECT_FALSE(report.valid);
  EXPECT_THROW(verify_realization(r, eq_matrix(1)), DimensionError);
}

TEST(EmbedToRealization, OrthonormalEq) {
  const RealMatrix id = RealMatrix::Identity(4, 4);
  const Realization r = embed_to_realization(ThresholdEmbedding(id, id, 0.0, 1.0));
  EXPECT_NEAR(r.gamma(), 1.0 / 3.0, 1e-15);
  EXPECT_EQ(r.dimension(), 17);
  const auto report = verify_realization(r, eq_matrix(2));
  EXPECT_TRUE(report.valid);
  EXPECT_GE(report.achieved_margin, 1.0 / 3.0 - 1e-12);
  // <a', b'> = 1/3 - (2/3) [x == y] for this embedding.
  const RealMatrix gram = r.alphas().transpose() * r.betas();
  for (Index x = 0; x < 4; ++x) {
    for (Index y = 0; y < 4; ++y) EXPECT_NEAR(gram(x, y), 1.0 / 3.0 - (x == y ? 2.0 / 3.0 : 0.0), 1e-15);
  }
}

TEST(EmbedToRealization, MarginMonotoneInGap) {
  const RealMatrix id = RealMatrix::Identity(2, 2);
  double previous = 0.0;
  for (double eps : {0.01, 0.05, 0.1, 0.2, 0.4}) {
    const Realization r = embed_to_realization(ThresholdEmbedding(id, id, 0.5 - eps, 0.5));
    EXPECT_NEAR(r.gamma(), eps / (2.0 + 1.0 - eps), 1e-15);
    EXPECT_GT(r.gamma(), previous);
    previous = r.gamma();
  }
}

TEST(EmbedToRealization, RefusesLargeDimension) {
  const RealMatrix wide = RealVector::Unit(kMaxTensorDimension + 1, 0);
  EXPECT_THROW(embed_to_realization(ThresholdEmbedding(wide, wide, 0.0, 1.0)), PreconditionError);
}

TEST(RealizationToEmbedding, Examples) {
  const ThresholdEmbedding third = realization_to_embedding(eq_third_realization(4));
  EXPECT_NEAR(third.delta0(), 1.0 / 9.0, 1e-15);
  EXPECT_NEAR(third.delta1(), 4.0 / 9.0, 1e-15);
  EXPECT_TRUE(verify_threshold_embedding(third, eq_matrix(2)).valid);

  const RealMatrix one = RealMatrix::Ones(1, 1);
  const ThresholdEmbedding full = realization_to_embedding(Realization(one, one, 1.0));
  EXPECT_EQ(full.delta0(), 0.0);
  EXPECT_EQ(full.delta1(), 1.0);
}

TEST(RoundTrip, RandomInstances) {
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const auto inst = random_threshold_instance(rng, 8, 8, 8);
    ASSERT_TRUE(verify_threshold_embedding(inst.embedding, inst.matrix).valid) << "generator, trial " << trial;

    const Realization r = embed_to_realization(inst.embedding);
    const auto& e = inst.embedding;
    EXPECT_NEAR(r.gamma(), (e.delta1() - e.delta0()) / (2.0 + e.delta1() + e.delta0()), 1e-12);
    EXPECT_TRUE(verify_realization(r, inst.matrix).valid) << "trial " << trial;
    EXPECT_LE((r.alphas().colwise().norm().array() - 1.0).abs().maxCoeff(), 1e-9);
    EXPECT_LE((r.betas().colwise().norm().array() - 1.0).abs().maxCoeff(), 1e-9);

    const ThresholdEmbedding back = realization_to_embedding(r);
    EXPECT_NEAR(back.delta1() - back.delta0(), r.gamma(), 1e-12);
    EXPECT_TRUE(verify_threshold_embedding(back, inst.matrix).valid) << "trial " << trial;
  }
}

TEST(ReduceRealization, NoOpWhenTargetNotSmaller) {
  const auto r = eq_third_realization(4);
  const Realization same = reduce_realization_dimension(r, eq_matrix(2), 0);
  EXPECT_EQ(same.alphas(), r.alphas());
  EXPECT_EQ(same.gamma(), r.gamma());
  ReductionOptions options;
  options.target_dim = 5;
  EXPECT_EQ(reduce_realization_dimension(r, eq_matrix(2), 0, options).dimension(), 5);
}

TEST(ReduceRealization, SeventeenDimensionalEqIsLeftAlone) {
  // The JL target for 8 points at eps = 1/12 is in the thousands.
  const RealMatrix id = RealMatrix::Identity(4, 4);
  const Realization r = embed_to_realization(ThresholdEmbedding(id, id, 0.0, 1.0));
  ASSERT_EQ(r.dimension(), 17);
  const Realization same = reduce_realization_dimension(r, eq_matrix(2), 7);
  EXPECT_EQ(same.dimension(), 17);
  EXPECT_TRUE(check_margin_condition(same.alphas(), same.betas(), 1.0 / 6.0, eq_matrix(2)).valid);
}

Realization lifted_eq_realization(Index dim) {
  const auto base = eq_third_realization(4);
  RealMatrix alphas = RealMatrix::Zero(dim, 4);
  RealMatrix betas = RealMatrix::Zero(dim, 4);
  alphas.topRows(5) = base.alphas();
  betas.topRows(5) = base.betas();
  return Realization(alphas, betas, base.gamma());
}

TEST(ReduceRealization, ExplicitTargetHalvesMargin) {
  ReductionOptions options;
  options.target_dim = 1500;
  const Realization reduced = reduce_realization_dimension(lifted_eq_realization(3000), eq_matrix(2), 7, options);
  EXPECT_EQ(reduced.dimension(), 1500);
  EXPECT_DOUBLE_EQ(reduced.gamma(), 1.0 / 6.0);
  EXPECT_TRUE(verify_realization(reduced, eq_matrix(2)).valid);
}

TEST(ReduceRealization, LiftedToHighDimension) {
  const Index lifted_dim = 4000;
  const Realization lifted = lifted_eq_realization(lifted_dim);
  const Realization reduced = reduce_realization_dimension(lifted, eq_matrix(2), 3);
  EXPECT_LT(reduced.dimension(), lifted_dim);
  EXPECT_DOUBLE_EQ(reduced.gamma(), 1.0 / 6.0);
  EXPECT_TRUE(verify_realization(reduced, eq_matrix(2)).valid);
}

TEST(ReduceRealization, InvalidInputRejected) {
  const auto r = eq_third_realization(4);
  const Realization overclaim(r.alphas(), r.betas(), 0.9);
  EXPECT_THROW(reduce_realization_dimension(overclaim, eq_matrix(2), 0), PreconditionError);
}

TEST(ReduceRealization, RetriesExhausted) {
  // One dimension cannot realize EQ on four inputs.
  ReductionOptions options;
  options.target_dim = 1;
  options.max_attempts = 3;
  EXPECT_THROW(reduce_realization_dimension(eq_third_realization(4), eq_matrix(2), 0, options), RetriesExhausted);
}

}  // namespace
}  // namespace qfp
