#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "qfp/margin.hpp"
#include "qfp/problems.hpp"
#include "random_instances.hpp"

namespace qfp {
namespace {

using testing_support::random_total_sign_matrix;

SignMatrix from_rows(Index rows, Index cols, std::initializer_list<double> entries) {
  RealMatrix m(rows, cols);
  auto it = entries.begin();
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) m(i, j) = *it++;
  }
  return SignMatrix(m);
}

double svd_forster(const SignMatrix& m) {
  const double s = Eigen::JacobiSVD<RealMatrix>(m.values()).singularValues()(0);
  return std::min(1.0, s / std::sqrt(static_cast<double>(m.rows() * m.cols())));
}

double enumerated_linial(const SignMatrix& m) {
  double best = 0.0;
  for (std::uint32_t mask = 0; mask < (1U << m.cols()); ++mask) {
    RealVector v(m.cols());
    for (Index j = 0; j < v.size(); ++j) v(j) = (mask >> j) & 1U ? -1.0 : 1.0;
    best = std::max(best, (m.values() * v).lpNorm<1>());
  }
  return std::min(1.0, kGrothendieck * best / static_cast<double>(m.rows() * m.cols()));
}

SignMatrix permuted(const SignMatrix& m, Rng& rng) {
  std::vector<Index> rows(m.rows());
  std::vector<Index> cols(m.cols());
  std::iota(rows.begin(), rows.end(), 0);
  std::iota(cols.begin(), cols.end(), 0);
  for (Index i = m.rows() - 1; i > 0; --i) std::swap(rows[i], rows[rng.below(i + 1)]);
  for (Index j = m.cols() - 1; j > 0; --j) std::swap(cols[j], cols[rng.below(j + 1)]);
  return SignMatrix::from_function(m.rows(), m.cols(), [&](Index x, Index y) { return m(rows[x], cols[y]); });
}

TEST(ForsterBound, Examples) {
  EXPECT_NEAR(forster_bound(ip_matrix(1)), std::sqrt(2.0) / 2.0, 1e-9);
  EXPECT_NEAR(forster_bound(ip_matrix(3)), 1.0 / std::sqrt(8.0), 1e-9);
  EXPECT_NEAR(forster_bound(from_rows(2, 2, {1, 1, 1, 1})), 1.0, 1e-9);
  for (int k = 1; k <= 4; ++k) EXPECT_NEAR(forster_bound(ip_matrix(k)), std::pow(2.0, -k / 2.0), 1e-9);
}

TEST(ForsterBound, MatchesSvd) {
  Rng rng(31);
  for (int trial = 0; trial < 40; ++trial) {
    const SignMatrix m = random_total_sign_matrix(rng, 12, 12);
    EXPECT_NEAR(forster_bound(m), svd_forster(m), 1e-7) << "trial " << trial;
  }
}

TEST(LinialBound, Examples) {
  EXPECT_NEAR(linial_bound(from_rows(2, 2, {1, 1, 1, -1})), kGrothendieck * 2.0 / 4.0, 1e-12);
  EXPECT_EQ(linial_bound(from_rows(2, 2, {1, 1, 1, 1})), 1.0);
  EXPECT_EQ(linial_bound(from_rows(1, 1, {-1})), 1.0);
}

TEST(LinialBound, MatchesEnumeration) {
  Rng rng(32);
  for (int trial = 0; trial < 30; ++trial) {
    const SignMatrix m = random_total_sign_matrix(rng, 10, 10);
    EXPECT_NEAR(linial_bound(m), enumerated_linial(m), 1e-12) << "trial " << trial;
  }
}

TEST(Bounds, RefusePromiseMatrices) {
  const SignMatrix promise = from_rows(2, 2, {1, 0, 0, -1});
  EXPECT_THROW(forster_bound(promise), PreconditionError);
  EXPECT_THROW(linial_bound(promise), PreconditionError);
  EXPECT_THROW(margin_upper_bound(promise), PreconditionError);
  EXPECT_THROW(linial_bound(SignMatrix(RealMatrix::Ones(2, kMaxEnumerationColumns + 1))), PreconditionError);
}

TEST(MarginUpperBound, Examples) {
  EXPECT_NEAR(margin_upper_bound(ip_matrix(2)), 0.5, 1e-9);
  EXPECT_NEAR(margin_upper_bound(from_rows(2, 2, {1, 1, 1, -1})), std::sqrt(2.0) / 2.0, 1e-9);
  EXPECT_GE(margin_upper_bound(eq_matrix(2)), 1.0 / 3.0);
}

TEST(MarginUpperBound, WideMatricesUseForsterOnly) {
  Rng rng(33);
  const SignMatrix wide = SignMatrix::from_function(
      3, kMaxEnumerationColumns + 5, [&](Index, Index) { return rng.bernoulli(0.5) ? 1 : -1; });
  EXPECT_DOUBLE_EQ(margin_upper_bound(wide), forster_bound(wide));
}

TEST(Bounds, GrothendieckChainAndPermutationInvariance) {
  Rng rng(34);
  for (int trial = 0; trial < 100; ++trial) {
    const SignMatrix m = random_total_sign_matrix(rng, 12, 12);
    EXPECT_LE(linial_bound(m), kGrothendieck * forster_bound(m) + 1e-9);
    const SignMatrix p = permuted(m, rng);
    EXPECT_NEAR(forster_bound(m), forster_bound(p), 1e-9);
    EXPECT_NEAR(linial_bound(m), linial_bound(p), 1e-9);
  }
}

TEST(Heuristic, EqFourByFour) {
  const SignMatrix eq = eq_matrix(2);
  const Realization r = maximize_margin_heuristic(eq, 5, 0);
  EXPECT_GE(r.gamma(), 0.30);
  EXPECT_LE(r.gamma(), margin_upper_bound(eq) + 1e-6);
  EXPECT_TRUE(verify_realization(r, eq).valid);
  EXPECT_EQ(r.dimension(), 5);
}

TEST(Heuristic, TrivialMatrix) {
  const Realization r = maximize_margin_heuristic(from_rows(1, 1, {1}), 1, 0);
  EXPECT_DOUBLE_EQ(r.gamma(), 1.0);
}

TEST(Heuristic, NoSeparatingArrangement) {
  // One dimension has only sign patterns of rank one; EQ on four inputs is not one.
  HeuristicConfig config;
  config.restarts = 2;
  config.iterations = 100;
  EXPECT_THROW(maximize_margin_heuristic(eq_matrix(2), 1, 0, config), PreconditionError);
  config.iterations = 0;
  EXPECT_THROW(maximize_margin_heuristic(eq_matrix(2), 5, 0, config), PreconditionError);
  EXPECT_THROW(maximize_margin_heuristic(eq_matrix(2), 0, 0), PreconditionError);
}

TEST(Heuristic, SoundOnRandomMatrices) {
  Rng rng(35);
  HeuristicConfig config;
  config.restarts = 2;
  config.iterations = 200;
  for (int trial = 0; trial < 30; ++trial) {
    const SignMatrix m = random_total_sign_matrix(rng, 8, 8);
    const Realization r = maximize_margin_heuristic(m, m.rows(), derive_seed(35, trial), config);
    EXPECT_LE(r.gamma(), margin_upper_bound(m) + 1e-6) << "trial " << trial;
    EXPECT_TRUE(verify_realization(r, m).valid) << "trial " << trial;
  }
}

TEST(Heuristic, PromiseMatrix) {
  const SignMatrix m = from_rows(3, 3, {-1, 0, 1, 0, -1, 0, 1, 0, -1});
  const Realization r = maximize_margin_heuristic(m, 3, 1);
  EXPECT_GT(r.gamma(), 0.0);
  EXPECT_TRUE(verify_realization(r, m).valid);
}

TEST(Heuristic, Deterministic) {
  HeuristicConfig config;
  config.iterations = 100;
  const auto a = maximize_margin_heuristic(ip_matrix(2), 3, 4, config);
  const auto b = maximize_margin_heuristic(ip_matrix(2), 3, 4, config);
  EXPECT_EQ(a.alphas(), b.alphas());
  EXPECT_EQ(a.gamma(), b.gamma());
}

TEST(DerivedLowerBounds, Examples) {
  EXPECT_EQ(repetition_lower_bound(1.0), 1.0);
  EXPECT_NEAR(repetition_lower_bound(0.1), 100.0, 1e-12);
  for (int k = 1; k <= 4; ++k) {
    EXPECT_NEAR(repetition_lower_bound(std::pow(2.0, -k / 2.0)), std::ldexp(1.0, k), 1e-12);
  }
  EXPECT_DOUBLE_EQ(qent_lower_bound(1.0 / 256.0), 2.0);
  EXPECT_EQ(qent_lower_bound(1.0), 0.0);
  EXPECT_DOUBLE_EQ(qent_lower_bound(1.0 / 16.0), 1.0);
  EXPECT_THROW(repetition_lower_bound(0.0), PreconditionError);
  EXPECT_THROW(qent_lower_bound(1.5), PreconditionError);
}

TEST(MarginReport, SpectralAndHeuristic) {
  MarginReportOptions options;
  options.heuristic = HeuristicRequest{5, 0, {}};
  const auto report = margin_report(eq_matrix(2), options);
  ASSERT_TRUE(report.forster && report.linial && report.heuristic_lower);
  EXPECT_DOUBLE_EQ(report.upper, std::min(*report.forster, *report.linial));
  EXPECT_FALSE(report.upper_is_trivial);
  EXPECT_LE(*report.heuristic_lower, report.upper + 1e-6);
  EXPECT_DOUBLE_EQ(report.repetition_lower, repetition_lower_bound(report.upper));
  EXPECT_DOUBLE_EQ(report.qent_lower_bits, qent_lower_bound(report.upper));
}

TEST(MarginReport, PromiseMatrices) {
  const SignMatrix promise = from_rows(2, 2, {1, 0, 0, -1});
  EXPECT_THROW(margin_report(promise), PreconditionError);
  MarginReportOptions options;
  options.spectral = false;
  options.heuristic = HeuristicRequest{2, 0, {}};
  const auto report = margin_report(promise, options);
  EXPECT_FALSE(report.forster.has_value());
  EXPECT_TRUE(report.upper_is_trivial);
  EXPECT_EQ(report.upper, 1.0);
  EXPECT_EQ(report.repetition_lower, 1.0);
  EXPECT_EQ(report.qent_lower_bits, 0.0);
  ASSERT_TRUE(report.heuristic_lower.has_value());
  EXPECT_GT(*report.heuristic_lower, 0.0);
}

}  // namespace
}  // namespace qfp
