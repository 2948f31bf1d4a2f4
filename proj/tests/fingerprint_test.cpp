#include <gtest/gtest.h>

#include <cmath>

#include "qfp/fingerprint.hpp"
#include "qfp/problems.hpp"
#include "random_instances.hpp"

namespace qfp {
namespace {

using testing_support::random_unit_vector;

// P[referee outputs 1] when each of r swap tests returns 0 with probability p,
// by summing the binomial pmf over the accepting counts.
double exact_accept_probability(double p, std::size_t r, double theta) {
  double total = 0.0;
  for (std::size_t zeros = 0; zeros <= r; ++zeros) {
    const double est = std::clamp(2.0 * static_cast<double>(zeros) / static_cast<double>(r) - 1.0, 0.0, 1.0);
    if (est < theta) continue;
    const double log_pmf = std::lgamma(r + 1.0) - std::lgamma(zeros + 1.0) - std::lgamma(r - zeros + 1.0) +
                           (zeros > 0 ? zeros * std::log(p) : 0.0) +
                           (r - zeros > 0 ? (r - zeros) * std::log1p(-p) : 0.0);
    total += std::exp(log_pmf);
  }
  return total;
}

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

TEST(SwapTestProb, Examples) {
  EXPECT_DOUBLE_EQ(swap_test_prob(RealVector::Unit(2, 0), RealVector::Unit(2, 1)), 0.5);
  EXPECT_DOUBLE_EQ(swap_test_prob(RealVector::Unit(2, 0), RealVector::Unit(2, 0)), 1.0);
  const RealVector b{{0.6, 0.8}};
  EXPECT_NEAR(swap_test_prob(RealVector::Unit(2, 0), b), 0.68, 1e-15);
}

TEST(SwapTestProb, Errors) {
  EXPECT_THROW(swap_test_prob(RealVector::Unit(2, 0), RealVector::Unit(3, 0)), DimensionError);
  EXPECT_THROW(swap_test_prob(RealVector{{1.0, 0.1}}, RealVector::Unit(2, 0)), PreconditionError);
}

TEST(SwapTestProb, RangeAndSignInvariance) {
  Rng rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    const Index dim = 1 + static_cast<Index>(rng.below(10));
    const RealVector a = random_unit_vector(rng, dim);
    const RealVector b = random_unit_vector(rng, dim);
    const double p = swap_test_prob(a, b);
    EXPECT_GE(p, 0.5);
    EXPECT_LE(p, 1.0);
    EXPECT_DOUBLE_EQ(p, swap_test_prob(a, (-b).eval()));
    EXPECT_NEAR(p, 0.5 + 0.5 * std::pow(a.dot(b), 2), 1e-15);
  }
}

TEST(SampleSwapTests, IdenticalStatesAlwaysZero) {
  const RealVector a = RealVector::Unit(3, 1);
  const auto bits = sample_swap_tests(a, a, 1000, 5);
  EXPECT_EQ(std::count(bits.begin(), bits.end(), 0), 1000);
}

TEST(SampleSwapTests, Deterministic) {
  Rng rng(22);
  const RealVector a = random_unit_vector(rng, 4);
  const RealVector b = random_unit_vector(rng, 4);
  EXPECT_EQ(sample_swap_tests(a, b, 500, 9), sample_swap_tests(a, b, 500, 9));
  EXPECT_NE(sample_swap_tests(a, b, 500, 9), sample_swap_tests(a, b, 500, 10));
}

TEST(SampleSwapTests, OrthogonalStatesFrequency) {
  const std::size_t r = 100000;
  const auto bits = sample_swap_tests(RealVector::Unit(2, 0), RealVector::Unit(2, 1), r, 0);
  const double freq = static_cast<double>(std::count(bits.begin(), bits.end(), 0)) / r;
  EXPECT_NEAR(freq, 0.5, 4.0 * std::sqrt(0.25 / r));
}

TEST(SampleSwapTests, FrequencyWithinFourSigma) {
  Rng rng(23);
  const std::size_t r = 20000;
  for (int trial = 0; trial < 10; ++trial) {
    const RealVector a = random_unit_vector(rng, 3);
    const RealVector b = random_unit_vector(rng, 3);
    const double p = swap_test_prob(a, b);
    const auto bits = sample_swap_tests(a, b, r, derive_seed(23, trial));
    const double zeros = static_cast<double>(std::count(bits.begin(), bits.end(), 0));
    EXPECT_LE(std::abs(zeros - r * p), 4.0 * std::sqrt(r * p * (1.0 - p))) << "trial " << trial;
  }
}

TEST(RequiredRepetitions, Examples) {
  EXPECT_EQ(required_repetitions(0.0, 1.0, 1.0 / 3.0), 15u);
  EXPECT_EQ(required_repetitions(0.0, 0.1875, 1.0 / 3.0), 408u);
  // 72 ln 6 = 129.007, so the ceiling is 130.
  EXPECT_EQ(required_repetitions(1.0 / 9.0, 4.0 / 9.0, 1.0 / 3.0), 130u);
}

TEST(RequiredRepetitions, HalvingGapQuadruples) {
  for (double gap : {0.8, 0.4, 0.3, 0.1}) {
    const double base = 8.0 * std::log(2.0 / 0.25) / (gap * gap);
    EXPECT_EQ(required_repetitions(0.0, gap, 0.25), static_cast<std::size_t>(std::ceil(base)));
    EXPECT_EQ(required_repetitions(0.0, gap / 2.0, 0.25), static_cast<std::size_t>(std::ceil(4.0 * base)));
  }
}

TEST(RequiredRepetitions, Preconditions) {
  EXPECT_THROW(required_repetitions(0.5, 0.5, 0.1), PreconditionError);
  EXPECT_THROW(required_repetitions(0.0, 1.0, 0.5), PreconditionError);
  EXPECT_THROW(required_repetitions(0.0, 1.0, 0.0), PreconditionError);
}

TEST(RefereeDecide, Examples) {
  const std::vector<std::uint8_t> zeros(10, 0);
  EXPECT_EQ(referee_decide(zeros, 0.5), 1);
  const std::vector<std::uint8_t> half{0, 1, 0, 1};
  EXPECT_EQ(referee_decide(half, 0.5), 0);
  const std::vector<std::uint8_t> tie{0, 0, 0, 1};  // est = 0.5
  EXPECT_EQ(referee_decide(tie, 0.5), 1);
  EXPECT_THROW(referee_decide(std::span<const std::uint8_t>{}, 0.5), PreconditionError);
  EXPECT_THROW(referee_decide(zeros, 1.0), PreconditionError);
}

TEST(FingerprintProtocol, FromMargin) {
  const auto p = protocol_from_margin(eq_matrix(2), eq_third_realization(4), 1.0 / 3.0);
  EXPECT_NEAR(p.embedding().delta0(), 1.0 / 9.0, 1e-15);
  EXPECT_NEAR(p.embedding().delta1(), 4.0 / 9.0, 1e-15);
  EXPECT_EQ(p.repetitions(), 130u);
  EXPECT_EQ(p.qubits_per_copy(), 3u);  // dimension 6
  EXPECT_EQ(p.total_qubits(), 2u * 3u * 130u);

  const RealMatrix one = RealMatrix::Ones(1, 1);
  const auto full = protocol_from_margin(SignMatrix(one), Realization(one, one, 1.0), 1.0 / 3.0);
  EXPECT_EQ(full.repetitions(), 15u);
  EXPECT_DOUBLE_EQ(full.theta(), 0.5);
}

TEST(FingerprintProtocol, RejectsBadInputs) {
  const auto r = eq_third_realization(4);
  EXPECT_THROW(protocol_from_margin(eq_matrix(2), Realization(r.alphas(), r.betas(), 0.9), 1.0 / 3.0),
               PreconditionError);
  const RealMatrix id = RealMatrix::Identity(2, 2);
  EXPECT_THROW(FingerprintProtocol(ThresholdEmbedding(id, id, 0.0, 1.0), 5, 1.0), PreconditionError);
  EXPECT_THROW(FingerprintProtocol(ThresholdEmbedding(id, id, 0.0, 1.0), 0, 0.5), PreconditionError);
}

TEST(RunProtocol, OrthonormalEqMatchesBinomialOracle) {
  const RealMatrix id = RealMatrix::Identity(4, 4);
  const ThresholdEmbedding e(id, id, 0.0, 1.0);
  const auto p = protocol_from_embedding(e, 1.0 / 3.0);
  ASSERT_EQ(p.repetitions(), 15u);
  const std::size_t trials = 2000;
  const auto report = run_protocol(p, eq_matrix(2), trials, 0);
  // Off-diagonal pairs answer 1 (wrongly) when at least 12 of 15 tests return 0.
  const double wrong = exact_accept_probability(0.5, 15, 0.5);
  EXPECT_NEAR(wrong, 576.0 / 32768.0, 1e-12);
  const double sd = std::sqrt(wrong * (1.0 - wrong) / trials);
  for (Index x = 0; x < 4; ++x) {
    for (Index y = 0; y < 4; ++y) {
      if (x == y) {
        EXPECT_EQ(report.per_pair_error(x, y), 0.0);
      } else {
        EXPECT_NEAR(report.per_pair_error(x, y), wrong, 5.0 * sd);
      }
    }
  }
  EXPECT_LE(report.max_error, 1.0 / 3.0);
}

TEST(RunProtocol, SingleRepetitionIdenticalPair) {
  const RealMatrix id = RealMatrix::Identity(2, 2);
  const FingerprintProtocol p(ThresholdEmbedding(id, id, 0.0, 1.0), 1, 0.5);
  const auto report = run_protocol(p, eq_matrix(1), 100, 4);
  EXPECT_EQ(report.per_pair_error(0, 0), 0.0);
  EXPECT_EQ(report.per_pair_error(1, 1), 0.0);
}

TEST(RunProtocol, HoeffdingBoundOnRandomInstances) {
  Rng rng(24);
  const double eps = 1.0 / 3.0;
  const double limit = eps + 3.0 * std::sqrt(eps * (1.0 - eps) / 200.0);
  int checked = 0;
  for (int trial = 0; trial < 16; ++trial) {
    const auto inst = testing_support::random_threshold_instance(rng, 4, 4, 4);
    if (inst.embedding.delta1() - inst.embedding.delta0() < 0.2) continue;
    const auto report = run_protocol(protocol_from_embedding(inst.embedding, eps), inst.matrix, 200,
                                     derive_seed(24, trial));
    ++checked;
    EXPECT_LE(report.max_error, limit) << "trial " << trial;
    for (Index x = 0; x < inst.matrix.rows(); ++x) {
      for (Index y = 0; y < inst.matrix.cols(); ++y) {
        EXPECT_EQ(std::isnan(report.per_pair_error(x, y)), inst.matrix(x, y) == 0);
      }
    }
  }
  EXPECT_GE(checked, 4);
}

TEST(RunProtocol, DeterministicAndValidated) {
  const RealMatrix id = RealMatrix::Identity(4, 4);
  const auto p = protocol_from_embedding(ThresholdEmbedding(id, id, 0.0, 1.0), 0.25);
  const auto a = run_protocol(p, eq_matrix(2), 50, 3);
  const auto b = run_protocol(p, eq_matrix(2), 50, 3);
  EXPECT_EQ(a.per_pair_error, b.per_pair_error);

  const RealMatrix same = RealVector::Unit(4, 0).replicate(1, 4);
  const FingerprintProtocol bad(ThresholdEmbedding(same, same, 0.0, 1.0), 5, 0.5);
  EXPECT_THROW(run_protocol(bad, eq_matrix(2), 10, 0), PreconditionError);
}

}  // namespace
}  // namespace qfp
