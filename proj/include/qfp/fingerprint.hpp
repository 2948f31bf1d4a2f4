#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "qfp/embeddings.hpp"
#include "qfp/rng.hpp"

namespace qfp {

/// Unit-norm slack accepted by the swap-test routines.
inline constexpr double kSwapUnitTolerance = 1e-6;

/// Probability that the swap test on (alpha, beta) outputs 0: 1/2 + <alpha, beta>²/2.
double swap_test_prob(const RealVector& alpha, const RealVector& beta);

/// r independent swap-test outcomes (0 or 1), deterministic in seed.
std::vector<std::uint8_t> sample_swap_tests(const RealVector& alpha, const RealVector& beta,
                                            std::size_t repetitions, Seed seed);

/// Hoeffding-sufficient repetition count ceil(8 ln(2/eps) / (delta1 - delta0)²).
///
/// The referee's estimate 2p̂ - 1 of the squared overlap must land within
/// (delta1 - delta0)/2 of its mean, i.e. p̂ within a quarter of the gap.
std::size_t required_repetitions(double delta0, double delta1, double eps);

/// Estimates est = clamp(2·(fraction of zeros) - 1, 0, 1) and returns 1 iff
/// est >= theta. Ties go to 1.
int referee_decide(std::span<const std::uint8_t> outcomes, double theta);

/// Repeated fingerprinting protocol: r swap tests on the embedding's states,
/// thresholded at theta.
class FingerprintProtocol {
 public:
  FingerprintProtocol(ThresholdEmbedding embedding, std::size_t repetitions, double theta);

  const ThresholdEmbedding& embedding() const { return embedding_; }
  std::size_t repetitions() const { return repetitions_; }
  double theta() const { return theta_; }

  /// ceil(log2(dimension)) qubits per fingerprint copy.
  std::size_t qubits_per_copy() const;
  /// 2·q·r: both parties send r copies.
  std::size_t total_qubits() const { return 2 * qubits_per_copy() * repetitions_; }

 private:
  ThresholdEmbedding embedding_;
  std::size_t repetitions_;
  double theta_;
};

/// Midpoint threshold and Hoeffding repetition count for a threshold embedding.
FingerprintProtocol protocol_from_embedding(const ThresholdEmbedding& embedding, double eps);

/// Protocol built from a margin realization through the (d+1)-dimensional
/// threshold embedding with delta0 = (1-γ)²/4, delta1 = (1+γ)²/4.
FingerprintProtocol protocol_from_margin(const SignMatrix& m, const Realization& r, double eps);

struct RunReport {
  /// Fraction of wrong referee outputs per pair; NaN outside the promise.
  RealMatrix per_pair_error;
  double max_error = 0.0;
  std::size_t trials = 0;
};

/// Monte-Carlo execution of the protocol on every promise pair. Pair (x, y)
/// draws from derive_seed(seed, x·|Y| + y) and trial t from
/// derive_seed(pair_seed, t), so pairs are independent of evaluation order.
RunReport run_protocol(const FingerprintProtocol& protocol, const SignMatrix& m,
                       std::size_t trials, Seed seed);

}  // namespace qfp
