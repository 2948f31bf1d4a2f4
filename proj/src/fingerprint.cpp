#include "qfp/fingerprint.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace qfp {
namespace {

void require_swap_inputs(const RealVector& alpha, const RealVector& beta) {
  if (alpha.size() != beta.size()) throw DimensionError("swap test: dimension mismatch");
  if (std::abs(alpha.norm() - 1.0) > kSwapUnitTolerance ||
      std::abs(beta.norm() - 1.0) > kSwapUnitTolerance) {
    throw PreconditionError("swap test: inputs must be unit vectors");
  }
}

}  // namespace

double swap_test_prob(const RealVector& alpha, const RealVector& beta) {
  require_swap_inputs(alpha, beta);
  const double overlap = std::min(1.0, alpha.dot(beta) * alpha.dot(beta));
  return 0.5 + overlap / 2.0;
}

std::vector<std::uint8_t> sample_swap_tests(const RealVector& alpha, const RealVector& beta,
                                            std::size_t repetitions, Seed seed) {
  if (repetitions < 1) throw PreconditionError("sample_swap_tests: need at least one repetition");
  const double p_zero = swap_test_prob(alpha, beta);
  Rng rng(seed);
  std::vector<std::uint8_t> outcomes(repetitions);
  for (auto& bit : outcomes) bit = rng.uniform() < p_zero ? 0 : 1;
  return outcomes;
}

std::size_t required_repetitions(double delta0, double delta1, double eps) {
  if (!(0.0 <= delta0 && delta0 < delta1 && delta1 <= 1.0)) {
    throw PreconditionError("required_repetitions: need 0 <= delta0 < delta1 <= 1");
  }
  if (!(eps > 0.0 && eps < 0.5)) throw PreconditionError("required_repetitions: eps must lie in (0, 1/2)");
  const double gap = delta1 - delta0;
  return static_cast<std::size_t>(std::ceil(8.0 * std::log(2.0 / eps) / (gap * gap)));
}

int referee_decide(std::span<const std::uint8_t> outcomes, double theta) {
  if (outcomes.empty()) throw PreconditionError("referee_decide: no outcomes");
  if (!(theta > 0.0 && theta < 1.0)) throw PreconditionError("referee_decide: theta must lie in (0, 1)");
  const auto zeros = std::count(outcomes.begin(), outcomes.end(), std::uint8_t{0});
  const double fraction = static_cast<double>(zeros) / static_cast<double>(outcomes.size());
  const double estimate = std::clamp(2.0 * fraction - 1.0, 0.0, 1.0);
  return estimate >= theta ? 1 : 0;
}

FingerprintProtocol::FingerprintProtocol(ThresholdEmbedding embedding, std::size_t repetitions,
                                         double theta)
    : embedding_(std::move(embedding)), repetitions_(repetitions), theta_(theta) {
  if (repetitions_ < 1) throw PreconditionError("protocol: repetitions must be positive");
  if (!(embedding_.delta0() < theta_ && theta_ < embedding_.delta1())) {
    throw PreconditionError("protocol: threshold must lie strictly between delta0 and delta1");
  }
}

std::size_t FingerprintProtocol::qubits_per_copy() const {
  const auto dim = static_cast<double>(embedding_.dimension());
  return static_cast<std::size_t>(std::ceil(std::log2(dim)));
}

FingerprintProtocol protocol_from_embedding(const ThresholdEmbedding& embedding, double eps) {
  const std::size_t r = required_repetitions(embedding.delta0(), embedding.delta1(), eps);
  return FingerprintProtocol(embedding, r, (embedding.delta0() + embedding.delta1()) / 2.0);
}

FingerprintProtocol protocol_from_margin(const SignMatrix& m, const Realization& r, double eps) {
  if (!verify_realization(r, m).valid) {
    throw PreconditionError("protocol_from_margin: realization does not achieve its margin");
  }
  return protocol_from_embedding(realization_to_embedding(r), eps);
}

RunReport run_protocol(const FingerprintProtocol& protocol, const SignMatrix& m,
                       std::size_t trials, Seed seed) {
  if (trials < 1) throw PreconditionError("run_protocol: trials must be positive");
  const auto& e = protocol.embedding();
  const auto check = verify_threshold_embedding(e, m);
  if (!check.valid) throw PreconditionError("run_protocol: embedding does not separate the matrix");

  RunReport report;
  report.trials = trials;
  report.per_pair_error =
      RealMatrix::Constant(m.rows(), m.cols(), std::numeric_limits<double>::quiet_NaN());
  for (Index x = 0; x < m.rows(); ++x) {
    for (Index y = 0; y < m.cols(); ++y) {
      if (m(x, y) == 0) continue;
      const int expected = m(x, y) == -1 ? 1 : 0;
      const Seed pair_seed = derive_seed(seed, static_cast<std::uint64_t>(x * m.cols() + y));
      const RealVector alpha = e.alphas().col(x);
      const RealVector beta = e.betas().col(y);
      std::size_t wrong = 0;
      for (std::size_t t = 0; t < trials; ++t) {
        const auto outcomes =
            sample_swap_tests(alpha, beta, protocol.repetitions(), derive_seed(pair_seed, t));
        if (referee_decide(outcomes, protocol.theta()) != expected) ++wrong;
      }
      const double error = static_cast<double>(wrong) / static_cast<double>(trials);
      report.per_pair_error(x, y) = error;
      report.max_error = std::max(report.max_error, error);
    }
  }
  return report;
}

}  // namespace qfp
