#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "qfp/embeddings.hpp"
#include "qfp/rng.hpp"

namespace qfp {

/// Classical one-way protocol with public randomness, as truth tables.
/// Inputs range over {0,1}^n (|X| = |Y| = 2^n), messages over [2^c], and r
/// indexes the explicit list of shared random strings.
class OneWayProtocol {
 public:
  using AliceFn = std::function<std::uint32_t(Index x, std::uint64_t r)>;
  using BobFn = std::function<bool(std::uint32_t message, Index y, std::uint64_t r)>;

  /// alice_messages[r·|X| + x]; bob_accepts[(r·|Y| + y)·2^c + m].
  OneWayProtocol(int input_bits, int message_bits, std::vector<std::uint64_t> random_strings,
                 std::vector<std::uint32_t> alice_messages, std::vector<std::uint8_t> bob_accepts);

  static OneWayProtocol from_functions(int input_bits, int message_bits,
                                       std::vector<std::uint64_t> random_strings,
                                       const AliceFn& alice, const BobFn& bob);

  int input_bits() const { return input_bits_; }
  int message_bits() const { return message_bits_; }
  Index inputs() const { return Index{1} << input_bits_; }
  Index messages() const { return Index{1} << message_bits_; }
  std::size_t randomness_size() const { return random_strings_.size(); }
  const std::vector<std::uint64_t>& random_strings() const { return random_strings_; }
  const std::vector<std::uint32_t>& alice_table() const { return alice_; }
  const std::vector<std::uint8_t>& bob_table() const { return bob_; }

  std::uint32_t alice_message(Index x, std::size_t r) const {
    return alice_[r * static_cast<std::size_t>(inputs()) + static_cast<std::size_t>(x)];
  }
  bool bob_accepts(std::uint32_t message, Index y, std::size_t r) const {
    const auto row = r * static_cast<std::size_t>(inputs()) + static_cast<std::size_t>(y);
    return bob_[row * static_cast<std::size_t>(messages()) + message] != 0;
  }

 private:
  int input_bits_;
  int message_bits_;
  std::vector<std::uint64_t> random_strings_;
  std::vector<std::uint32_t> alice_;
  std::vector<std::uint8_t> bob_;
};

/// Classical simultaneous-message protocol with public randomness.
class ClassicalSMPProtocol {
 public:
  using MessageFn = std::function<std::uint32_t(Index input, std::uint64_t r)>;
  using RefereeFn = std::function<bool(std::uint32_t alice, std::uint32_t bob)>;

  /// alice_messages[r·|X| + x]; bob_messages[r·|Y| + y]; referee[m_a·2^c + m_b].
  ClassicalSMPProtocol(int input_bits, int message_bits, std::vector<std::uint64_t> random_strings,
                       std::vector<std::uint32_t> alice_messages,
                       std::vector<std::uint32_t> bob_messages, std::vector<std::uint8_t> referee);

  static ClassicalSMPProtocol from_functions(int input_bits, int message_bits,
                                             std::vector<std::uint64_t> random_strings,
                                             const MessageFn& alice, const MessageFn& bob,
                                             const RefereeFn& referee);

  int input_bits() const { return input_bits_; }
  int message_bits() const { return message_bits_; }
  Index inputs() const { return Index{1} << input_bits_; }
  Index messages() const { return Index{1} << message_bits_; }
  std::size_t randomness_size() const { return random_strings_.size(); }
  const std::vector<std::uint64_t>& random_strings() const { return random_strings_; }
  const std::vector<std::uint32_t>& alice_table() const { return alice_; }
  const std::vector<std::uint32_t>& bob_table() const { return bob_; }
  const std::vector<std::uint8_t>& referee_table() const { return referee_; }

  std::uint32_t alice_message(Index x, std::size_t r) const {
    return alice_[r * static_cast<std::size_t>(inputs()) + static_cast<std::size_t>(x)];
  }
  std::uint32_t bob_message(Index y, std::size_t r) const {
    return bob_[r * static_cast<std::size_t>(inputs()) + static_cast<std::size_t>(y)];
  }
  bool referee_accepts(std::uint32_t alice, std::uint32_t bob) const {
    return referee_[static_cast<std::size_t>(alice) * static_cast<std::size_t>(messages()) + bob] != 0;
  }

 private:
  int input_bits_;
  int message_bits_;
  std::vector<std::uint64_t> random_strings_;
  std::vector<std::uint32_t> alice_;
  std::vector<std::uint32_t> bob_;
  std::vector<std::uint8_t> referee_;
};

/// Acceptance probabilities over uniform r, by running the protocol directly.
RealMatrix simulate_acceptance(const OneWayProtocol& protocol);
RealMatrix simulate_acceptance(const ClassicalSMPProtocol& protocol);

/// Vectors a_r(x), b_r(y) per shared random string with ‖·‖ <= L, realizing
/// P(x, y) = (1/|R|) Σ_r <a_r(x), b_r(y)>.
class VectorSystem {
 public:
  /// a_blocks[r] is dimension x |X| (column x is a_r(x)); b_blocks[r] likewise.
  VectorSystem(std::vector<RealMatrix> a_blocks, std::vector<RealMatrix> b_blocks, double norm_bound);

  std::size_t randomness_size() const { return a_.size(); }
  Index dimension() const { return a_.front().rows(); }
  Index x_count() const { return a_.front().cols(); }
  Index y_count() const { return b_.front().cols(); }
  double norm_bound() const { return norm_bound_; }
  const RealMatrix& a(std::size_t r) const { return a_[r]; }
  const RealMatrix& b(std::size_t r) const { return b_[r]; }

  RealMatrix acceptance_matrix() const;

 private:
  std::vector<RealMatrix> a_;
  std::vector<RealMatrix> b_;
  double norm_bound_;
};

/// a_r(x) = indicator of Alice's message; b_r(y) = indicator of the messages
/// Bob accepts. L = √(2^c).
VectorSystem compile_one_way(const OneWayProtocol& protocol);

/// a_r(x) = indicator of Alice's message; b_r(y)[m] = referee(m, bob(y, r)).
/// L = √(2^c).
VectorSystem compile_smp(const ClassicalSMPProtocol& protocol);

struct PaddedStates {
  RealMatrix alphas;
  RealMatrix betas;
};

/// Junk padding of block r: (a ⊕ √(L² - ‖a‖²)·e_junk_a) / L and the same for b
/// with a distinct junk coordinate. Adds two dimensions; <alpha, beta> = <a, b>/L².
PaddedStates pad_to_states(const VectorSystem& system, std::size_t r);

enum class ThresholdMode {
  /// Thresholds are the exact extremal squared overlaps on each side.
  kExact,
  /// Thresholds from the protocol's error bound: (err/L²)² and ((1-err)/L²)².
  kTheoremBound,
};

struct AssemblyOptions {
  ThresholdMode mode = ThresholdMode::kExact;
  double protocol_error = 1.0 / 3.0;
};

/// Block vectors of dimension |R|·(dim + 2): block r is pad_to_states(r)/√|R|,
/// so <alpha_x, beta_y> = P(x, y)/L². Thresholds come from `m`.
ThresholdEmbedding assemble_shared_randomness_states(const VectorSystem& system,
                                                     const SignMatrix& m,
                                                     const AssemblyOptions& options = {});

/// Projects the embedding's vectors with eps = (delta1 - delta0)/10, re-pads
/// them to unit norm with two junk coordinates and tightens the thresholds
/// by a quarter of the gap each. Retries seeds until the result verifies.
ThresholdEmbedding reduce_embedding_dimension(const ThresholdEmbedding& e, const SignMatrix& m,
                                              Seed seed, const ReductionOptions& options = {});

struct QuantizerSpec {
  int precision_bits = 16;
  /// Values are clamped to [-2^range_exponent, 2^range_exponent].
  int range_exponent = 2;
};

/// Symmetric fixed point with round-to-nearest: 2^precision_bits levels
/// spanning [-2^q, 2^q].
double quantize(double value, const QuantizerSpec& spec);

/// Classical public-coin estimator of <alpha_x, beta_y>: per repetition both
/// parties apply the same seeded k-dimensional Gaussian map, quantize, and the
/// referee takes the inner product. Returns the mean over repetitions.
double classical_projection_protocol(const ThresholdEmbedding& e, PairIndex pair, Index k,
                                     std::size_t reps, int precision_bits, Seed seed);

}  // namespace qfp
