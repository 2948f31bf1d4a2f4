#include "qfp/compiler.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qfp/projection.hpp"

namespace qfp {
namespace {

constexpr int kMaxInputBits = 12;
constexpr int kMaxMessageBits = 16;
constexpr double kMinimumGap = 1e-6;

void require_shape(int input_bits, int message_bits, std::size_t randomness) {
  if (input_bits < 0 || input_bits > kMaxInputBits) {
    throw PreconditionError("protocol: input length must lie in [0, " + std::to_string(kMaxInputBits) + "]");
  }
  if (message_bits < 0 || message_bits > kMaxMessageBits) {
    throw PreconditionError("protocol: message length must lie in [0, " + std::to_string(kMaxMessageBits) + "]");
  }
  if (randomness < 1) throw PreconditionError("protocol: the shared randomness set is empty");
}

void require_table(std::size_t actual, std::size_t expected, const char* name) {
  if (actual != expected) {
    throw DimensionError(std::string("protocol: ") + name + " table has " + std::to_string(actual) +
                         " entries, expected " + std::to_string(expected));
  }
}

void require_messages(const std::vector<std::uint32_t>& table, Index messages, const char* name) {
  for (auto m : table) {
    if (static_cast<Index>(m) >= messages) {
      throw PreconditionError(std::string("protocol: ") + name + " message out of range");
    }
  }
}

RealMatrix indicator_columns(Index dimension, Index count,
                             const std::function<std::uint32_t(Index)>& hot) {
  RealMatrix out = RealMatrix::Zero(dimension, count);
  for (Index i = 0; i < count; ++i) out(hot(i), i) = 1.0;
  return out;
}

RealMatrix pad_block(const RealMatrix& vectors, double bound, Index junk_row) {
  const Index dim = vectors.rows();
  RealMatrix out = RealMatrix::Zero(dim + 2, vectors.cols());
  out.topRows(dim) = vectors / bound;
  for (Index i = 0; i < vectors.cols(); ++i) {
    const double slack = bound * bound - vectors.col(i).squaredNorm();
    out(junk_row, i) = std::sqrt(std::max(0.0, slack)) / bound;
  }
  return out;
}

// Squared overlaps on either side of `m` and the resulting (delta0, delta1).
std::pair<double, double> extremal_thresholds(const RealMatrix& overlaps, const SignMatrix& m) {
  double delta0 = 0.0;
  double delta1 = 1.0;
  for (Index y = 0; y < m.cols(); ++y) {
    for (Index x = 0; x < m.rows(); ++x) {
      const double s = overlaps(x, y) * overlaps(x, y);
      if (m(x, y) == 1) delta0 = std::max(delta0, s);
      if (m(x, y) == -1) delta1 = std::min(delta1, s);
    }
  }
  return {delta0, std::min(delta1, 1.0)};
}

}  // namespace

OneWayProtocol::OneWayProtocol(int input_bits, int message_bits,
                               std::vector<std::uint64_t> random_strings,
                               std::vector<std::uint32_t> alice_messages,
                               std::vector<std::uint8_t> bob_accepts)
    : input_bits_(input_bits),
      message_bits_(message_bits),
      random_strings_(std::move(random_strings)),
      alice_(std::move(alice_messages)),
      bob_(std::move(bob_accepts)) {
  require_shape(input_bits_, message_bits_, random_strings_.size());
  const auto r = random_strings_.size();
  const auto n = static_cast<std::size_t>(inputs());
  require_table(alice_.size(), r * n, "alice");
  require_table(bob_.size(), r * n * static_cast<std::size_t>(messages()), "bob");
  require_messages(alice_, messages(), "alice");
}

OneWayProtocol OneWayProtocol::from_functions(int input_bits, int message_bits,
                                              std::vector<std::uint64_t> random_strings,
                                              const AliceFn& alice, const BobFn& bob) {
  require_shape(input_bits, message_bits, random_strings.size());
  const Index n = Index{1} << input_bits;
  const Index msgs = Index{1} << message_bits;
  std::vector<std::uint32_t> alice_table;
  std::vector<std::uint8_t> bob_table;
  alice_table.reserve(random_strings.size() * static_cast<std::size_t>(n));
  bob_table.reserve(random_strings.size() * static_cast<std::size_t>(n * msgs));
  for (const auto r : random_strings) {
    for (Index x = 0; x < n; ++x) alice_table.push_back(alice(x, r));
  }
  for (const auto r : random_strings) {
    for (Index y = 0; y < n; ++y) {
      for (Index m = 0; m < msgs; ++m) bob_table.push_back(bob(static_cast<std::uint32_t>(m), y, r) ? 1 : 0);
    }
  }
  return OneWayProtocol(input_bits, message_bits, std::move(random_strings), std::move(alice_table),
                        std::move(bob_table));
}

ClassicalSMPProtocol::ClassicalSMPProtocol(int input_bits, int message_bits,
                                           std::vector<std::uint64_t> random_strings,
                                           std::vector<std::uint32_t> alice_messages,
                                           std::vector<std::uint32_t> bob_messages,
                                           std::vector<std::uint8_t> referee)
    : input_bits_(input_bits),
      message_bits_(message_bits),
      random_strings_(std::move(random_strings)),
      alice_(std::move(alice_messages)),
      bob_(std::move(bob_messages)),
      referee_(std::move(referee)) {
  require_shape(input_bits_, message_bits_, random_strings_.size());
  const auto r = random_strings_.size();
  const auto n = static_cast<std::size_t>(inputs());
  const auto msgs = static_cast<std::size_t>(messages());
  require_table(alice_.size(), r * n, "alice");
  require_table(bob_.size(), r * n, "bob");
  require_table(referee_.size(), msgs * msgs, "referee");
  require_messages(alice_, messages(), "alice");
  require_messages(bob_, messages(), "bob");
}

ClassicalSMPProtocol ClassicalSMPProtocol::from_functions(int input_bits, int message_bits,
                                                          std::vector<std::uint64_t> random_strings,
                                                          const MessageFn& alice, const MessageFn& bob,
                                                          const RefereeFn& referee) {
  require_shape(input_bits, message_bits, random_strings.size());
  const Index n = Index{1} << input_bits;
  const auto msgs = std::uint32_t{1} << message_bits;
  std::vector<std::uint32_t> alice_table;
  std::vector<std::uint32_t> bob_table;
  std::vector<std::uint8_t> referee_table;
  for (const auto r : random_strings) {
    for (Index x = 0; x < n; ++x) alice_table.push_back(alice(x, r));
  }
  for (const auto r : random_strings) {
    for (Index y = 0; y < n; ++y) bob_table.push_back(bob(y, r));
  }
  for (std::uint32_t a = 0; a < msgs; ++a) {
    for (std::uint32_t b = 0; b < msgs; ++b) referee_table.push_back(referee(a, b) ? 1 : 0);
  }
  return ClassicalSMPProtocol(input_bits, message_bits, std::move(random_strings),
                              std::move(alice_table), std::move(bob_table), std::move(referee_table));
}

RealMatrix simulate_acceptance(const OneWayProtocol& protocol) {
  const Index n = protocol.inputs();
  RealMatrix accepted = RealMatrix::Zero(n, n);
  for (std::size_t r = 0; r < protocol.randomness_size(); ++r) {
    for (Index x = 0; x < n; ++x) {
      const auto message = protocol.alice_message(x, r);
      for (Index y = 0; y < n; ++y) {
        if (protocol.bob_accepts(message, y, r)) accepted(x, y) += 1.0;
      }
    }
  }
  return accepted / static_cast<double>(protocol.randomness_size());
}

RealMatrix simulate_acceptance(const ClassicalSMPProtocol& protocol) {
  const Index n = protocol.inputs();
  RealMatrix accepted = RealMatrix::Zero(n, n);
  for (std::size_t r = 0; r < protocol.randomness_size(); ++r) {
    for (Index x = 0; x < n; ++x) {
      const auto alice = protocol.alice_message(x, r);
      for (Index y = 0; y < n; ++y) {
        if (protocol.referee_accepts(alice, protocol.bob_message(y, r))) accepted(x, y) += 1.0;
      }
    }
  }
  return accepted / static_cast<double>(protocol.randomness_size());
}

VectorSystem::VectorSystem(std::vector<RealMatrix> a_blocks, std::vector<RealMatrix> b_blocks,
                           double norm_bound)
    : a_(std::move(a_blocks)), b_(std::move(b_blocks)), norm_bound_(norm_bound) {
  if (a_.empty() || a_.size() != b_.size()) {
    throw DimensionError("vector system: need matching, non-empty a and b block lists");
  }
  if (!(norm_bound_ > 0.0) || !std::isfinite(norm_bound_)) {
    throw PreconditionError("vector system: norm bound must be positive");
  }
  const Index dim = a_.front().rows();
  if (dim < 1) throw DimensionError("vector system: zero dimension");
  for (std::size_t r = 0; r < a_.size(); ++r) {
    if (a_[r].rows() != dim || b_[r].rows() != dim || a_[r].cols() != a_.front().cols() ||
        b_[r].cols() != b_.front().cols()) {
      throw DimensionError("vector system: block " + std::to_string(r) + " has a different shape");
    }
    require_finite(a_[r], "vector system");
    require_finite(b_[r], "vector system");
    const double worst = std::max(a_[r].colwise().norm().maxCoeff(), b_[r].colwise().norm().maxCoeff());
    if (worst > norm_bound_ + kVerifyTolerance) {
      throw PreconditionError("vector system: block " + std::to_string(r) +
                              " has a vector of norm above the bound");
    }
  }
}

RealMatrix VectorSystem::acceptance_matrix() const {
  RealMatrix p = RealMatrix::Zero(x_count(), y_count());
  for (std::size_t r = 0; r < a_.size(); ++r) p.noalias() += a_[r].transpose() * b_[r];
  return p / static_cast<double>(a_.size());
}

VectorSystem compile_one_way(const OneWayProtocol& protocol) {
  const Index n = protocol.inputs();
  const Index msgs = protocol.messages();
  std::vector<RealMatrix> a_blocks;
  std::vector<RealMatrix> b_blocks;
  for (std::size_t r = 0; r < protocol.randomness_size(); ++r) {
    a_blocks.push_back(indicator_columns(msgs, n, [&](Index x) { return protocol.alice_message(x, r); }));
    RealMatrix b = RealMatrix::Zero(msgs, n);
    for (Index y = 0; y < n; ++y) {
      for (Index m = 0; m < msgs; ++m) {
        if (protocol.bob_accepts(static_cast<std::uint32_t>(m), y, r)) b(m, y) = 1.0;
      }
    }
    b_blocks.push_back(std::move(b));
  }
  return VectorSystem(std::move(a_blocks), std::move(b_blocks), std::sqrt(static_cast<double>(msgs)));
}

VectorSystem compile_smp(const ClassicalSMPProtocol& protocol) {
  const Index n = protocol.inputs();
  const Index msgs = protocol.messages();
  std::vector<RealMatrix> a_blocks;
  std::vector<RealMatrix> b_blocks;
  for (std::size_t r = 0; r < protocol.randomness_size(); ++r) {
    a_blocks.push_back(indicator_columns(msgs, n, [&](Index x) { return protocol.alice_message(x, r); }));
    RealMatrix b = RealMatrix::Zero(msgs, n);
    for (Index y = 0; y < n; ++y) {
      const auto bob = protocol.bob_message(y, r);
      for (Index m = 0; m < msgs; ++m) {
        if (protocol.referee_accepts(static_cast<std::uint32_t>(m), bob)) b(m, y) = 1.0;
      }
    }
    b_blocks.push_back(std::move(b));
  }
  return VectorSystem(std::move(a_blocks), std::move(b_blocks), std::sqrt(static_cast<double>(msgs)));
}

PaddedStates pad_to_states(const VectorSystem& system, std::size_t r) {
  if (r >= system.randomness_size()) throw DimensionError("pad_to_states: random string index out of range");
  const Index dim = system.dimension();
  return {pad_block(system.a(r), system.norm_bound(), dim),
          pad_block(system.b(r), system.norm_bound(), dim + 1)};
}

ThresholdEmbedding assemble_shared_randomness_states(const VectorSystem& system,
                                                     const SignMatrix& m,
                                                     const AssemblyOptions& options) {
  if (system.x_count() != m.rows() || system.y_count() != m.cols()) {
    throw DimensionError("assemble: vector system does not match the sign matrix");
  }
  const auto blocks = system.randomness_size();
  const Index block_dim = system.dimension() + 2;
  const double scale = 1.0 / std::sqrt(static_cast<double>(blocks));
  RealMatrix alphas(block_dim * static_cast<Index>(blocks), system.x_count());
  RealMatrix betas(block_dim * static_cast<Index>(blocks), system.y_count());
  for (std::size_t r = 0; r < blocks; ++r) {
    const auto padded = pad_to_states(system, r);
    const Index offset = block_dim * static_cast<Index>(r);
    alphas.middleRows(offset, block_dim) = scale * padded.alphas;
    betas.middleRows(offset, block_dim) = scale * padded.betas;
  }

  double delta0 = 0.0;
  double delta1 = 1.0;
  if (options.mode == ThresholdMode::kExact) {
    std::tie(delta0, delta1) = extremal_thresholds(alphas.transpose() * betas, m);
  } else {
    const double l2 = system.norm_bound() * system.norm_bound();
    const double err = options.protocol_error;
    if (!(err >= 0.0 && err < 0.5)) throw PreconditionError("assemble: protocol error must lie in [0, 1/2)");
    delta0 = (err / l2) * (err / l2);
    delta1 = ((1.0 - err) / l2) * ((1.0 - err) / l2);
  }
  if (!(delta0 < delta1)) {
    throw PreconditionError("assemble: acceptance probabilities do not separate the 0-pairs from the 1-pairs");
  }
  ThresholdEmbedding embedding(alphas.colwise().normalized(), betas.colwise().normalized(), delta0, delta1);
  if (!verify_threshold_embedding(embedding, m).valid) {
    throw PreconditionError("assemble: the protocol violates the requested thresholds");
  }
  return embedding;
}

ThresholdEmbedding reduce_embedding_dimension(const ThresholdEmbedding& e, const SignMatrix& m,
                                              Seed seed, const ReductionOptions& options) {
  const double gap = e.delta1() - e.delta0();
  if (gap < kMinimumGap) throw PreconditionError("reduce_embedding_dimension: threshold gap too small");
  if (!verify_threshold_embedding(e, m).valid) {
    throw PreconditionError("reduce_embedding_dimension: input embedding does not separate the matrix");
  }
  const double eps = gap / 10.0;
  const auto count = static_cast<std::size_t>(e.x_count() + e.y_count());
  const Index target = options.target_dim ? *options.target_dim
                                          : static_cast<Index>(jl_dimension(count + 1, eps));
  if (target + 2 >= e.dimension()) return e;

  RealMatrix all(e.dimension(), e.x_count() + e.y_count());
  all << e.alphas(), e.betas();
  const double delta0 = e.delta0() + gap / 4.0;
  const double delta1 = e.delta1() - gap / 4.0;
  for (int attempt = 0; attempt < options.max_attempts; ++attempt) {
    const RealMatrix projected =
        project_vectors(all, target, derive_seed(seed, static_cast<std::uint64_t>(attempt)));
    const double bound = std::max(1.0, projected.colwise().norm().maxCoeff());
    RealMatrix alphas = pad_block(projected.leftCols(e.x_count()), bound, target);
    RealMatrix betas = pad_block(projected.rightCols(e.y_count()), bound, target + 1);
    alphas.colwise().normalize();
    betas.colwise().normalize();
    if (check_threshold_condition(alphas, betas, delta0, delta1, m).valid) {
      return ThresholdEmbedding(std::move(alphas), std::move(betas), delta0, delta1);
    }
  }
  throw RetriesExhausted("reduce_embedding_dimension: no projection preserved the tightened thresholds after " +
                         std::to_string(options.max_attempts) + " attempts");
}

double quantize(double value, const QuantizerSpec& spec) {
  if (spec.precision_bits < 2 || spec.precision_bits > 52) {
    throw PreconditionError("quantize: precision must lie in [2, 52] bits");
  }
  const double range = std::ldexp(1.0, spec.range_exponent);
  const double step = std::ldexp(2.0 * range, -spec.precision_bits);
  return std::clamp(std::round(value / step) * step, -range, range);
}

double classical_projection_protocol(const ThresholdEmbedding& e, PairIndex pair, Index k,
                                     std::size_t reps, int precision_bits, Seed seed) {
  if (k < 1) throw PreconditionError("classical_projection_protocol: k must be positive");
  if (reps < 1) throw PreconditionError("classical_projection_protocol: reps must be positive");
  if (pair.x < 0 || pair.x >= e.x_count() || pair.y < 0 || pair.y >= e.y_count()) {
    throw DimensionError("classical_projection_protocol: pair index out of range");
  }
  const QuantizerSpec quantizer{precision_bits, 2};
  const RealVector alpha = e.alphas().col(pair.x);
  const RealVector beta = e.betas().col(pair.y);
  const double scale = 1.0 / std::sqrt(static_cast<double>(k));
  double total = 0.0;
  for (std::size_t rep = 0; rep < reps; ++rep) {
    Rng rng(derive_seed(seed, rep));
    double estimate = 0.0;
    for (Index row = 0; row < k; ++row) {
      double pa = 0.0;
      double pb = 0.0;
      for (Index j = 0; j < alpha.size(); ++j) {
        const double g = scale * rng.normal();
        pa += g * alpha(j);
        pb += g * beta(j);
      }
      estimate += quantize(pa, quantizer) * quantize(pb, quantizer);
    }
    total += estimate;
  }
  return total / static_cast<double>(reps);
}

}  // namespace qfp
