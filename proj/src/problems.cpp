#include "qfp/problems.hpp"

#include <bit>
#include <cmath>
#include <string>

namespace qfp {
namespace {

constexpr std::size_t kMaxEnumeratedStrings = std::size_t{1} << 16;
constexpr double kMaxEmbeddingEntries = 16777216.0;  // 2^24 doubles
constexpr double kMinimumGap = 1e-6;

void require_bits(int n, const char* who) {
  if (n < 1 || n > kMaxProblemBits) {
    throw PreconditionError(std::string(who) + ": bit length must lie in [1, " +
                            std::to_string(kMaxProblemBits) + "]");
  }
}

int parity(std::uint64_t v) { return std::popcount(v) & 1; }

std::vector<std::uint64_t> parity_strings(int n, RandomnessSet set, Seed seed) {
  std::vector<std::uint64_t> strings;
  if (set == RandomnessSet::kFull) {
    for (std::uint64_t r = 0; r < (std::uint64_t{1} << n); ++r) strings.push_back(r);
  } else {
    Rng rng(seed);
    for (int i = 0; i < 32 * n; ++i) strings.push_back(rng.below(std::uint64_t{1} << n));
  }
  return strings;
}

// Sketch strings s_r as bit masks over n coordinates.
std::vector<std::uint64_t> ham_sketches(int n, int d, std::size_t num_r, Seed seed, bool& enumerated) {
  const auto base = static_cast<std::uint64_t>(2 * d);
  std::vector<std::uint64_t> sketches;
  enumerated = num_r == 0;
  if (enumerated) {
    const double total = std::pow(static_cast<double>(base), n);
    if (total > static_cast<double>(kMaxEnumeratedStrings)) {
      throw PreconditionError("ham_parity_embedding: (2d)^n = " + std::to_string(total) +
                              " strings is too many to enumerate; pass num_r > 0");
    }
    const auto count = static_cast<std::uint64_t>(total);
    sketches.reserve(count);
    for (std::uint64_t r = 0; r < count; ++r) {
      std::uint64_t digits = r;
      std::uint64_t mask = 0;
      for (int j = 0; j < n; ++j) {
        if (digits % base == 0) mask |= std::uint64_t{1} << j;
        digits /= base;
      }
      sketches.push_back(mask);
    }
  } else {
    Rng rng(seed);
    sketches.reserve(num_r);
    for (std::size_t r = 0; r < num_r; ++r) {
      std::uint64_t mask = 0;
      for (int j = 0; j < n; ++j) {
        if (rng.below(base) == 0) mask |= std::uint64_t{1} << j;
      }
      sketches.push_back(mask);
    }
  }
  return sketches;
}

}  // namespace

SignMatrix eq_matrix(int n) {
  require_bits(n, "eq_matrix");
  const Index size = Index{1} << n;
  return SignMatrix::from_function(size, size, [](Index x, Index y) { return x == y ? -1 : 1; });
}

SignMatrix ip_matrix(int k) {
  require_bits(k, "ip_matrix");
  const Index size = Index{1} << k;
  return SignMatrix::from_function(size, size, [](Index x, Index y) {
    return parity(static_cast<std::uint64_t>(x & y)) ? -1 : 1;
  });
}

SignMatrix ham_matrix(int n, int d) {
  require_bits(n, "ham_matrix");
  if (d < 0 || d >= n) throw PreconditionError("ham_matrix: need 0 <= d < n");
  const Index size = Index{1} << n;
  return SignMatrix::from_function(size, size, [d](Index x, Index y) {
    return std::popcount(static_cast<std::uint64_t>(x ^ y)) <= d ? -1 : 1;
  });
}

ClassicalSMPProtocol eq_parity_protocol(int n, RandomnessSet set, Seed seed) {
  require_bits(n, "eq_parity_protocol");
  auto message = [](Index input, std::uint64_t r) {
    return static_cast<std::uint32_t>(parity(static_cast<std::uint64_t>(input) & r));
  };
  return ClassicalSMPProtocol::from_functions(n, 1, parity_strings(n, set, seed), message, message,
                                              [](std::uint32_t a, std::uint32_t b) { return a == b; });
}

OneWayProtocol eq_parity_one_way(int n, RandomnessSet set, Seed seed) {
  require_bits(n, "eq_parity_one_way");
  return OneWayProtocol::from_functions(
      n, 1, parity_strings(n, set, seed),
      [](Index x, std::uint64_t r) {
        return static_cast<std::uint32_t>(parity(static_cast<std::uint64_t>(x) & r));
      },
      [](std::uint32_t m, Index y, std::uint64_t r) {
        return static_cast<int>(m) == parity(static_cast<std::uint64_t>(y) & r);
      });
}

double ham_collision_probability(int distance, double bias) {
  if (distance < 0) throw PreconditionError("ham_collision_probability: negative distance");
  return (1.0 + std::pow(1.0 - 2.0 * bias, distance)) / 2.0;
}

HamAnalysis ham_collision_analysis(int n, int d) {
  require_bits(n, "ham_parity_embedding");
  if (d < 1 || 2 * d >= n) throw PreconditionError("ham_parity_embedding: need 1 <= d < n/2");
  HamAnalysis a;
  a.n = n;
  a.d = d;
  a.bias = 1.0 / (2.0 * d);
  for (int distance = 0; distance <= n; ++distance) {
    a.collision_by_distance.push_back(ham_collision_probability(distance, a.bias));
  }
  // The collision probability decreases with distance, so the extremes sit
  // at the boundary distances d and d + 1.
  double lowest_inside = 1.0;
  double highest_outside = 0.0;
  for (int distance = 0; distance <= n; ++distance) {
    const double s = a.collision_by_distance[distance] * a.collision_by_distance[distance];
    if (distance <= d) lowest_inside = std::min(lowest_inside, s);
    else highest_outside = std::max(highest_outside, s);
  }
  a.delta0 = highest_outside;
  a.delta1 = lowest_inside;
  if (a.delta1 - a.delta0 < kMinimumGap) {
    throw PreconditionError("ham_parity_embedding: collision gap below 1e-6 for d = " + std::to_string(d));
  }
  a.margin_lower_bound = (a.delta1 - a.delta0) / (2.0 + a.delta1 + a.delta0);
  return a;
}

HamParityEmbedding ham_parity_embedding(int n, int d, std::size_t num_r, Seed seed) {
  HamParityEmbedding result;
  result.analysis = ham_collision_analysis(n, d);
  bool enumerated = false;
  const auto sketches = ham_sketches(n, d, num_r, seed, enumerated);
  result.enumerated = enumerated;
  result.randomness_size = sketches.size();
  const double weight = 1.0 / static_cast<double>(sketches.size());

  // <alpha_x, beta_y> only depends on z = x xor y: the fraction of sketches
  // with <z, s_r> = 0.
  const std::uint64_t size = std::uint64_t{1} << n;
  std::vector<double> overlap_by_difference(size);
  for (std::uint64_t z = 0; z < size; ++z) {
    std::size_t agree = 0;
    for (const auto s : sketches) agree += parity(z & s) == 0 ? 1 : 0;
    overlap_by_difference[z] = static_cast<double>(agree) * weight;
  }
  double lowest_inside = 1.0;
  double highest_outside = 0.0;
  for (std::uint64_t z = 0; z < size; ++z) {
    const double s = overlap_by_difference[z] * overlap_by_difference[z];
    if (std::popcount(z) <= d) lowest_inside = std::min(lowest_inside, s);
    else highest_outside = std::max(highest_outside, s);
  }
  result.empirical_delta0 = highest_outside;
  result.empirical_delta1 = lowest_inside;

  double delta0 = highest_outside;
  double delta1 = lowest_inside;
  if (enumerated) {
    delta0 = result.analysis.delta0;
    delta1 = result.analysis.delta1;
  }
  const double entries = 2.0 * static_cast<double>(sketches.size()) * 2.0 * static_cast<double>(size);
  if (!(delta0 < delta1) || entries > kMaxEmbeddingEntries) return result;

  const Index dim = 2 * static_cast<Index>(sketches.size());
  const double amplitude = std::sqrt(weight);
  RealMatrix states = RealMatrix::Zero(dim, static_cast<Index>(size));
  for (std::uint64_t x = 0; x < size; ++x) {
    for (std::size_t r = 0; r < sketches.size(); ++r) {
      const auto bit = parity(x & sketches[r]);
      states(2 * static_cast<Index>(r) + bit, static_cast<Index>(x)) = amplitude;
    }
  }
  result.embedding.emplace(states, states, delta0, delta1);
  return result;
}

ProblemInstance make_problem(const std::string& name, int n, int k, int d, bool with_protocol) {
  if (name == "eq") {
    ProblemInstance p{"eq", n, 0, 0, eq_matrix(n), std::nullopt};
    if (with_protocol) p.protocol = eq_parity_protocol(n);
    return p;
  }
  if (name == "ip") return ProblemInstance{"ip", 0, k, 0, ip_matrix(k), std::nullopt};
  if (name == "ham") return ProblemInstance{"ham", n, 0, d, ham_matrix(n, d), std::nullopt};
  throw PreconditionError("unknown builtin problem '" + name + "' (expected eq, ip or ham)");
}

}  // namespace qfp
