#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "qfp/compiler.hpp"
#include "qfp/embeddings.hpp"
#include "qfp/rng.hpp"

namespace qfp {

inline constexpr int kMaxProblemBits = 12;

/// Equality on n bits: -1 on the diagonal (f = 1), +1 elsewhere.
SignMatrix eq_matrix(int n);

/// Inner product mod 2 on k bits: M(x, y) = (-1)^<x, y>.
SignMatrix ip_matrix(int k);

/// HAM^(d)_n: -1 iff the Hamming distance between x and y is at most d.
SignMatrix ham_matrix(int n, int d);

enum class RandomnessSet {
  /// R = {0,1}^n, enumerated.
  kFull,
  /// 32·n strings drawn uniformly (the Newman-style cap).
  kSampled,
};

/// c = 1 parity protocol for equality: messages <x, r> and <y, r> mod 2, the
/// referee accepts iff they agree. Accepts x = y always and x != y with
/// probability exactly 1/2 over the full set.
ClassicalSMPProtocol eq_parity_protocol(int n, RandomnessSet set = RandomnessSet::kFull,
                                        Seed seed = 0);

/// The same test as a one-way protocol: Bob accepts iff m_a = <y, r>.
OneWayProtocol eq_parity_one_way(int n, RandomnessSet set = RandomnessSet::kFull, Seed seed = 0);

/// Pr[<x, s> = <y, s> mod 2] for s with i.i.d. Bernoulli(bias) entries and
/// Hamming distance `distance`: (1 + (1 - 2·bias)^distance) / 2.
double ham_collision_probability(int distance, double bias);

struct HamAnalysis {
  int n = 0;
  int d = 0;
  /// 1/(2d).
  double bias = 0.0;
  /// Collision probability indexed by Hamming distance 0..n.
  std::vector<double> collision_by_distance;
  /// Squared collision probability at distance d + 1 and d.
  double delta0 = 0.0;
  double delta1 = 0.0;
  /// (delta1 - delta0) / (2 + delta1 + delta0).
  double margin_lower_bound = 0.0;
};

/// Closed-form thresholds and margin bound of the biased-parity sketch
/// embedding of HAM^(d)_n. Requires 1 <= d < n/2 and a gap of at least 1e-6.
HamAnalysis ham_collision_analysis(int n, int d);

struct HamParityEmbedding {
  HamAnalysis analysis;
  /// Name of the message construction; it stands in for an unspecified one.
  std::string construction = "biased-parity sketch (substituted)";
  bool enumerated = false;
  std::size_t randomness_size = 0;
  /// Extremal squared overlaps realized by this set of sketches.
  double empirical_delta0 = 0.0;
  double empirical_delta1 = 0.0;
  /// Present when the sketches separate the matrix and the vectors fit in memory.
  std::optional<ThresholdEmbedding> embedding;
};

/// Fingerprint states (1/√|R|) Σ_r |r>|a_rx> where bit a_rx = <x, s_r> mod 2
/// and s_r has Bernoulli(1/(2d)) entries. With num_r == 0 the set R is the
/// full product {0..2d-1}^n (entry j of s_r is 1 iff digit j is 0), which
/// makes every overlap equal its closed form; otherwise num_r strings are
/// sampled from `seed`.
HamParityEmbedding ham_parity_embedding(int n, int d, std::size_t num_r, Seed seed);

struct ProblemInstance {
  std::string name;
  int n = 0;
  int k = 0;
  int d = 0;
  SignMatrix matrix;
  std::optional<ClassicalSMPProtocol> protocol;
};

/// Builtin problems by name: "eq" (n), "ip" (k), "ham" (n, d). The parity
/// protocol is attached to "eq" when requested.
ProblemInstance make_problem(const std::string& name, int n, int k, int d, bool with_protocol);

}  // namespace qfp
