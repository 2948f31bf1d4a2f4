#pragma once

#include <functional>
#include <optional>

#include "qfp/linalg.hpp"
#include "qfp/rng.hpp"

namespace qfp {

/// Tolerance on every verification inequality and on unit norms.
inline constexpr double kVerifyTolerance = 1e-9;

/// Largest input dimension embed_to_realization will tensor (64² + 1 = 4097).
inline constexpr Index kMaxTensorDimension = 64;

/// ±1 matrix M with M(x, y) = (-1)^f(x, y). A zero marks a pair outside the
/// promise domain.
class SignMatrix {
 public:
  /// Entries must lie in {-1, 0, +1} and at least one must be nonzero.
  explicit SignMatrix(RealMatrix entries);

  static SignMatrix from_function(Index rows, Index cols,
                                  const std::function<int(Index, Index)>& entry);

  Index rows() const { return entries_.rows(); }
  Index cols() const { return entries_.cols(); }
  int operator()(Index x, Index y) const { return static_cast<int>(entries_(x, y)); }
  const RealMatrix& values() const { return entries_; }

  /// True when no pair is excluded by a promise.
  bool is_total() const;
  Index nonzero_count() const;

  SignMatrix transposed() const { return SignMatrix(entries_.transpose()); }

  friend bool operator==(const SignMatrix& a, const SignMatrix& b) {
    return a.entries_ == b.entries_;
  }

 private:
  RealMatrix entries_;
};

/// Unit vectors alpha_x (columns of alphas) and beta_y (columns of betas)
/// with |<alpha_x, beta_y>|² <= delta0 on f = 0 and >= delta1 on f = 1.
class ThresholdEmbedding {
 public:
  ThresholdEmbedding(RealMatrix alphas, RealMatrix betas, double delta0, double delta1);

  const RealMatrix& alphas() const { return alphas_; }
  const RealMatrix& betas() const { return betas_; }
  double delta0() const { return delta0_; }
  double delta1() const { return delta1_; }
  Index dimension() const { return alphas_.rows(); }
  Index x_count() const { return alphas_.cols(); }
  Index y_count() const { return betas_.cols(); }

 private:
  RealMatrix alphas_;
  RealMatrix betas_;
  double delta0_;
  double delta1_;
};

/// Unit vectors with <alpha_x, beta_y> >= gamma on f = 0 and <= -gamma on f = 1.
class Realization {
 public:
  Realization(RealMatrix alphas, RealMatrix betas, double gamma);

  const RealMatrix& alphas() const { return alphas_; }
  const RealMatrix& betas() const { return betas_; }
  double gamma() const { return gamma_; }
  Index dimension() const { return alphas_.rows(); }
  Index x_count() const { return alphas_.cols(); }
  Index y_count() const { return betas_.cols(); }

 private:
  RealMatrix alphas_;
  RealMatrix betas_;
  double gamma_;
};

struct PairIndex {
  Index x = 0;
  Index y = 0;
  friend bool operator==(const PairIndex&, const PairIndex&) = default;
};

struct ThresholdReport {
  bool valid = true;
  /// Largest squared inner product over the f = 0 pairs (absent if none).
  std::optional<double> worst_zero_side;
  /// Smallest squared inner product over the f = 1 pairs (absent if none).
  std::optional<double> worst_one_side;
  /// Pair with the largest violation when invalid.
  std::optional<PairIndex> violation;
};

struct RealizationReport {
  bool valid = true;
  double achieved_margin = 0.0;
  PairIndex worst_pair;
};

// Raw checks on column matrices; they do not require unit vectors and back
// both the typed verifiers and the lenient CLI path.
ThresholdReport check_threshold_condition(const RealMatrix& alphas, const RealMatrix& betas,
                                          double delta0, double delta1, const SignMatrix& m);
RealizationReport check_margin_condition(const RealMatrix& alphas, const RealMatrix& betas,
                                         double gamma, const SignMatrix& m);

ThresholdReport verify_threshold_embedding(const ThresholdEmbedding& e, const SignMatrix& m);
RealizationReport verify_realization(const Realization& r, const SignMatrix& m);

/// Squares the embedding through alpha ⊗ alpha. With
/// a = (delta1 + delta0) / (2 + delta1 + delta0) the output vectors are
/// (√a, √(1-a) α⊗α) and (√a, -√(1-a) β⊗β) in dimension d² + 1, and the margin
/// is (delta1 - delta0) / (2 + delta1 + delta0).
Realization embed_to_realization(const ThresholdEmbedding& e);

/// (1, α)/√2 and (1, -β)/√2 in dimension d + 1, with
/// delta0 = (1-γ)²/4 and delta1 = (1+γ)²/4.
ThresholdEmbedding realization_to_embedding(const Realization& r);

struct ReductionOptions {
  /// Overrides the Johnson-Lindenstrauss target when set.
  std::optional<Index> target_dim;
  int max_attempts = 20;
};

/// Random projection with eps = γ/4 to jl_dimension(|X| + |Y| + 1, γ/4)
/// dimensions, renormalized, accepted once it realizes M with margin γ/2.
/// Returns the input unchanged when the target is not smaller.
Realization reduce_realization_dimension(const Realization& r, const SignMatrix& m, Seed seed,
                                         const ReductionOptions& options = {});

}  // namespace qfp
