#pragma once

#include <optional>

#include "qfp/embeddings.hpp"
#include "qfp/rng.hpp"

namespace qfp {

/// Krivine's upper estimate of the Grothendieck constant.
inline constexpr double kGrothendieck = 1.7822139781;

/// ‖M‖ / sqrt(|X|·|Y|), clamped to 1. Total matrices only.
double forster_bound(const SignMatrix& m);

/// K_G · ‖M‖_{∞→1} / (|X|·|Y|), clamped to 1. Total matrices with at most 25 columns.
double linial_bound(const SignMatrix& m);

/// Minimum of the computable spectral bounds. Total matrices only.
double margin_upper_bound(const SignMatrix& m);

struct HeuristicConfig {
  int restarts = 8;
  int iterations = 2000;
  double step = 0.05;
  double step_decay = 0.999;
  /// The soft-min temperature is annealed geometrically between these.
  double softmin_start = 1.0;
  double softmin_end = 0.01;
};

/// Projected gradient ascent on a soft-min of M(x,y)·<alpha_x, beta_y> over
/// unit vectors in dimension d, best over restarts. Besides the random
/// restarts it also starts from the (1, ±√2·e)/√3 construction when M has the
/// equality pattern and d > |X|, and from (e_x, M(·,y)/‖M(·,y)‖) when d >= |X|.
/// The returned gamma is the exact achieved margin. Throws PreconditionError
/// when no start reaches a positive margin.
Realization maximize_margin_heuristic(const SignMatrix& m, Index d, Seed seed,
                                      const HeuristicConfig& config = {});

/// 1/γ²: copies needed by any repeated fingerprinting protocol, up to an
/// unspecified constant.
double repetition_lower_bound(double gamma_upper);

/// (1/4)·log2(1/γ): entanglement-assisted quantum communication lower bound
/// in bits, up to an unspecified additive constant.
double qent_lower_bound(double gamma_upper);

struct HeuristicRequest {
  Index dimension = 1;
  Seed seed = 0;
  HeuristicConfig config;
};

struct MarginReportOptions {
  /// Spectral bounds refuse promise matrices; without them the upper bound is
  /// the trivial γ <= 1.
  bool spectral = true;
  std::optional<HeuristicRequest> heuristic;
};

struct MarginReport {
  std::optional<double> forster;
  std::optional<double> linial;
  double upper = 1.0;
  bool upper_is_trivial = false;
  std::optional<double> heuristic_lower;
  /// Evaluated at `upper`; asymptotic, constants omitted.
  double qent_lower_bits = 0.0;
  double repetition_lower = 1.0;
};

MarginReport margin_report(const SignMatrix& m, const MarginReportOptions& options = {});

}  // namespace qfp
