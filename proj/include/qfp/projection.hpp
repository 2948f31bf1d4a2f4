#pragma once

#include <cstddef>
#include <optional>
#include <utility>

#include "qfp/linalg.hpp"
#include "qfp/rng.hpp"

namespace qfp {

/// Smallest d with d >= 4 ln(N) / (eps^2/2 - eps^3/3), the Johnson-Lindenstrauss
/// target dimension for N points at squared-distance distortion eps.
std::size_t jl_dimension(std::size_t num_points, double eps);

enum class ProjectionMode {
  /// d x D matrix of independent N(0, 1) entries scaled by 1/sqrt(d).
  kGaussian,
  /// Test mode: requires d == D and returns the identity map.
  kIdentity,
};

struct ProjectionSpec {
  Index source_dim = 0;
  Index target_dim = 0;
  Seed seed = 0;
  ProjectionMode mode = ProjectionMode::kGaussian;
};

/// The target_dim x source_dim matrix of the map described by spec.
RealMatrix projection_matrix(const ProjectionSpec& spec);

/// Applies one random linear map to every column of `vectors`.
RealMatrix project_vectors(const RealMatrix& vectors, Index target_dim, Seed seed,
                           ProjectionMode mode = ProjectionMode::kGaussian);

struct DistortionReport {
  bool ok = true;
  /// max |‖p(u)-p(v)‖² / ‖u-v‖² - 1| over checked pairs.
  double max_distortion = 0.0;
  /// Column indices of the worst pair; index `zero_index` is the appended zero vector.
  std::optional<std::pair<Index, Index>> worst_pair;
  Index zero_index = 0;
  std::size_t pairs_checked = 0;
  /// Worst additive inner-product error, recovered through the polarization identity.
  double max_inner_product_error = 0.0;
  /// Whether every inner-product error is within 3·eps·max(‖u‖², ‖v‖²).
  bool inner_products_within_bound = true;
};

/// Checks pairwise squared distances of `original` against `projected` within
/// (1 ± eps). The zero vector is appended to both sets, so norms are checked
/// too. Pairs at distance exactly zero are skipped.
DistortionReport verify_distortion(const RealMatrix& original, const RealMatrix& projected,
                                   double eps);

/// Additive inner-product error implied by distortion eps via polarization.
double inner_product_error_bound(double eps, double norm2_u, double norm2_v);

/// eps = 1/(10 · 2^(2q)): keeps the inner-product error of vectors of norm
/// at most 2^q below 1/10.
double inner_product_preset_eps(int q);

}  // namespace qfp
