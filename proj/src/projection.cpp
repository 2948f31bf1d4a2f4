#include "qfp/projection.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qfp {

std::size_t jl_dimension(std::size_t num_points, double eps) {
  if (num_points < 2) throw PreconditionError("jl_dimension: need at least 2 points");
  if (!(eps > 0.0 && eps < 1.0)) throw PreconditionError("jl_dimension: eps must lie in (0, 1)");
  const double denominator = eps * eps / 2.0 - eps * eps * eps / 3.0;
  const double bound = 4.0 * std::log(static_cast<double>(num_points)) / denominator;
  return static_cast<std::size_t>(std::ceil(bound));
}

RealMatrix projection_matrix(const ProjectionSpec& spec) {
  if (spec.target_dim < 1 || spec.target_dim > spec.source_dim) {
    throw DimensionError("projection: target dimension " + std::to_string(spec.target_dim) +
                         " outside [1, " + std::to_string(spec.source_dim) + "]");
  }
  if (spec.mode == ProjectionMode::kIdentity) {
    if (spec.target_dim != spec.source_dim) {
      throw DimensionError("projection: identity mode requires target == source dimension");
    }
    return RealMatrix::Identity(spec.target_dim, spec.source_dim);
  }
  Rng rng(spec.seed);
  const double scale = 1.0 / std::sqrt(static_cast<double>(spec.target_dim));
  RealMatrix map(spec.target_dim, spec.source_dim);
  // Row-major fill order is part of the reproducibility contract.
  for (Index i = 0; i < map.rows(); ++i) {
    for (Index j = 0; j < map.cols(); ++j) map(i, j) = scale * rng.normal();
  }
  return map;
}

RealMatrix project_vectors(const RealMatrix& vectors, Index target_dim, Seed seed,
                           ProjectionMode mode) {
  if (vectors.cols() == 0) throw DimensionError("project_vectors: empty vector list");
  const RealMatrix map = projection_matrix({vectors.rows(), target_dim, seed, mode});
  return map * vectors;
}

double inner_product_error_bound(double eps, double norm2_u, double norm2_v) {
  return 3.0 * eps * std::max(norm2_u, norm2_v);
}

double inner_product_preset_eps(int q) {
  if (q < 0) throw PreconditionError("inner_product_preset_eps: q must be non-negative");
  return 1.0 / (10.0 * std::ldexp(1.0, 2 * q));
}

DistortionReport verify_distortion(const RealMatrix& original, const RealMatrix& projected,
                                   double eps) {
  if (original.cols() != projected.cols()) {
    throw DimensionError("verify_distortion: vector lists differ in length");
  }
  if (!(eps > 0.0)) throw PreconditionError("verify_distortion: eps must be positive");
  const Index count = original.cols();

  RealMatrix u(original.rows(), count + 1);
  u << original, RealVector::Zero(original.rows());
  RealMatrix pu(projected.rows(), count + 1);
  pu << projected, RealVector::Zero(projected.rows());

  DistortionReport report;
  report.zero_index = count;
  const RealVector norms = u.colwise().squaredNorm().transpose();
  const RealVector projected_norms = pu.colwise().squaredNorm().transpose();

  for (Index i = 0; i <= count; ++i) {
    for (Index j = i + 1; j <= count; ++j) {
      const double dist = (u.col(i) - u.col(j)).squaredNorm();
      if (dist == 0.0) continue;
      const double projected_dist = (pu.col(i) - pu.col(j)).squaredNorm();
      ++report.pairs_checked;
      const double distortion = std::abs(projected_dist / dist - 1.0);
      if (!report.worst_pair || distortion > report.max_distortion) {
        report.max_distortion = distortion;
        report.worst_pair = {i, j};
      }
      if (j == count) continue;
      // <u, v> = (‖u‖² + ‖v‖² - ‖u - v‖²) / 2
      const double recovered = (projected_norms(i) + projected_norms(j) - projected_dist) / 2.0;
      const double error = std::abs(recovered - u.col(i).dot(u.col(j)));
      report.max_inner_product_error = std::max(report.max_inner_product_error, error);
      if (error > inner_product_error_bound(eps, norms(i), norms(j)) + 1e-12) {
        report.inner_products_within_bound = false;
      }
    }
  }
  report.ok = report.max_distortion <= eps;
  return report;
}

}  // namespace qfp
