#include "qfp/embeddings.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "qfp/projection.hpp"

namespace qfp {
namespace {

void require_unit_columns(const RealMatrix& vectors, const char* what) {
  require_finite(vectors, what);
  for (Index i = 0; i < vectors.cols(); ++i) {
    if (std::abs(vectors.col(i).norm() - 1.0) > kVerifyTolerance) {
      throw PreconditionError(std::string(what) + " column " + std::to_string(i) +
                              " is not a unit vector");
    }
  }
}

void require_shared_dimension(const RealMatrix& alphas, const RealMatrix& betas) {
  if (alphas.rows() != betas.rows() || alphas.rows() < 1) {
    throw DimensionError("alphas and betas must share a positive dimension");
  }
  if (alphas.cols() < 1 || betas.cols() < 1) throw DimensionError("empty vector family");
}

void require_matching(const RealMatrix& alphas, const RealMatrix& betas, const SignMatrix& m) {
  require_shared_dimension(alphas, betas);
  if (alphas.cols() != m.rows() || betas.cols() != m.cols()) {
    throw DimensionError("vector counts (" + std::to_string(alphas.cols()) + ", " +
                         std::to_string(betas.cols()) + ") do not match the " +
                         std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                         " sign matrix");
  }
}

RealMatrix unit_columns(const RealMatrix& vectors) { return vectors.colwise().normalized(); }

}  // namespace

SignMatrix::SignMatrix(RealMatrix entries) : entries_(std::move(entries)) {
  if (entries_.rows() < 1 || entries_.cols() < 1) throw DimensionError("sign matrix is empty");
  bool any_nonzero = false;
  for (Index j = 0; j < entries_.cols(); ++j) {
    for (Index i = 0; i < entries_.rows(); ++i) {
      const double v = entries_(i, j);
      if (v != 0.0 && v != 1.0 && v != -1.0) {
        throw PreconditionError("sign matrix entries must be -1, 0 or +1");
      }
      any_nonzero = any_nonzero || v != 0.0;
    }
  }
  if (!any_nonzero) throw PreconditionError("sign matrix has no entry inside the promise");
}

SignMatrix SignMatrix::from_function(Index rows, Index cols,
                                     const std::function<int(Index, Index)>& entry) {
  RealMatrix values(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) values(i, j) = entry(i, j);
  }
  return SignMatrix(std::move(values));
}

bool SignMatrix::is_total() const { return (entries_.array() != 0.0).all(); }

Index SignMatrix::nonzero_count() const { return (entries_.array() != 0.0).count(); }

ThresholdEmbedding::ThresholdEmbedding(RealMatrix alphas, RealMatrix betas, double delta0,
                                       double delta1)
    : alphas_(std::move(alphas)), betas_(std::move(betas)), delta0_(delta0), delta1_(delta1) {
  require_shared_dimension(alphas_, betas_);
  require_unit_columns(alphas_, "alphas");
  require_unit_columns(betas_, "betas");
  if (!(0.0 <= delta0_ && delta0_ < delta1_ && delta1_ <= 1.0)) {
    throw PreconditionError("thresholds must satisfy 0 <= delta0 < delta1 <= 1");
  }
}

Realization::Realization(RealMatrix alphas, RealMatrix betas, double gamma)
    : alphas_(std::move(alphas)), betas_(std::move(betas)), gamma_(gamma) {
  require_shared_dimension(alphas_, betas_);
  require_unit_columns(alphas_, "alphas");
  require_unit_columns(betas_, "betas");
  if (!(gamma_ > 0.0 && gamma_ <= 1.0)) throw PreconditionError("margin must lie in (0, 1]");
}

ThresholdReport check_threshold_condition(const RealMatrix& alphas, const RealMatrix& betas,
                                          double delta0, double delta1, const SignMatrix& m) {
  require_matching(alphas, betas, m);
  const RealMatrix squared = (alphas.transpose() * betas).array().square().matrix();
  ThresholdReport report;
  double worst_excess = 0.0;
  for (Index y = 0; y < m.cols(); ++y) {
    for (Index x = 0; x < m.rows(); ++x) {
      const int sign = m(x, y);
      const double s = squared(x, y);
      double excess = 0.0;
      if (sign == 1) {
        if (!report.worst_zero_side || s > *report.worst_zero_side) report.worst_zero_side = s;
        excess = s - (delta0 + kVerifyTolerance);
      } else if (sign == -1) {
        if (!report.worst_one_side || s < *report.worst_one_side) report.worst_one_side = s;
        excess = (delta1 - kVerifyTolerance) - s;
      }
      if (excess > worst_excess) {
        worst_excess = excess;
        report.valid = false;
        report.violation = PairIndex{x, y};
      }
    }
  }
  return report;
}

RealizationReport check_margin_condition(const RealMatrix& alphas, const RealMatrix& betas,
                                         double gamma, const SignMatrix& m) {
  require_matching(alphas, betas, m);
  const RealMatrix signed_products = m.values().cwiseProduct(alphas.transpose() * betas);
  RealizationReport report;
  report.achieved_margin = std::numeric_limits<double>::infinity();
  for (Index y = 0; y < m.cols(); ++y) {
    for (Index x = 0; x < m.rows(); ++x) {
      if (m(x, y) == 0) continue;
      if (signed_products(x, y) < report.achieved_margin) {
        report.achieved_margin = signed_products(x, y);
        report.worst_pair = {x, y};
      }
    }
  }
  report.valid = report.achieved_margin >= gamma - kVerifyTolerance;
  return report;
}

ThresholdReport verify_threshold_embedding(const ThresholdEmbedding& e, const SignMatrix& m) {
  return check_threshold_condition(e.alphas(), e.betas(), e.delta0(), e.delta1(), m);
}

RealizationReport verify_realization(const Realization& r, const SignMatrix& m) {
  return check_margin_condition(r.alphas(), r.betas(), r.gamma(), m);
}

Realization embed_to_realization(const ThresholdEmbedding& e) {
  const Index d = e.dimension();
  if (d > kMaxTensorDimension) {
    throw PreconditionError("embed_to_realization: dimension " + std::to_string(d) +
                            " exceeds the tensor cap of " + std::to_string(kMaxTensorDimension));
  }
  const double sum = e.delta1() + e.delta0();
  const double a = sum / (2.0 + sum);
  const double gamma = (e.delta1() - e.delta0()) / (2.0 + sum);
  const double head = std::sqrt(a);
  const double tail = std::sqrt(1.0 - a);

  auto square = [&](const RealMatrix& vectors, double sign) {
    const RealMatrix unit = unit_columns(vectors);
    RealMatrix out(d * d + 1, unit.cols());
    for (Index i = 0; i < unit.cols(); ++i) {
      const RealMatrix outer = unit.col(i) * unit.col(i).transpose();
      out(0, i) = head;
      out.col(i).tail(d * d) = (sign * tail) * outer.reshaped();
    }
    return out;
  };
  return Realization(square(e.alphas(), 1.0), square(e.betas(), -1.0), gamma);
}

ThresholdEmbedding realization_to_embedding(const Realization& r) {
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  auto lift = [&](const RealMatrix& vectors, double sign) {
    RealMatrix out(vectors.rows() + 1, vectors.cols());
    out.row(0).setConstant(inv_sqrt2);
    out.bottomRows(vectors.rows()) = (sign * inv_sqrt2) * unit_columns(vectors);
    return out;
  };
  const double g = r.gamma();
  return ThresholdEmbedding(lift(r.alphas(), 1.0), lift(r.betas(), -1.0),
                            (1.0 - g) * (1.0 - g) / 4.0, (1.0 + g) * (1.0 + g) / 4.0);
}

Realization reduce_realization_dimension(const Realization& r, const SignMatrix& m, Seed seed,
                                         const ReductionOptions& options) {
  if (!verify_realization(r, m).valid) {
    throw PreconditionError("reduce_realization_dimension: input does not realize the matrix");
  }
  const double eps = r.gamma() / 4.0;
  const auto count = static_cast<std::size_t>(r.x_count() + r.y_count());
  const Index target = options.target_dim
                           ? *options.target_dim
                           : static_cast<Index>(jl_dimension(count + 1, eps));
  if (target >= r.dimension()) return r;

  RealMatrix all(r.dimension(), r.x_count() + r.y_count());
  all << r.alphas(), r.betas();
  const double half = r.gamma() / 2.0;
  for (int attempt = 0; attempt < options.max_attempts; ++attempt) {
    const RealMatrix projected =
        project_vectors(all, target, derive_seed(seed, static_cast<std::uint64_t>(attempt)));
    const RealVector norms = projected.colwise().norm().transpose();
    if ((norms.array() == 0.0).any()) continue;
    const RealMatrix unit = projected.array().rowwise() / norms.transpose().array();
    const RealMatrix alphas = unit.leftCols(r.x_count());
    const RealMatrix betas = unit.rightCols(r.y_count());
    if (check_margin_condition(alphas, betas, half, m).valid) {
      return Realization(alphas, betas, half);
    }
  }
  throw RetriesExhausted("reduce_realization_dimension: no projection kept margin " +
                         std::to_string(half) + " after " + std::to_string(options.max_attempts) +
                         " attempts");
}

}  // namespace qfp
