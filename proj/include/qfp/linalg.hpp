#pragma once

// Dense primitives shared by every other module. The free functions are
// templated on the Eigen expression type so they accept blocks, maps and
// lazy expressions without forcing a copy.

#include <Eigen/Dense>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <string>
#include <type_traits>

#include "qfp/errors.hpp"
#include "qfp/rng.hpp"

namespace qfp {

using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;
using Index = Eigen::Index;

/// Largest column count accepted by linf_to_l1_norm.
inline constexpr Index kMaxEnumerationColumns = 25;

template <typename Derived>
void require_finite(const Eigen::MatrixBase<Derived>& m, const char* what) {
  if (!m.allFinite()) throw PreconditionError(std::string(what) + " has non-finite entries");
}

template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar inner(const Eigen::MatrixBase<DerivedA>& u,
                                const Eigen::MatrixBase<DerivedB>& v) {
  if (u.size() != v.size()) {
    throw DimensionError("inner: dimension mismatch (" + std::to_string(u.size()) + " vs " +
                         std::to_string(v.size()) + ")");
  }
  return u.dot(v);
}

template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> normalize(
    const Eigen::MatrixBase<Derived>& v) {
  const auto norm = v.norm();
  if (!(norm > 0)) throw PreconditionError("normalize: zero vector");
  return v / norm;
}

struct PowerIterationOptions {
  double tolerance = 1e-9;
  int max_iterations = 10000;
};

namespace detail {

template <typename Scalar>
struct PowerRun {
  Scalar rayleigh = 0;
  bool converged = false;
};

// Power iteration on A^T A from one start vector. Stops once the eigen-residual
// |A^T A v - rho v| drops below tol * rho.
template <typename Derived, typename Scalar = typename Derived::Scalar>
PowerRun<Scalar> power_run(const Eigen::MatrixBase<Derived>& a,
                           Eigen::Matrix<Scalar, Eigen::Dynamic, 1> v,
                           const PowerIterationOptions& options) {
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  PowerRun<Scalar> run;
  v.normalize();
  for (int it = 0; it < options.max_iterations; ++it) {
    const Vec image = a * v;
    const Vec next = a.adjoint() * image;
    const Scalar rho = image.squaredNorm();
    run.rayleigh = std::max(run.rayleigh, rho);
    const Scalar next_norm = next.norm();
    if (rho == Scalar(0) || next_norm == Scalar(0)) {
      // v lies in the null space; nothing further to learn from this start.
      run.converged = true;
      return run;
    }
    if ((next - rho * v).norm() <= Scalar(options.tolerance) * rho) {
      run.converged = true;
      return run;
    }
    v = next / next_norm;
  }
  return run;
}

}  // namespace detail

/// Largest singular value, by power iteration on A^T A.
///
/// Two deterministic start vectors are used: the normalized all-ones vector
/// and a Gaussian vector drawn from a fixed seed. Structured starts can be
/// exactly orthogonal to the dominant subspace of a sign matrix (all-ones is,
/// for the 2x2 equality matrix; an additive sequence like i*phi mod 1 is, for
/// many two-row matrices). The Rayleigh quotient never exceeds the top
/// eigenvalue, so the larger of the two runs is kept. Throws ConvergenceError
/// if the winning run hit the iteration cap.
template <typename Derived>
typename Derived::Scalar operator_norm(const Eigen::MatrixBase<Derived>& a,
                                       const PowerIterationOptions& options = {}) {
  using Scalar = typename Derived::Scalar;
  static_assert(std::is_floating_point_v<Scalar>, "operator_norm needs a floating-point scalar");
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  if (!(options.tolerance > 0)) throw PreconditionError("operator_norm: tolerance must be positive");
  if (a.rows() == 0 || a.cols() == 0) throw DimensionError("operator_norm: empty matrix");

  const Index n = a.cols();
  Rng rng(0x243f6a8885a308d3ULL);
  Vec gaussian(n);
  for (Index i = 0; i < n; ++i) gaussian(i) = Scalar(rng.normal());
  const auto by_ones = detail::power_run(a, Vec::Ones(n).eval(), options);
  const auto by_gaussian = detail::power_run(a, gaussian, options);
  const auto& best = by_ones.rayleigh >= by_gaussian.rayleigh ? by_ones : by_gaussian;
  const Scalar sigma = std::sqrt(best.rayleigh);
  if (!best.converged) {
    throw ConvergenceError("operator_norm: power iteration did not converge within " +
                               std::to_string(options.max_iterations) + " iterations",
                           static_cast<double>(sigma));
  }
  return sigma;
}

template <typename Derived>
typename Derived::Scalar operator_norm(const Eigen::MatrixBase<Derived>& a, double tolerance) {
  return operator_norm(a, PowerIterationOptions{tolerance, 10000});
}

/// sup over |v|_inf = 1 of |A v|_1, by enumerating the sign vectors.
///
/// The objective is convex in v, so the supremum over the cube is attained at
/// a vertex. v and -v give the same value, so the first sign is pinned to +1
/// and the rest are walked in Gray-code order (one column update per step).
template <typename Derived>
typename Derived::Scalar linf_to_l1_norm(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  if (a.rows() == 0 || a.cols() == 0) throw DimensionError("linf_to_l1_norm: empty matrix");
  if (a.cols() > kMaxEnumerationColumns) {
    throw PreconditionError("linf_to_l1_norm: " + std::to_string(a.cols()) +
                            " columns exceeds the enumeration limit of " +
                            std::to_string(kMaxEnumerationColumns));
  }
  const Index free_signs = a.cols() - 1;
  Vec image = a.rowwise().sum();
  Scalar best = image.template lpNorm<1>();
  std::uint32_t signs = 0;  // bit j set <=> column j+1 carries -1
  const std::uint32_t steps = std::uint32_t{1} << free_signs;
  for (std::uint32_t k = 1; k < steps; ++k) {
    const int bit = std::countr_zero(k);
    signs ^= std::uint32_t{1} << bit;
    const Scalar direction = (signs >> bit) & 1U ? Scalar(-2) : Scalar(2);
    image += direction * a.col(bit + 1);
    best = std::max(best, image.template lpNorm<1>());
  }
  return best;
}

}  // namespace qfp
