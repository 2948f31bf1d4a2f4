#include "qfp/margin.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "qfp/linalg.hpp"

namespace qfp {
namespace {

void require_total(const SignMatrix& m, const char* who) {
  if (!m.is_total()) {
    throw PreconditionError(std::string(who) + ": bound is only valid for total sign matrices");
  }
}

void require_margin_argument(double gamma, const char* who) {
  if (!(gamma > 0.0 && gamma <= 1.0)) throw PreconditionError(std::string(who) + ": need 0 < gamma <= 1");
}

bool has_equality_pattern(const SignMatrix& m) {
  if (m.rows() != m.cols()) return false;
  for (Index y = 0; y < m.cols(); ++y) {
    for (Index x = 0; x < m.rows(); ++x) {
      const int expected = x == y ? -1 : 1;
      if (m(x, y) != 0 && m(x, y) != expected) return false;
    }
  }
  return true;
}

double exact_margin(const RealMatrix& alphas, const RealMatrix& betas, const SignMatrix& m) {
  return check_margin_condition(alphas, betas, 0.0, m).achieved_margin;
}

struct Arrangement {
  RealMatrix alphas;
  RealMatrix betas;
};

// alpha_x = (1, √2 e_x)/√3, beta_y = (1, -√2 e_y)/√3: <alpha_x, beta_y> = (1 - 2[x = y])/3.
Arrangement equality_construction(Index n, Index d) {
  Arrangement a{RealMatrix::Zero(d, n), RealMatrix::Zero(d, n)};
  const double c = 1.0 / std::sqrt(3.0);
  const double s = std::sqrt(2.0) * c;
  for (Index i = 0; i < n; ++i) {
    a.alphas(0, i) = c;
    a.alphas(i + 1, i) = s;
    a.betas(0, i) = c;
    a.betas(i + 1, i) = -s;
  }
  return a;
}

// alpha_x = e_x, beta_y = M(:, y) / ‖M(:, y)‖; margin 1/max‖M(:, y)‖ > 0.
Arrangement column_construction(const SignMatrix& m, Index d) {
  Arrangement a{RealMatrix::Zero(d, m.rows()), RealMatrix::Zero(d, m.cols())};
  a.alphas.topRows(m.rows()).setIdentity();
  for (Index y = 0; y < m.cols(); ++y) {
    const RealVector column = m.values().col(y);
    if (column.squaredNorm() > 0.0) {
      a.betas.col(y).head(m.rows()) = column.normalized();
    } else {
      a.betas(0, y) = 1.0;
    }
  }
  return a;
}

Arrangement random_arrangement(const SignMatrix& m, Index d, Seed seed) {
  Rng rng(seed);
  auto draw = [&](Index count) {
    RealMatrix v(d, count);
    for (Index j = 0; j < count; ++j) {
      for (Index i = 0; i < d; ++i) v(i, j) = rng.normal();
      if (v.col(j).norm() == 0.0) v(0, j) = 1.0;
      v.col(j).normalize();
    }
    return v;
  };
  Arrangement a;
  a.alphas = draw(m.rows());
  a.betas = draw(m.cols());
  return a;
}

// Ascent on softmin_tau(z) = -tau·log Σ exp(-z_xy / tau) over promise pairs,
// z_xy = M(x,y)·<alpha_x, beta_y>. The gradient weights are the soft-min's
// softmax; each step is followed by renormalizing every column.
void ascend(Arrangement& a, const SignMatrix& m, const HeuristicConfig& config,
            Arrangement& best, double& best_margin) {
  const RealMatrix& signs = m.values();
  const RealMatrix mask = signs.cwiseAbs();
  const int iterations = std::max(config.iterations, 1);
  const double anneal = iterations > 1 ? std::log(config.softmin_end / config.softmin_start) /
                                             static_cast<double>(iterations - 1)
                                       : 0.0;
  double step = config.step;
  for (int it = 0; it < iterations; ++it) {
    const RealMatrix z = signs.cwiseProduct(a.alphas.transpose() * a.betas);
    double margin = std::numeric_limits<double>::infinity();
    for (Index y = 0; y < z.cols(); ++y) {
      for (Index x = 0; x < z.rows(); ++x) {
        if (mask(x, y) != 0.0) margin = std::min(margin, z(x, y));
      }
    }
    if (margin > best_margin) {
      best_margin = margin;
      best = a;
    }
    const double tau = config.softmin_start * std::exp(anneal * it);
    // Shift by the minimum before exponentiating.
    RealMatrix weights = ((-(z.array() - margin)) / tau).exp().matrix().cwiseProduct(mask);
    weights /= weights.sum();
    const RealMatrix pull = weights.cwiseProduct(signs);
    const RealMatrix grad_alphas = a.betas * pull.transpose();
    const RealMatrix grad_betas = a.alphas * pull;
    a.alphas += step * grad_alphas;
    a.betas += step * grad_betas;
    a.alphas.colwise().normalize();
    a.betas.colwise().normalize();
    step *= config.step_decay;
  }
  const double final_margin = exact_margin(a.alphas, a.betas, m);
  if (final_margin > best_margin) {
    best_margin = final_margin;
    best = a;
  }
}

}  // namespace

double forster_bound(const SignMatrix& m) {
  require_total(m, "forster_bound");
  const double norm = operator_norm(m.values());
  const double size = static_cast<double>(m.rows()) * static_cast<double>(m.cols());
  return std::min(1.0, norm / std::sqrt(size));
}

double linial_bound(const SignMatrix& m) {
  require_total(m, "linial_bound");
  const double norm = linf_to_l1_norm(m.values());
  const double size = static_cast<double>(m.rows()) * static_cast<double>(m.cols());
  return std::min(1.0, kGrothendieck * norm / size);
}

double margin_upper_bound(const SignMatrix& m) {
  require_total(m, "margin_upper_bound");
  const double forster = forster_bound(m);
  if (m.cols() > kMaxEnumerationColumns) return forster;
  return std::min(forster, linial_bound(m));
}

Realization maximize_margin_heuristic(const SignMatrix& m, Index d, Seed seed,
                                      const HeuristicConfig& config) {
  if (d < 1) throw PreconditionError("maximize_margin_heuristic: dimension must be positive");
  if (config.restarts < 0 || config.iterations < 1 || !(config.step > 0.0) ||
      !(config.softmin_start > 0.0) || !(config.softmin_end > 0.0)) {
    throw PreconditionError("maximize_margin_heuristic: invalid configuration");
  }

  std::vector<Arrangement> starts;
  if (has_equality_pattern(m) && d > m.rows()) starts.push_back(equality_construction(m.rows(), d));
  if (d >= m.rows()) starts.push_back(column_construction(m, d));
  for (int restart = 0; restart < config.restarts; ++restart) {
    starts.push_back(random_arrangement(m, d, derive_seed(seed, static_cast<std::uint64_t>(restart))));
  }

  Arrangement best;
  double best_margin = -std::numeric_limits<double>::infinity();
  for (auto& start : starts) ascend(start, m, config, best, best_margin);

  if (!(best_margin > 0.0)) {
    throw PreconditionError("maximize_margin_heuristic: no arrangement with positive margin found in dimension " +
                            std::to_string(d));
  }
  return Realization(best.alphas, best.betas, std::min(best_margin, 1.0));
}

double repetition_lower_bound(double gamma_upper) {
  require_margin_argument(gamma_upper, "repetition_lower_bound");
  return 1.0 / (gamma_upper * gamma_upper);
}

double qent_lower_bound(double gamma_upper) {
  require_margin_argument(gamma_upper, "qent_lower_bound");
  return 0.25 * std::log2(1.0 / gamma_upper);
}

MarginReport margin_report(const SignMatrix& m, const MarginReportOptions& options) {
  MarginReport report;
  if (options.spectral) {
    require_total(m, "margin_report");
    report.forster = forster_bound(m);
    report.upper = *report.forster;
    if (m.cols() <= kMaxEnumerationColumns) {
      report.linial = linial_bound(m);
      report.upper = std::min(report.upper, *report.linial);
    }
  } else {
    report.upper = 1.0;
    report.upper_is_trivial = true;
  }
  if (options.heuristic) {
    const auto& h = *options.heuristic;
    report.heuristic_lower = maximize_margin_heuristic(m, h.dimension, h.seed, h.config).gamma();
  }
  report.qent_lower_bits = qent_lower_bound(report.upper);
  report.repetition_lower = repetition_lower_bound(report.upper);
  return report;
}

}  // namespace qfp
