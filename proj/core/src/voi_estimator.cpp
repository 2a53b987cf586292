#include "voi/voi_estimator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "voi/errors.hpp"
#include "voi/gaussian_env.hpp"
#include "voi/parallel.hpp"

namespace voi {

namespace {

struct ChunkStats {
  Index count = 0;
  double mean = 0.0;
  double m2 = 0.0;  // sum of squared deviations from `mean`
};

ChunkStats summarize(const Eigen::ArrayXd& values) {
  ChunkStats s;
  s.count = values.size();
  double sum = 0.0;
  double c = 0.0;
  for (double v : values) {
    const double t = sum + v;
    c += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
    sum = t;
  }
  s.mean = (sum + c) / static_cast<double>(s.count);
  s.m2 = (values - s.mean).square().sum();
  return s;
}

// Chan et al. pairwise update; merged in chunk order for a fixed result.
ChunkStats merge(const ChunkStats& a, const ChunkStats& b) {
  if (a.count == 0) return b;
  if (b.count == 0) return a;
  ChunkStats out;
  out.count = a.count + b.count;
  const double delta = b.mean - a.mean;
  const double wb = static_cast<double>(b.count) / static_cast<double>(out.count);
  out.mean = a.mean + delta * wb;
  out.m2 = a.m2 + b.m2 + delta * delta * static_cast<double>(a.count) * wb;
  return out;
}

Eigen::ArrayXd support_columns(const ActionSet& set, const MatrixXd& z) {
  switch (set.kind()) {
    case SetKind::L2Ball: return z.colwise().norm().transpose().array();
    case SetKind::LinfBall: return z.cwiseAbs().colwise().sum().transpose().array();
    case SetKind::L1Ball: return z.cwiseAbs().colwise().maxCoeff().transpose().array();
    case SetKind::FiniteSet: return (*set.points() * z).colwise().maxCoeff().transpose().array();
    case SetKind::Custom: break;
  }
  Eigen::ArrayXd out(z.cols());
  for (Index j = 0; j < z.cols(); ++j) out(j) = set.support(z.col(j));
  return out;
}

}  // namespace

double chi_mean(Index d) {
  if (d < 1) throw InvalidArgument("dimension must be positive");
  const auto dd = static_cast<double>(d);
  return std::numbers::sqrt2 * std::exp(log_gamma(0.5 * (dd + 1.0)) - log_gamma(0.5 * dd));
}

std::optional<double> closed_form_voi(const PosteriorOperator& op, const ActionSet& set) {
  if (set.dim() != op.dim()) throw DimensionMismatch("action set and operator dimensions differ");
  if (set.kind() == SetKind::LinfBall) {
    return std::sqrt(2.0 / std::numbers::pi) * op.w().diagonal().cwiseMax(0.0).cwiseSqrt().sum();
  }
  if (set.kind() == SetKind::L2Ball) {
    const double c = op.w()(0, 0);
    const MatrixXd iso = c * MatrixXd::Identity(op.dim(), op.dim());
    if ((op.w() - iso).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, std::abs(c)) && c >= 0.0) {
      return std::sqrt(c) * chi_mean(op.dim());
    }
  }
  return std::nullopt;
}

VoiEstimate estimate_voi(const PosteriorOperator& op, const ActionSet& set, Index n, std::uint64_t seed,
                         EstimatorOptions options) {
  if (set.dim() != op.dim()) {
    throw DimensionMismatch("action set has dimension " + std::to_string(set.dim()) + ", W has " +
                            std::to_string(op.dim()));
  }
  if (n < 100) throw InvalidArgument("estimate_voi needs n >= 100");
  if (options.antithetic && n % 2 != 0) throw InvalidArgument("antithetic sampling needs an even n");
  if (options.chunk_size < 1) throw InvalidArgument("chunk size must be positive");

  // With antithetic pairs the unit of averaging is a pair.
  const Index units = options.antithetic ? n / 2 : n;
  const Index chunk = options.chunk_size;
  const Index chunks = (units + chunk - 1) / chunk;
  std::vector<ChunkStats> stats(static_cast<std::size_t>(chunks));
  parallel_for(stats.size(), options.threads, [&](std::size_t c) {
    const Index first = static_cast<Index>(c) * chunk;
    const Index count = std::min(chunk, units - first);
    const MatrixXd z = sample_posterior_block(op, first, count, seed);
    Eigen::ArrayXd values = support_columns(set, z);
    if (options.antithetic) values = 0.5 * (values + support_columns(set, -z));
    stats[c] = summarize(values);
  });
  ChunkStats total;
  for (const auto& s : stats) total = merge(total, s);

  const double variance = total.count > 1 ? total.m2 / static_cast<double>(total.count - 1) : 0.0;
  VoiEstimate est{};
  est.mean = total.mean;
  est.std_error = std::sqrt(variance / static_cast<double>(total.count));
  est.n_samples = n;
  est.seed = seed;
  est.antithetic = options.antithetic;
  est.closed_form = closed_form_voi(op, set);
  if (set.symmetric() && est.mean < 0.0) throw Error("negative VoI estimate on a symmetric action set");
  return est;
}

BoundReport voi_sandwich(const PosteriorOperator& op, const ActionSet& set, Index n, std::uint64_t seed,
                         EstimatorOptions options, int quadrature_nodes) {
  if (set.kind() != SetKind::L2Ball && set.kind() != SetKind::LinfBall) {
    throw UnsupportedSet("bound reports are available for the L2 and Linf unit balls");
  }
  const GammaBounds bounds = gamma_bounds(set, op, quadrature_nodes);
  const VoiEstimate est = estimate_voi(op, set, n, seed, options);
  return BoundReport{op.dim(),        set.kind(),       bounds.lower, est.mean,
                     est.std_error,   bounds.upper,     n,            seed,
                     op.lambda_min(), op.lambda_max(),  bounds.epsilon_star, est.closed_form};
}

}  // namespace voi
