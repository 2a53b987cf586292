#include "voi/covering.hpp"

#include <boost/math/special_functions/erf.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "voi/errors.hpp"
#include "voi/random.hpp"

namespace voi {

namespace {

std::vector<int> first_primes(Index count) {
  std::vector<int> primes;
  for (int candidate = 2; static_cast<Index>(primes.size()) < count; ++candidate) {
    bool prime = true;
    for (int p : primes) {
      if (p * p > candidate) break;
      if (candidate % p == 0) {
        prime = false;
        break;
      }
    }
    if (prime) primes.push_back(candidate);
  }
  return primes;
}

double radical_inverse(std::uint64_t index, int base) {
  double result = 0.0;
  double scale = 1.0 / base;
  while (index > 0) {
    result += static_cast<double>(index % static_cast<std::uint64_t>(base)) * scale;
    index /= static_cast<std::uint64_t>(base);
    scale /= base;
  }
  return result;
}

// Maps a point of the open unit cube (d + 1 coordinates) into the ball kind.
VectorXd map_to_ball(SetKind kind, const VectorXd& u) {
  const Index d = u.size() - 1;
  VectorXd x(d);
  switch (kind) {
    case SetKind::LinfBall:
      x = 2.0 * u.head(d).array() - 1.0;
      break;
    case SetKind::L2Ball: {
      for (Index i = 0; i < d; ++i) x(i) = std::numbers::sqrt2 * boost::math::erf_inv(2.0 * u(i) - 1.0);
      const double norm = x.norm();
      if (norm == 0.0) {
        x.setZero();
      } else {
        x *= std::pow(u(d), 1.0 / static_cast<double>(d)) / norm;
      }
      break;
    }
    case SetKind::L1Ball: {
      double total = 0.0;
      for (Index i = 0; i < d; ++i) {
        // Fold u into a sign and a fresh uniform.
        const double sign = u(i) < 0.5 ? -1.0 : 1.0;
        const double v = u(i) < 0.5 ? 2.0 * u(i) : 2.0 * u(i) - 1.0;
        const double e = -std::log(std::max(v, std::numeric_limits<double>::min()));
        x(i) = sign * e;
        total += e;
      }
      if (total == 0.0) {
        x.setZero();
      } else {
        x *= std::pow(u(d), 1.0 / static_cast<double>(d)) / total;
      }
      break;
    }
    default:
      throw UnsupportedSet("point clouds are generated only for ball kinds");
  }
  return x;
}

}  // namespace

std::string_view to_string(CloudProvenance p) noexcept {
  switch (p) {
    case CloudProvenance::Grid: return "grid";
    case CloudProvenance::LowDiscrepancy: return "low-discrepancy";
    case CloudProvenance::UniformRandom: return "uniform-random";
    case CloudProvenance::Vertices: return "vertices";
  }
  return "unknown";
}

PointCloud PointCloud::from_points(MatrixXd points, CloudProvenance provenance, const ActionSet* set) {
  if (points.rows() < 1 || points.cols() < 1) throw InvalidArgument("point cloud needs at least one point");
  if (!points.allFinite()) throw InvalidArgument("point cloud has non-finite coordinates");
  if (set != nullptr) {
    if (set->dim() != points.cols()) throw DimensionMismatch("point cloud dimension differs from the action set");
    if (set->kind() != SetKind::Custom) {
      for (Index i = 0; i < points.rows(); ++i) {
        if (!set->contains(points.row(i).transpose(), 1e-9)) {
          throw InvalidArgument("point cloud row " + std::to_string(i) + " lies outside the action set");
        }
      }
    }
  }
  return PointCloud(std::move(points), provenance);
}

PointCloud PointCloud::generate(const ActionSet& set, Index n, CloudProvenance provenance, std::uint64_t seed) {
  const Index d = set.dim();
  if (set.kind() == SetKind::Custom) throw UnsupportedSet("point clouds are not generated for custom action sets");
  if (set.kind() == SetKind::FiniteSet) return PointCloud(*set.points(), CloudProvenance::Vertices);
  if (n < 1) throw InvalidArgument("point cloud size must be positive");

  std::vector<VectorXd> rows;
  switch (provenance) {
    case CloudProvenance::Grid: {
      const auto per_axis = static_cast<Index>(std::ceil(std::pow(static_cast<double>(n), 1.0 / static_cast<double>(d)) - 1e-9));
      const double total = std::pow(static_cast<double>(per_axis), static_cast<double>(d));
      if (total > 1e7) throw InvalidArgument("grid point cloud would exceed 1e7 nodes");
      std::vector<Index> idx(static_cast<std::size_t>(d), 0);
      VectorXd x(d);
      for (auto k = static_cast<std::int64_t>(total); k > 0; --k) {
        for (Index i = 0; i < d; ++i) {
          x(i) = per_axis == 1 ? 0.0 : -1.0 + 2.0 * static_cast<double>(idx[static_cast<std::size_t>(i)]) /
                                                  static_cast<double>(per_axis - 1);
        }
        if (set.contains(x)) rows.push_back(x);
        for (Index i = 0; i < d; ++i) {
          if (++idx[static_cast<std::size_t>(i)] < per_axis) break;
          idx[static_cast<std::size_t>(i)] = 0;
        }
      }
      break;
    }
    case CloudProvenance::LowDiscrepancy: {
      const std::vector<int> primes = first_primes(d + 1);
      VectorXd u(d + 1);
      for (Index k = 0; k < n; ++k) {
        for (Index i = 0; i <= d; ++i) {
          u(i) = radical_inverse(static_cast<std::uint64_t>(k + 1), primes[static_cast<std::size_t>(i)]);
        }
        rows.push_back(map_to_ball(set.kind(), u));
      }
      break;
    }
    case CloudProvenance::UniformRandom: {
      VectorXd u(d + 1);
      for (Index k = 0; k < n; ++k) {
        RandomStream rng(seed, static_cast<std::uint64_t>(k));
        for (Index i = 0; i <= d; ++i) u(i) = rng.uniform();
        rows.push_back(map_to_ball(set.kind(), u));
      }
      break;
    }
    case CloudProvenance::Vertices: {
      if (set.kind() == SetKind::L1Ball) {
        for (Index i = 0; i < d; ++i) {
          rows.push_back(VectorXd::Unit(d, i));
          rows.push_back(-VectorXd::Unit(d, i));
        }
      } else if (set.kind() == SetKind::LinfBall) {
        if (d > 20) throw InvalidArgument("hypercube vertex cloud limited to d <= 20");
        for (std::int64_t mask = 0; mask < (std::int64_t{1} << d); ++mask) {
          VectorXd v(d);
          for (Index i = 0; i < d; ++i) v(i) = (mask >> i) & 1 ? 1.0 : -1.0;
          rows.push_back(v);
        }
      } else {
        throw UnsupportedSet("the Euclidean ball has no vertex set");
      }
      break;
    }
  }
  if (rows.empty()) throw InvalidArgument("point cloud generation produced no points");
  MatrixXd pts(static_cast<Index>(rows.size()), d);
  for (std::size_t i = 0; i < rows.size(); ++i) pts.row(static_cast<Index>(i)) = rows[i].transpose();
  return PointCloud(std::move(pts), provenance);
}

PointCloud PointCloud::default_for(const ActionSet& set, std::uint64_t seed) {
  if (set.dim() <= 16) return generate(set, 4096, CloudProvenance::LowDiscrepancy, seed);
  return generate(set, 65536, CloudProvenance::UniformRandom, seed);
}

double CoveringEstimate::n_lower() const { return std::round(std::exp(log_n_lower)); }

std::optional<double> CoveringEstimate::n_upper() const {
  if (!log_n_upper) return std::nullopt;
  return std::round(std::exp(*log_n_upper));
}

double log_ceil_count(double log_ratio) {
  if (!(log_ratio > 0.0)) return 0.0;
  if (log_ratio > 36.0) return log_ratio;
  const double ratio = std::exp(log_ratio);
  // Absorb exp/log round-off so that an exact integer ratio is not bumped up.
  const double count = std::max(1.0, std::ceil(ratio * (1.0 - 1e-12)));
  return std::log(count);
}

std::vector<Index> greedy_packing(const PointCloud& cloud, const IntrinsicMetric& metric, double epsilon) {
  if (!(epsilon > 0.0)) throw InvalidArgument("epsilon must be positive");
  if (cloud.dim() != metric.dim()) throw DimensionMismatch("point cloud and metric dimensions differ");
  // rho(a, b) = |R (a - b)|_2 with R the symmetric square root of W.
  const MatrixXd y = cloud.points() * metric.op().factor();
  const Index n = y.rows();
  std::vector<Index> chosen{0};
  VectorXd nearest = (y.rowwise() - y.row(0)).rowwise().norm();
  while (true) {
    Index far = 0;
    double far_dist = -1.0;
    for (Index i = 0; i < n; ++i) {
      if (nearest(i) > far_dist) {
        far_dist = nearest(i);
        far = i;
      }
    }
    if (!(far_dist > epsilon)) break;
    chosen.push_back(far);
    nearest = nearest.cwiseMin((y.rowwise() - y.row(far)).rowwise().norm());
  }
  return chosen;
}

CoveringEstimate packing_covering_sandwich(const PointCloud& cloud, const IntrinsicMetric& metric, double epsilon) {
  const auto upper = greedy_packing(cloud, metric, epsilon).size();
  const auto lower = greedy_packing(cloud, metric, 2.0 * epsilon).size();
  return CoveringEstimate{epsilon, std::log(static_cast<double>(lower)), std::log(static_cast<double>(upper)),
                          "greedy-packing"};
}

double log_volume_ratio_lower(SetKind kind, const PosteriorOperator& op, double epsilon) {
  if (!(epsilon > 0.0)) throw InvalidArgument("epsilon must be positive");
  const auto d = static_cast<double>(op.dim());
  const double half_log_det = 0.5 * op.log_det();
  switch (kind) {
    case SetKind::L2Ball:
      // The pi^{d/2} / Gamma(d/2 + 1) factors cancel.
      return -d * std::log(epsilon) + half_log_det;
    case SetKind::LinfBall:
      return d * std::log(2.0) - d * std::log(epsilon) - log_unit_ball_volume(op.dim()) + half_log_det;
    default:
      throw UnsupportedSet("volume bounds are implemented for the L2 and Linf unit balls");
  }
}

double log_volume_ratio_upper_l2(const PosteriorOperator& op, double epsilon) {
  if (!(epsilon > 0.0)) throw InvalidArgument("epsilon must be positive");
  const auto d = static_cast<double>(op.dim());
  const double half_log_det = 0.5 * op.log_det();
  return d * std::log(2.0 / epsilon + 1.0 / std::sqrt(op.lambda_min())) + half_log_det;
}

CoveringEstimate volume_bounds(const ActionSet& set, const PosteriorOperator& op, double epsilon) {
  if (set.dim() != op.dim()) throw DimensionMismatch("action set and operator dimensions differ");
  CoveringEstimate est{epsilon, log_ceil_count(log_volume_ratio_lower(set.kind(), op, epsilon)), std::nullopt,
                       "volume"};
  if (set.kind() == SetKind::L2Ball) {
    est.log_n_upper = log_ceil_count(log_volume_ratio_upper_l2(op, epsilon));
  }
  return est;
}

}  // namespace voi
