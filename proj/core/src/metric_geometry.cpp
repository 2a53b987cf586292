#include "voi/metric_geometry.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "voi/errors.hpp"
#include "voi/random.hpp"

namespace voi {

namespace {

void check_dim(Index expected, Index got, const char* what) {
  if (expected != got) {
    throw DimensionMismatch(std::string(what) + ": expected dimension " + std::to_string(expected) + ", got " +
                            std::to_string(got));
  }
}

}  // namespace

std::string_view to_string(SetKind kind) noexcept {
  switch (kind) {
    case SetKind::L1Ball: return "l1";
    case SetKind::L2Ball: return "l2";
    case SetKind::LinfBall: return "linf";
    case SetKind::FiniteSet: return "finite";
    case SetKind::Custom: return "custom";
  }
  return "unknown";
}

SetKind parse_set_kind(std::string_view text) {
  if (text == "l1" || text == "L1Ball") return SetKind::L1Ball;
  if (text == "l2" || text == "L2Ball") return SetKind::L2Ball;
  if (text == "linf" || text == "LinfBall") return SetKind::LinfBall;
  if (text == "finite" || text == "FiniteSet") return SetKind::FiniteSet;
  if (text == "custom" || text == "Custom") return SetKind::Custom;
  throw InvalidArgument("unknown action set kind '" + std::string(text) + "'");
}

ActionSet ActionSet::ball(SetKind kind, Index d) {
  if (d < 1) throw InvalidArgument("dimension must be positive");
  if (kind != SetKind::L1Ball && kind != SetKind::L2Ball && kind != SetKind::LinfBall) {
    throw InvalidArgument("ActionSet::ball needs a ball kind");
  }
  ActionSet set(kind, d);
  // Lipschitz constant of the dual norm w.r.t. the Euclidean norm.
  set.lipschitz_ = kind == SetKind::LinfBall ? std::sqrt(static_cast<double>(d)) : 1.0;
  return set;
}

ActionSet ActionSet::l1_ball(Index d) { return ball(SetKind::L1Ball, d); }
ActionSet ActionSet::l2_ball(Index d) { return ball(SetKind::L2Ball, d); }
ActionSet ActionSet::linf_ball(Index d) { return ball(SetKind::LinfBall, d); }

ActionSet ActionSet::finite(MatrixXd points) {
  if (points.rows() < 1 || points.cols() < 1) throw InvalidArgument("finite action set needs at least one point");
  if (!points.allFinite()) throw InvalidArgument("finite action set has non-finite coordinates");
  for (Index i = 0; i < points.rows(); ++i) {
    for (Index j = i + 1; j < points.rows(); ++j) {
      if (points.row(i) == points.row(j)) {
        throw InvalidArgument("finite action set rows " + std::to_string(i) + " and " + std::to_string(j) +
                              " coincide");
      }
    }
  }
  ActionSet set(SetKind::FiniteSet, points.cols());
  set.lipschitz_ = points.rowwise().norm().maxCoeff();
  set.points_ = std::move(points);
  return set;
}

ActionSet ActionSet::custom(Index d, SupportFn support, double lipschitz) {
  if (d < 1) throw InvalidArgument("dimension must be positive");
  if (!support) throw InvalidArgument("custom action set needs a support function");
  if (!(lipschitz > 0.0) || !std::isfinite(lipschitz)) {
    throw InvalidArgument("custom action set needs a finite positive Lipschitz bound");
  }
  if (std::abs(support(VectorXd::Zero(d))) > 1e-12) throw InvalidArgument("custom support function: h(0) != 0");
  RandomStream rng(0x5eed, static_cast<std::uint64_t>(d));
  for (int trial = 0; trial < 8; ++trial) {
    VectorXd m(d);
    for (Index i = 0; i < d; ++i) m(i) = rng.normal();
    const double c = rng.uniform(0.1, 10.0);
    const double h = support(m);
    const double hc = support(c * m);
    if (std::abs(hc - c * h) > 1e-9 * std::max(1.0, std::abs(c * h))) {
      throw InvalidArgument("custom support function is not positively homogeneous");
    }
  }
  ActionSet set(SetKind::Custom, d);
  set.support_fn_ = std::move(support);
  set.lipschitz_ = lipschitz;
  return set;
}

bool ActionSet::contains(const VectorXd& a, double tol) const {
  check_dim(dim_, a.size(), "ActionSet::contains");
  switch (kind_) {
    case SetKind::L1Ball: return a.lpNorm<1>() <= 1.0 + tol;
    case SetKind::L2Ball: return a.norm() <= 1.0 + tol;
    case SetKind::LinfBall: return a.lpNorm<Eigen::Infinity>() <= 1.0 + tol;
    case SetKind::FiniteSet:
      for (Index i = 0; i < points_->rows(); ++i) {
        if ((points_->row(i).transpose() - a).lpNorm<Eigen::Infinity>() <= tol) return true;
      }
      return false;
    case SetKind::Custom: break;
  }
  throw UnsupportedSet("membership is not defined for custom action sets");
}

double ActionSet::support(const VectorXd& m) const {
  check_dim(dim_, m.size(), "support function");
  switch (kind_) {
    case SetKind::LinfBall: return m.lpNorm<1>();
    case SetKind::L2Ball: return m.norm();
    case SetKind::L1Ball: return m.lpNorm<Eigen::Infinity>();
    case SetKind::FiniteSet: return (*points_ * m).maxCoeff();
    case SetKind::Custom: return support_fn_(m);
  }
  return 0.0;
}

double support_function(const ActionSet& set, const VectorXd& m) { return set.support(m); }

double IntrinsicMetric::norm(const VectorXd& a) const {
  check_dim(dim(), a.size(), "intrinsic metric");
  return std::sqrt(std::max(0.0, a.dot(op_.w() * a)));
}

double IntrinsicMetric::distance(const VectorXd& a, const VectorXd& b) const {
  check_dim(dim(), a.size(), "intrinsic metric");
  check_dim(dim(), b.size(), "intrinsic metric");
  return norm(a - b);
}

double distance(const IntrinsicMetric& metric, const VectorXd& a, const VectorXd& b) {
  return metric.distance(a, b);
}

DiameterBounds diameter(const ActionSet& set, const IntrinsicMetric& metric, std::int64_t budget,
                        std::uint64_t seed) {
  check_dim(set.dim(), metric.dim(), "diameter");
  if (budget < 1) throw InvalidArgument("diameter budget must be positive");
  const PosteriorOperator& op = metric.op();
  const Index d = set.dim();
  switch (set.kind()) {
    case SetKind::L2Ball: {
      const double diam = 2.0 * std::sqrt(op.lambda_max());
      return {diam, diam};
    }
    case SetKind::L1Ball: {
      const double diam = 2.0 * std::sqrt(op.w().diagonal().maxCoeff());
      return {diam, diam};
    }
    case SetKind::LinfBall: {
      const double upper = 2.0 * std::sqrt(op.lambda_max() * static_cast<double>(d));
      // The vertex set is symmetric, so diam = 2 max_v ||v||_W over vertices.
      double best = 0.0;
      VectorXd v(d);
      if (d < 62 && (std::int64_t{1} << d) <= budget) {
        // Vertex v and -v give the same norm: fix the first sign.
        const std::int64_t count = std::int64_t{1} << (d - 1);
        for (std::int64_t mask = 0; mask < count; ++mask) {
          v(0) = 1.0;
          for (Index i = 1; i < d; ++i) v(i) = (mask >> (i - 1)) & 1 ? -1.0 : 1.0;
          best = std::max(best, metric.norm(v));
        }
        const double diam = std::min(2.0 * best, upper);
        return {diam, diam};
      }
      RandomStream rng(seed, 0);
      for (std::int64_t trial = 0; trial < budget; ++trial) {
        for (Index i = 0; i < d; ++i) v(i) = (rng.next_u64() >> 63) ? -1.0 : 1.0;
        best = std::max(best, metric.norm(v));
      }
      return {std::min(2.0 * best, upper), upper};
    }
    case SetKind::FiniteSet: {
      const MatrixXd& pts = *set.points();
      const Index n = pts.rows();
      double upper = 0.0;
      for (Index i = 0; i < n; ++i) upper = std::max(upper, metric.norm(pts.row(i).transpose()));
      upper *= 2.0;
      double best = 0.0;
      if (static_cast<double>(n) * static_cast<double>(n) <= static_cast<double>(budget)) {
        for (Index i = 0; i < n; ++i) {
          for (Index j = i + 1; j < n; ++j) {
            best = std::max(best, metric.distance(pts.row(i).transpose(), pts.row(j).transpose()));
          }
        }
        return {best, best};
      }
      RandomStream rng(seed, 0);
      for (std::int64_t trial = 0; trial < budget; ++trial) {
        const auto i = static_cast<Index>(rng.next_u64() % static_cast<std::uint64_t>(n));
        const auto j = static_cast<Index>(rng.next_u64() % static_cast<std::uint64_t>(n));
        best = std::max(best, metric.distance(pts.row(i).transpose(), pts.row(j).transpose()));
      }
      return {best, std::max(best, upper)};
    }
    case SetKind::Custom: break;
  }
  throw UnsupportedSet("diameter of a custom action set needs a point oracle");
}

double log_gamma(double x) {
  if (!(x > 0.0)) throw InvalidArgument("log_gamma needs x > 0");
  return boost::math::lgamma(x);
}

double log_unit_ball_volume(Index d) {
  const double half = 0.5 * static_cast<double>(d);
  return half * std::log(std::numbers::pi) - log_gamma(half + 1.0);
}

EllipsoidVolume ellipsoid_unit_ball_volume(const PosteriorOperator& op) {
  const double log_volume = log_unit_ball_volume(op.dim()) - 0.5 * op.log_det();
  EllipsoidVolume result{log_volume, std::nullopt};
  const double v = std::exp(log_volume);
  if (std::isnormal(v)) result.volume = v;
  return result;
}

}  // namespace voi
