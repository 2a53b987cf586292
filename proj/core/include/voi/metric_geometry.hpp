#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

#include "voi/gaussian_env.hpp"

namespace voi {

enum class SetKind { L1Ball, L2Ball, LinfBall, FiniteSet, Custom };

std::string_view to_string(SetKind kind) noexcept;
/// Accepts "l1", "l2", "linf", "finite", "custom" (and the enum spellings).
SetKind parse_set_kind(std::string_view text);

/// The action space A. Balls are unit balls centred at the origin.
class ActionSet {
 public:
  using SupportFn = std::function<double(const VectorXd&)>;

  static ActionSet l1_ball(Index d);
  static ActionSet l2_ball(Index d);
  static ActionSet linf_ball(Index d);
  static ActionSet ball(SetKind kind, Index d);
  /// Rows are the points; they must be finite and pairwise distinct.
  static ActionSet finite(MatrixXd points);
  /// `support` must satisfy h(0) = 0 and h(c m) = c h(m); both are spot
  /// checked on 8 random directions. `lipschitz` bounds |h(m) - h(m')| / |m - m'|.
  static ActionSet custom(Index d, SupportFn support, double lipschitz);

  SetKind kind() const noexcept { return kind_; }
  Index dim() const noexcept { return dim_; }
  /// Only populated for FiniteSet.
  const std::optional<MatrixXd>& points() const noexcept { return points_; }
  /// Lipschitz constant of the support function w.r.t. the Euclidean norm.
  double lipschitz() const noexcept { return lipschitz_; }
  bool symmetric() const noexcept { return kind_ == SetKind::L1Ball || kind_ == SetKind::L2Ball || kind_ == SetKind::LinfBall; }
  bool contains(const VectorXd& a, double tol = 1e-12) const;

  /// sup_{a in A} <a, m>.
  double support(const VectorXd& m) const;

 private:
  ActionSet(SetKind kind, Index dim) : kind_(kind), dim_(dim) {}

  SetKind kind_;
  Index dim_;
  std::optional<MatrixXd> points_;
  SupportFn support_fn_;
  double lipschitz_ = 1.0;
};

double support_function(const ActionSet& set, const VectorXd& m);

/// rho(a, b) = sqrt((a - b)^T W (a - b)).
class IntrinsicMetric {
 public:
  explicit IntrinsicMetric(PosteriorOperator op) : op_(std::move(op)) {}

  Index dim() const noexcept { return op_.dim(); }
  const PosteriorOperator& op() const noexcept { return op_; }

  double distance(const VectorXd& a, const VectorXd& b) const;
  /// ||a||_W.
  double norm(const VectorXd& a) const;

 private:
  PosteriorOperator op_;
};

double distance(const IntrinsicMetric& metric, const VectorXd& a, const VectorXd& b);

struct DiameterBounds {
  double lower;
  double upper;
  bool exact() const noexcept { return lower == upper; }
};

/// Diameter of A under rho.
///
///  - L2Ball: exact, 2 sqrt(lambda_max).
///  - L1Ball: exact, 2 max_i sqrt(W_ii) (attained at a vertex pair +-e_i).
///  - LinfBall: exact by vertex enumeration when 2^d <= budget, otherwise a
///    lower bound from `budget` random sign vectors; upper is always
///    2 sqrt(lambda_max d).
///  - FiniteSet: exact pairwise maximum when n^2 <= budget, otherwise a lower
///    bound from `budget` random pairs and upper 2 max_i ||x_i||_W.
///  - Custom: UnsupportedSet.
DiameterBounds diameter(const ActionSet& set, const IntrinsicMetric& metric, std::int64_t budget,
                        std::uint64_t seed = 0);

struct EllipsoidVolume {
  double log_volume;
  /// exp(log_volume) when it is a finite, normal double.
  std::optional<double> volume;
};

/// log of pi^{d/2} / Gamma(d/2 + 1).
double log_unit_ball_volume(Index d);
/// log Gamma(x), x > 0.
double log_gamma(double x);

/// Euclidean volume of {a : a^T W a <= 1}. Throws SingularOperator.
EllipsoidVolume ellipsoid_unit_ball_volume(const PosteriorOperator& op);

}  // namespace voi
