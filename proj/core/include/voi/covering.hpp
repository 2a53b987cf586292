#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "voi/metric_geometry.hpp"

namespace voi {

enum class CloudProvenance { Grid, LowDiscrepancy, UniformRandom, Vertices };

std::string_view to_string(CloudProvenance p) noexcept;

/// Finite proxy for an action set: n x d matrix, one point per row.
class PointCloud {
 public:
  /// Takes the points as given; membership is checked when `set` is a ball.
  static PointCloud from_points(MatrixXd points, CloudProvenance provenance,
                                const ActionSet* set = nullptr);

  /// Generates a cloud inside a ball kind.
  ///  - Grid: axis-aligned grid with ceil(n^{1/d}) nodes per axis on [-1, 1]^d,
  ///    filtered to the set.
  ///  - LowDiscrepancy: Halton points mapped into the set.
  ///  - UniformRandom: i.i.d. uniform points in the set.
  ///  - Vertices: extreme points (cube corners or +-e_i; FiniteSet rows).
  static PointCloud generate(const ActionSet& set, Index n, CloudProvenance provenance, std::uint64_t seed = 0);

  /// 4096 low-discrepancy points for d <= 16, 65536 uniform points beyond.
  static PointCloud default_for(const ActionSet& set, std::uint64_t seed = 0);

  Index size() const noexcept { return points_.rows(); }
  Index dim() const noexcept { return points_.cols(); }
  const MatrixXd& points() const noexcept { return points_; }
  CloudProvenance provenance() const noexcept { return provenance_; }

 private:
  PointCloud(MatrixXd points, CloudProvenance provenance) : points_(std::move(points)), provenance_(provenance) {}

  MatrixXd points_;
  CloudProvenance provenance_;
};

/// Bounds on N(A, rho, epsilon), carried as natural-log counts so that
/// high-dimensional counts never overflow. Counts are integers >= 1, so
/// every ratio bound is rounded up and clamped before the log is taken.
struct CoveringEstimate {
  double epsilon;
  double log_n_lower;
  std::optional<double> log_n_upper;
  std::string method;

  /// exp(log_n_lower) rounded to the nearest integer; only meaningful while
  /// the count fits in a double exactly.
  double n_lower() const;
  std::optional<double> n_upper() const;
};

/// log of ceil(exp(log_ratio)) clamped to >= 1 (so the result is >= 0).
/// For log_ratio above ~36 the rounding is below double resolution and the
/// value is returned unchanged.
double log_ceil_count(double log_ratio);

/// Greedy farthest-point packing. Starts at index 0 and keeps adding the
/// point farthest from the chosen set while that distance exceeds epsilon;
/// ties go to the lowest index. The result is a maximal epsilon-separated
/// subset, and therefore also an epsilon-cover of the cloud.
std::vector<Index> greedy_packing(const PointCloud& cloud, const IntrinsicMetric& metric, double epsilon);

/// n_lower = |greedy(2 eps)|, n_upper = |greedy(eps)|.
CoveringEstimate packing_covering_sandwich(const PointCloud& cloud, const IntrinsicMetric& metric, double epsilon);

/// Volume bounds for the unit L2 or Linf ball.
///   lower: Vol(A) / Vol(eps B_rho)
///   upper (L2 only): (2/eps + 1/sqrt(lambda_min))^d sqrt(det W), from
///          B_2 + (eps/2) B_rho inside (1 + eps / (2 sqrt(lambda_min))) B_2.
/// Throws SingularOperator for singular W and UnsupportedSet for other kinds.
CoveringEstimate volume_bounds(const ActionSet& set, const PosteriorOperator& op, double epsilon);

/// The two log-count formulas behind volume_bounds, exposed for the chaining
/// bounds; no rounding applied.
double log_volume_ratio_lower(SetKind kind, const PosteriorOperator& op, double epsilon);
double log_volume_ratio_upper_l2(const PosteriorOperator& op, double epsilon);

}  // namespace voi
