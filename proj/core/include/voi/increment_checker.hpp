#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "voi/gaussian_env.hpp"

namespace voi {

using ActionPair = std::pair<VectorXd, VectorXd>;

/// Tail table for one pair (a, a'): P(|v_a - v_a'| >= t) against the
/// sub-Gaussian envelope 2 exp(-t^2 / (2 rho^2)).
struct TailReport {
  VectorXd a;
  VectorXd b;
  double rho = 0.0;
  /// rho * {0, 0.5, 1, 1.5, 2, 2.5, 3}.
  std::vector<double> t_grid;
  std::vector<double> empirical_tail;
  std::vector<double> bound;
  int violations = 0;
  /// rho(a, a') == 0; the tail table is left empty.
  bool degenerate = false;
};

/// Multiples of rho at which tails are tabulated.
inline constexpr double kTailGrid[] = {0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0};

/// Simulates D = <a - a', Z>, Z ~ N(0, W), n times per pair (pair i uses
/// stream seed derive_seed(seed, i), so swapping a and a' gives the same
/// |D| bit for bit). A grid point is a violation when
///   empirical > bound + 3 sqrt(bound (1 - bound / 2) / n).
/// n >= 10^4.
std::vector<TailReport> check_increments(const PosteriorOperator& op, const std::vector<ActionPair>& pairs,
                                         Index n, std::uint64_t seed, int threads = 1);

/// `count` pairs drawn uniformly from [-1, 1]^d.
std::vector<ActionPair> random_action_pairs(Index d, Index count, std::uint64_t seed);

int total_violations(const std::vector<TailReport>& reports);

}  // namespace voi
