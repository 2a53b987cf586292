#include "voi/increment_checker.hpp"

#include <algorithm>
#include <cmath>

#include "voi/errors.hpp"
#include "voi/parallel.hpp"
#include "voi/random.hpp"

namespace voi {

std::vector<TailReport> check_increments(const PosteriorOperator& op, const std::vector<ActionPair>& pairs,
                                         Index n, std::uint64_t seed, int threads) {
  if (n < 10000) throw InvalidArgument("check_increments needs n >= 10^4");
  std::vector<TailReport> reports(pairs.size());
  parallel_for(pairs.size(), threads, [&](std::size_t p) {
    const auto& [a, b] = pairs[p];
    if (a.size() != op.dim() || b.size() != op.dim()) throw DimensionMismatch("action pair dimension differs from W");
    TailReport& report = reports[p];
    report.a = a;
    report.b = b;
    const VectorXd delta = a - b;
    report.rho = std::sqrt(std::max(0.0, delta.dot(op.w() * delta)));
    if (!(report.rho > 0.0)) {
      report.degenerate = true;
      return;
    }
    // <a - a', R g> = <R (a - a'), g>: exactly N(0, rho^2).
    const VectorXd direction = op.factor() * delta;
    const std::uint64_t pair_seed = derive_seed(seed, p);
    std::vector<double> magnitudes(static_cast<std::size_t>(n));
    VectorXd g(op.dim());
    for (Index i = 0; i < n; ++i) {
      fill_standard_normal(pair_seed, static_cast<std::uint64_t>(i), std::span<double>(g.data(), g.size()));
      magnitudes[static_cast<std::size_t>(i)] = std::abs(direction.dot(g));
    }
    std::sort(magnitudes.begin(), magnitudes.end());
    const auto nn = static_cast<double>(n);
    for (double multiple : kTailGrid) {
      const double t = multiple * report.rho;
      const auto below = std::lower_bound(magnitudes.begin(), magnitudes.end(), t) - magnitudes.begin();
      const double empirical = (nn - static_cast<double>(below)) / nn;
      const double bound = 2.0 * std::exp(-0.5 * multiple * multiple);
      const double slack = 3.0 * std::sqrt(std::max(0.0, bound * (1.0 - 0.5 * bound)) / nn);
      report.t_grid.push_back(t);
      report.empirical_tail.push_back(empirical);
      report.bound.push_back(bound);
      if (empirical > bound + slack) ++report.violations;
    }
  });
  return reports;
}

std::vector<ActionPair> random_action_pairs(Index d, Index count, std::uint64_t seed) {
  if (d < 1 || count < 0) throw InvalidArgument("random_action_pairs needs d >= 1 and count >= 0");
  std::vector<ActionPair> pairs;
  pairs.reserve(static_cast<std::size_t>(count));
  for (Index i = 0; i < count; ++i) {
    RandomStream rng(seed, static_cast<std::uint64_t>(i));
    VectorXd a(d);
    VectorXd b(d);
    for (Index j = 0; j < d; ++j) a(j) = rng.uniform(-1.0, 1.0);
    for (Index j = 0; j < d; ++j) b(j) = rng.uniform(-1.0, 1.0);
    pairs.emplace_back(std::move(a), std::move(b));
  }
  return pairs;
}

int total_violations(const std::vector<TailReport>& reports) {
  int total = 0;
  for (const auto& r : reports) total += r.violations;
  return total;
}

}  // namespace voi
