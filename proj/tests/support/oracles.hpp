#pragma once

// Test-only oracles. Everything here is independent of the library's
// algorithms: exhaustive subset search for covering/packing numbers, a
// certified grid cover of the disk, and direct quadrature for closed forms.

#include <Eigen/Dense>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

namespace voi::testing {

/// Pairwise rho distances computed straight from the quadratic form.
inline Eigen::MatrixXd pairwise_rho(const Eigen::MatrixXd& points, const Eigen::MatrixXd& w) {
  const Eigen::Index n = points.rows();
  Eigen::MatrixXd dist(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const Eigen::VectorXd diff = (points.row(i) - points.row(j)).transpose();
      dist(i, j) = std::sqrt(std::max(0.0, diff.dot(w * diff)));
    }
  }
  return dist;
}

/// Minimum number of closed eps-balls centred at cloud points covering the cloud.
inline int exact_covering_number(const Eigen::MatrixXd& dist, double eps) {
  const auto n = static_cast<int>(dist.rows());
  std::vector<std::uint32_t> reach(static_cast<std::size_t>(n), 0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (dist(i, j) <= eps) reach[static_cast<std::size_t>(i)] |= 1u << j;
    }
  }
  const std::uint32_t all = (n == 32) ? ~0u : ((1u << n) - 1u);
  int best = n;
  for (std::uint32_t mask = 1; mask <= all; ++mask) {
    const int size = std::popcount(mask);
    if (size >= best) continue;
    std::uint32_t covered = 0;
    for (int i = 0; i < n; ++i) {
      if (mask & (1u << i)) covered |= reach[static_cast<std::size_t>(i)];
    }
    if (covered == all) best = size;
  }
  return best;
}

/// Maximum size of a subset whose pairwise distances all exceed eps.
inline int exact_packing_number(const Eigen::MatrixXd& dist, double eps) {
  const auto n = static_cast<int>(dist.rows());
  std::vector<std::uint32_t> close(static_cast<std::size_t>(n), 0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i != j && dist(i, j) <= eps) close[static_cast<std::size_t>(i)] |= 1u << j;
    }
  }
  const std::uint32_t all = (1u << n) - 1u;
  int best = 1;
  for (std::uint32_t mask = 1; mask <= all; ++mask) {
    const int size = std::popcount(mask);
    if (size <= best) continue;
    bool separated = true;
    for (int i = 0; i < n && separated; ++i) {
      if ((mask & (1u << i)) && (close[static_cast<std::size_t>(i)] & mask)) separated = false;
    }
    if (separated) best = size;
  }
  return best;
}

struct GridCoverResult {
  int cover_size;    // size of a certified eps-cover of the disk (>= N)
  int packing_size;  // size of a 2eps-separated subset of the disk (<= M(2 eps) <= N)
};

/// Certified bracket on N(B_2^2, rho, eps) for a 2x2 W.
///
/// Grid nodes with spacing h inside the disk enlarged by h are the targets;
/// any disk point lies within h/sqrt(2) (Euclidean) of a target, hence within
/// delta = sqrt(lambda_max) h / sqrt(2) in rho. Greedy set cover of the
/// targets with radius eps - delta is therefore an eps-cover of the disk.
inline GridCoverResult grid_cover_disk(const Eigen::Matrix2d& w, double eps, double h) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(w);
  const double delta = std::sqrt(eig.eigenvalues().maxCoeff()) * h / std::numbers::sqrt2;
  const double radius = eps - delta;
  std::vector<Eigen::Vector2d> targets;
  std::vector<Eigen::Vector2d> inside;
  const int steps = static_cast<int>(std::ceil((1.0 + h) / h));
  for (int i = -steps; i <= steps; ++i) {
    for (int j = -steps; j <= steps; ++j) {
      const Eigen::Vector2d p(i * h, j * h);
      if (p.norm() <= 1.0 + h) targets.push_back(p);
      if (p.norm() <= 1.0) inside.push_back(p);
    }
  }
  auto rho = [&](const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
    const Eigen::Vector2d diff = a - b;
    return std::sqrt(diff.dot(w * diff));
  };

  // Greedy set cover; candidate centres are the targets themselves.
  const std::size_t n = targets.size();
  std::vector<std::vector<std::uint32_t>> reach(n);
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t t = 0; t < n; ++t) {
      if (rho(targets[c], targets[t]) <= radius) reach[c].push_back(static_cast<std::uint32_t>(t));
    }
  }
  std::vector<char> covered(n, 0);
  std::size_t remaining = n;
  int cover = 0;
  while (remaining > 0) {
    std::size_t best = 0;
    std::size_t best_gain = 0;
    for (std::size_t c = 0; c < n; ++c) {
      std::size_t gain = 0;
      for (auto t : reach[c]) gain += covered[t] ? 0 : 1;
      if (gain > best_gain) {
        best_gain = gain;
        best = c;
      }
    }
    for (auto t : reach[best]) {
      if (!covered[t]) {
        covered[t] = 1;
        --remaining;
      }
    }
    ++cover;
  }

  // Greedy maximal 2eps-packing among disk grid points.
  std::vector<Eigen::Vector2d> packing;
  for (const auto& p : inside) {
    bool ok = true;
    for (const auto& q : packing) {
      if (rho(p, q) <= 2.0 * eps) {
        ok = false;
        break;
      }
    }
    if (ok) packing.push_back(p);
  }
  return {cover, static_cast<int>(packing.size())};
}

/// E[chi_d] by direct quadrature of r f(r), f the chi density.
inline double chi_mean_by_quadrature(int d) {
  const double k = static_cast<double>(d);
  const double log_norm = (1.0 - 0.5 * k) * std::log(2.0) - boost::math::lgamma(0.5 * k);
  auto integrand = [&](double r) { return std::exp(log_norm + k * std::log(r) - 0.5 * r * r); };
  boost::math::quadrature::exp_sinh<double> integrator;
  return integrator.integrate(integrand);
}

/// int_0^upper f(eps) d eps by tanh-sinh (handles the endpoint log singularity).
template <typename F>
double integrate_finite(F f, double upper) {
  boost::math::quadrature::tanh_sinh<double> integrator;
  return integrator.integrate(f, 0.0, upper);
}

/// Standard normal upper tail 1 - Phi(x).
inline double normal_upper_tail(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

}  // namespace voi::testing
