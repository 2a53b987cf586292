#pragma once

// Monte Carlo estimate of the expected value of information
//
//   V = E[ sup_{a in A} <a, Z> ],   Z = E[theta | S] ~ N(0, W),
//
// for the linear utility u(a, theta) = <a, theta>. With that utility every
// action has prior expected utility 0, so the "sup_a E u" term of V vanishes
// and V equals the centred value; nothing else is supported.

#include <cstdint>
#include <optional>

#include "voi/chaining_bounds.hpp"
#include "voi/metric_geometry.hpp"

namespace voi {

struct EstimatorOptions {
  /// Pair each draw Z with -Z. For a symmetric A both members of the pair
  /// have the same value, so this buys nothing there; it is off by default.
  bool antithetic = false;
  int threads = 1;
  /// Samples per work unit. Results depend on this value (summation order)
  /// but never on `threads`.
  Index chunk_size = 4096;
};

struct VoiEstimate {
  double mean;
  /// sample_std / sqrt(n); with antithetic pairs the std of the pair means
  /// over sqrt(n / 2).
  double std_error;
  Index n_samples;
  std::uint64_t seed;
  bool antithetic;
  std::optional<double> closed_form;
};

/// Known exact values of V:
///   Linf ball: sqrt(2/pi) sum_i sqrt(W_ii)
///   L2 ball with W = c I: sqrt(c) sqrt(2) Gamma((d+1)/2) / Gamma(d/2)
std::optional<double> closed_form_voi(const PosteriorOperator& op, const ActionSet& set);

/// Mean of a chi-distributed variable with d degrees of freedom.
double chi_mean(Index d);

/// n >= 100. Throws DimensionMismatch when A and W disagree.
VoiEstimate estimate_voi(const PosteriorOperator& op, const ActionSet& set, Index n, std::uint64_t seed,
                         EstimatorOptions options = {});

/// Lower bound, MC estimate and upper bound reported on one scale.
///   L2:   Sudakov lower / Dudley upper
///   Linf: Sudakov lower / sqrt(lambda_max) d sqrt(2/pi)
struct BoundReport {
  Index d;
  SetKind set_kind;
  double lower;
  double mc;
  double std_error;
  double upper;
  Index n;
  std::uint64_t seed;
  double lambda_min;
  double lambda_max;
  double epsilon_star;
  std::optional<double> closed_form;
};

BoundReport voi_sandwich(const PosteriorOperator& op, const ActionSet& set, Index n, std::uint64_t seed,
                         EstimatorOptions options = {}, int quadrature_nodes = 512);

}  // namespace voi
