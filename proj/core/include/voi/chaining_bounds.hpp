#pragma once

// Bounds on Talagrand's gamma_2(A, rho) for the unit L2 and Linf balls:
//
//   eps sqrt(log N(A, rho, eps))  <~  gamma_2(A, rho)  <~  int_0^diam sqrt(log N(A, rho, eps)) d eps
//
// The lower (Sudakov-type) bound holds for every eps; the upper bound is
// Dudley's entropy integral. Both use the volume bounds on log N, so neither
// ever needs a point cloud. Universal constants are not estimated.

#include <vector>

#include "voi/metric_geometry.hpp"

namespace voi {

struct SudakovResult {
  /// max over the eps grid (and the closed-form eps) of eps sqrt(max(0, log n_lower(eps))).
  double value;
  /// The eps achieving `value`.
  double epsilon_star;
  /// Closed-form choice of eps for the set kind and the bound evaluated there:
  ///   L2:   e^{-1/2} det(W)^{1/(2d)}
  ///   Linf: (2 / (pi sqrt(e))) (sqrt(det W) Gamma(d/2 + 1))^{1/d}
  double closed_form_epsilon;
  double closed_form_value;
};

/// Number of log-spaced eps values scanned over [diam / 1e4, diam].
inline constexpr int kSudakovGridPoints = 64;

/// Explicit constant c in sudakov_lower(Linf) >= c sqrt(lambda_min) d, from
/// Gamma(x + 1) >= (x / e)^x applied at the closed-form eps:
///   c = sqrt(1 + log pi) / (pi e).
double linf_sudakov_constant();

/// Throws UnsupportedSet unless A is the L2 or Linf ball, SingularOperator
/// if W is singular.
SudakovResult sudakov_lower(const ActionSet& set, const PosteriorOperator& op);

struct QuadratureTrace {
  std::vector<double> nodes;   // eps values
  std::vector<double> values;  // integrand sqrt(max(0, log n_upper(eps))) at the nodes
  std::vector<double> weights; // quadrature weights in eps
};

struct DudleyResult {
  double value;
  double diameter;
  /// Upper integration limit: the diameter, or the eps where the log-count
  /// bound reaches zero if that comes first.
  double upper_limit;
  QuadratureTrace trace;
};

/// Dudley's integral for the unit L2 ball with
///   log N <= d log(2/eps + 1/sqrt(lambda_min)) + (1/2) log det W
/// over eps in (0, 2 sqrt(lambda_max)]. The substitution eps = diam e^{-t}
/// removes the endpoint singularity; t is integrated with composite
/// 8-point Gauss-Legendre panels. quadrature_nodes >= 16.
/// Throws UnsupportedSet for any other set kind (there is no matching
/// entropy bound for the cube) and SingularOperator for singular W.
double dudley_upper(const ActionSet& set, const PosteriorOperator& op, int quadrature_nodes = 512);
DudleyResult dudley_upper_traced(const ActionSet& set, const PosteriorOperator& op, int quadrature_nodes = 512);

/// E sup_{a in [-1,1]^d} <a, theta> = E|theta|_1 = d sqrt(2/pi) for theta ~ N(0, I_d).
double perfect_info_benchmark(Index d);

struct GammaBounds {
  double lower;
  double upper;
  double epsilon_star;
  Index d;
  double lambda_min;
  double lambda_max;
  int nodes;
  /// Empty for the Linf ball, whose upper bound is sqrt(lambda_max) d sqrt(2/pi).
  QuadratureTrace detail;
};

/// Combined bounds. L2: Sudakov / Dudley. Linf: Sudakov / scaled perfect-information benchmark.
GammaBounds gamma_bounds(const ActionSet& set, const PosteriorOperator& op, int quadrature_nodes = 512);

}  // namespace voi
