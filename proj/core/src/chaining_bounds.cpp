#include "voi/chaining_bounds.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "voi/covering.hpp"
#include "voi/errors.hpp"

namespace voi {

namespace {

// t range of the eps = U e^{-t} substitution; the tail beyond is below 1e-20 relative.
constexpr double kTailT = 50.0;

void require_ball(const ActionSet& set, const PosteriorOperator& op) {
  if (set.kind() != SetKind::L2Ball && set.kind() != SetKind::LinfBall) {
    throw UnsupportedSet("chaining bounds are implemented for the L2 and Linf unit balls");
  }
  if (set.dim() != op.dim()) throw DimensionMismatch("action set and operator dimensions differ");
  if (!op.invertible()) throw SingularOperator("chaining bounds need an invertible W");
}

double sudakov_term(SetKind kind, const PosteriorOperator& op, double epsilon) {
  const double log_n = log_ceil_count(log_volume_ratio_lower(kind, op, epsilon));
  return epsilon * std::sqrt(std::max(0.0, log_n));
}

}  // namespace

double linf_sudakov_constant() {
  return std::sqrt(1.0 + std::log(std::numbers::pi)) / (std::numbers::pi * std::numbers::e);
}

SudakovResult sudakov_lower(const ActionSet& set, const PosteriorOperator& op) {
  require_ball(set, op);
  const Index d = op.dim();
  const auto dd = static_cast<double>(d);
  const double log_det = op.log_det();

  double closed_eps = 0.0;
  double diam = 0.0;
  if (set.kind() == SetKind::L2Ball) {
    closed_eps = std::exp(-0.5 + log_det / (2.0 * dd));
    diam = 2.0 * std::sqrt(op.lambda_max());
  } else {
    closed_eps = 2.0 / (std::numbers::pi * std::sqrt(std::numbers::e)) *
                 std::exp((0.5 * log_det + log_gamma(0.5 * dd + 1.0)) / dd);
    diam = 2.0 * std::sqrt(op.lambda_max() * dd);
  }

  SudakovResult result{};
  result.closed_form_epsilon = closed_eps;
  result.closed_form_value = sudakov_term(set.kind(), op, closed_eps);
  result.value = result.closed_form_value;
  result.epsilon_star = closed_eps;

  const double lo = diam * 1e-4;
  const double log_step = std::log(diam / lo) / (kSudakovGridPoints - 1);
  for (int i = 0; i < kSudakovGridPoints; ++i) {
    const double eps = lo * std::exp(log_step * i);
    const double v = sudakov_term(set.kind(), op, eps);
    if (v > result.value) {
      result.value = v;
      result.epsilon_star = eps;
    }
  }
  return result;
}

DudleyResult dudley_upper_traced(const ActionSet& set, const PosteriorOperator& op, int quadrature_nodes) {
  if (set.kind() != SetKind::L2Ball) {
    throw UnsupportedSet("Dudley's integral is only available for the L2 ball; use the perfect-information benchmark "
                         "for the cube");
  }
  require_ball(set, op);
  if (quadrature_nodes < 16) throw InvalidArgument("dudley_upper needs at least 16 quadrature nodes");

  const auto d = static_cast<double>(op.dim());
  const double inv_sqrt_min = 1.0 / std::sqrt(op.lambda_min());
  const double half_log_det = 0.5 * op.log_det();
  const double diam = 2.0 * std::sqrt(op.lambda_max());

  // log n_upper(eps) is decreasing in eps; cut the range where it hits zero.
  double upper = diam;
  const double threshold = std::exp(-half_log_det / d);
  if (threshold > inv_sqrt_min) upper = std::min(diam, 2.0 / (threshold - inv_sqrt_min));

  using Rule = boost::math::quadrature::gauss<double, 8>;
  const auto& abscissa = Rule::abscissa();
  const auto& weights = Rule::weights();
  const int panels = std::max(1, quadrature_nodes / 8);
  const double width = kTailT / panels;

  DudleyResult result{0.0, diam, upper, {}};
  auto& trace = result.trace;
  trace.nodes.reserve(static_cast<std::size_t>(panels) * 8);
  auto add_node = [&](double t, double w) {
    const double eps = upper * std::exp(-t);
    const double log_n = d * std::log(2.0 / eps + inv_sqrt_min) + half_log_det;
    const double f = std::sqrt(std::max(0.0, log_n));
    const double weight = w * eps;  // d eps = -eps dt
    trace.nodes.push_back(eps);
    trace.values.push_back(f);
    trace.weights.push_back(weight);
  };
  for (int p = 0; p < panels; ++p) {
    const double mid = width * (p + 0.5);
    const double half = 0.5 * width;
    // gauss<double, 8> stores the nonnegative half of a symmetric rule (no zero node for even N).
    for (std::size_t k = 0; k < abscissa.size(); ++k) {
      add_node(mid - half * abscissa[k], half * weights[k]);
      add_node(mid + half * abscissa[k], half * weights[k]);
    }
  }
  double sum = 0.0;
  double compensation = 0.0;
  for (std::size_t i = 0; i < trace.nodes.size(); ++i) {
    const double term = trace.weights[i] * trace.values[i] - compensation;
    const double next = sum + term;
    compensation = (next - sum) - term;
    sum = next;
  }
  result.value = sum;
  return result;
}

double dudley_upper(const ActionSet& set, const PosteriorOperator& op, int quadrature_nodes) {
  return dudley_upper_traced(set, op, quadrature_nodes).value;
}

double perfect_info_benchmark(Index d) {
  if (d < 1) throw InvalidArgument("dimension must be positive");
  return static_cast<double>(d) * std::sqrt(2.0 / std::numbers::pi);
}

GammaBounds gamma_bounds(const ActionSet& set, const PosteriorOperator& op, int quadrature_nodes) {
  const SudakovResult lower = sudakov_lower(set, op);
  GammaBounds bounds{lower.value, 0.0, lower.epsilon_star, op.dim(), op.lambda_min(), op.lambda_max(),
                     quadrature_nodes, {}};
  if (set.kind() == SetKind::L2Ball) {
    DudleyResult upper = dudley_upper_traced(set, op, quadrature_nodes);
    bounds.upper = upper.value;
    bounds.detail = std::move(upper.trace);
  } else {
    bounds.upper = std::sqrt(op.lambda_max()) * perfect_info_benchmark(op.dim());
  }
  return bounds;
}

}  // namespace voi
