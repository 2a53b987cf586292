#pragma once

#include <nlohmann/json.hpp>

#include <vector>

#include "voi/chaining_bounds.hpp"
#include "voi/covering.hpp"
#include "voi/experiments.hpp"
#include "voi/increment_checker.hpp"
#include "voi/voi_estimator.hpp"

namespace voi {

// {epsilon, log_n_lower, log_n_upper, method}; log_n_upper is null when absent.
void to_json(nlohmann::json& j, const CoveringEstimate& e);
// {lower, upper, epsilon_star, d, lambda_min, lambda_max, nodes}
void to_json(nlohmann::json& j, const GammaBounds& b);
// {mean, std_error, n_samples, seed, antithetic, closed_form}
void to_json(nlohmann::json& j, const VoiEstimate& e);
// {d, set_kind, lower, mc, stderr, upper, n, seed, lambda_min, lambda_max}
void to_json(nlohmann::json& j, const BoundReport& r);
void to_json(nlohmann::json& j, const TailReport& r);
void to_json(nlohmann::json& j, const SweepRecord& r);
void to_json(nlohmann::json& j, const SlopeFit& f);

/// Slopes and R^2 for mc, lower and upper (null when the fit is not
/// possible), the config, and any failed cells.
nlohmann::json sweep_summary(const SweepConfig& cfg, const std::vector<SweepRecord>& records);

}  // namespace voi
