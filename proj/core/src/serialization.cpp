#include "voi/serialization.hpp"

#include "voi/errors.hpp"

namespace voi {

namespace {

nlohmann::json vector_json(const VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

template <typename T>
nlohmann::json optional_json(const std::optional<T>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

}  // namespace

void to_json(nlohmann::json& j, const CoveringEstimate& e) {
  j = {{"epsilon", e.epsilon},
       {"log_n_lower", e.log_n_lower},
       {"log_n_upper", optional_json(e.log_n_upper)},
       {"method", e.method}};
}

void to_json(nlohmann::json& j, const GammaBounds& b) {
  j = {{"lower", b.lower},           {"upper", b.upper},           {"epsilon_star", b.epsilon_star},
       {"d", b.d},                   {"lambda_min", b.lambda_min}, {"lambda_max", b.lambda_max},
       {"nodes", b.nodes}};
}

void to_json(nlohmann::json& j, const VoiEstimate& e) {
  j = {{"mean", e.mean},
       {"std_error", e.std_error},
       {"n_samples", e.n_samples},
       {"seed", e.seed},
       {"antithetic", e.antithetic},
       {"closed_form", optional_json(e.closed_form)}};
}

void to_json(nlohmann::json& j, const BoundReport& r) {
  j = {{"d", r.d},
       {"set_kind", std::string(to_string(r.set_kind))},
       {"lower", r.lower},
       {"mc", r.mc},
       {"stderr", r.std_error},
       {"upper", r.upper},
       {"n", r.n},
       {"seed", r.seed},
       {"lambda_min", r.lambda_min},
       {"lambda_max", r.lambda_max}};
}

void to_json(nlohmann::json& j, const TailReport& r) {
  j = {{"a", vector_json(r.a)},
       {"b", vector_json(r.b)},
       {"rho", r.rho},
       {"t_grid", r.t_grid},
       {"empirical_tail", r.empirical_tail},
       {"bound", r.bound},
       {"violations", r.violations},
       {"degenerate", r.degenerate}};
}

void to_json(nlohmann::json& j, const SweepRecord& r) {
  j = {{"d", r.d},
       {"replicate", r.replicate},
       {"seed", r.seed},
       {"mc", r.mc},
       {"stderr", r.std_error},
       {"lower", r.lower},
       {"upper", r.upper},
       {"lambda_min", r.lambda_min},
       {"lambda_max", r.lambda_max}};
  if (r.failed) {
    j["failed"] = true;
    j["error"] = r.error;
  }
}

void to_json(nlohmann::json& j, const SlopeFit& f) {
  j = {{"slope", f.slope}, {"intercept", f.intercept}, {"r2", f.r2}, {"points", f.points}};
}

nlohmann::json sweep_summary(const SweepConfig& cfg, const std::vector<SweepRecord>& records) {
  nlohmann::json summary;
  summary["config"] = {{"dims", cfg.dims},
                       {"band", {cfg.band.lo(), cfg.band.hi()}},
                       {"set_kind", std::string(to_string(cfg.set_kind))},
                       {"n", cfg.n_mc},
                       {"seed", cfg.seed},
                       {"replicates", cfg.replicates}};
  nlohmann::json slopes = nlohmann::json::object();
  for (SweepField field : {SweepField::Mc, SweepField::Lower, SweepField::Upper}) {
    try {
      slopes[std::string(to_string(field))] = fit_loglog_slope(records, field);
    } catch (const InsufficientData&) {
      slopes[std::string(to_string(field))] = nullptr;
    }
  }
  summary["slopes"] = std::move(slopes);
  nlohmann::json failed = nlohmann::json::array();
  for (const auto& r : records) {
    if (r.failed) failed.push_back(r);
  }
  summary["failed"] = std::move(failed);
  summary["records"] = records.size();
  return summary;
}

}  // namespace voi
