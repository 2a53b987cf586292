#include "cli.hpp"

#if __has_include(<CLI11.hpp>)
#include <CLI11.hpp>
#else
#include <CLI/CLI.hpp>
#endif
#include <nlohmann/json.hpp>

#include <algorithm>
#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include "voi/voi.hpp"
#include "voi/serialization.hpp"

namespace voi::cli {

namespace {

/// Raised for configuration problems detected after CLI11 parsing.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct OperatorFlags {
  std::string cov_path;
  std::string w_path;
  Index d = 0;
  bool identity = false;
  std::vector<double> band;
  bool no_unit_diagonal = false;
};

struct CommonFlags {
  std::uint64_t seed = 1;
  int threads = 0;
  std::string output;
  std::string format = "json";
  bool deterministic = false;
};

struct RunConfig {
  OperatorFlags op;
  CommonFlags common;
  std::string set;
  std::string points_path;
  Index n = 100000;
  bool antithetic = false;
  int nodes = 512;
  // sweep
  std::vector<Index> dims;
  int replicates = 1;
  std::string summary_path;
  // verify
  std::string pairs = "random:16";
};

void add_operator_flags(CLI::App* cmd, OperatorFlags& f) {
  cmd->add_option("--cov", f.cov_path, "Joint covariance file (\"d k\", Sigma_theta, Sigma_theta_s, Sigma_s)")
      ->check(CLI::ExistingFile);
  cmd->add_option("--w", f.w_path, "Posterior operator W as a \"rows cols\" matrix file")->check(CLI::ExistingFile);
  cmd->add_option("--d", f.d, "Dimension for a generated operator")->check(CLI::PositiveNumber);
  cmd->add_flag("--identity", f.identity, "Use W = I_d");
  cmd->add_option("--band", f.band, "Random W with eigenvalues uniform in [lo,hi]")->delimiter(',')->expected(2);
  cmd->add_flag("--no-unit-diagonal", f.no_unit_diagonal, "Do not require diag(Sigma_theta) = 1 for --cov");
}

void add_common_flags(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--seed", f.seed, "Seed for every random draw")->capture_default_str();
  cmd->add_option("--threads", f.threads, "Worker threads (0 = all cores); output does not depend on it")
      ->capture_default_str();
  cmd->add_option("--output,-o", f.output, "Write results to this file instead of stdout");
  cmd->add_option("--format", f.format, "Output format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  cmd->add_flag("--deterministic", f.deterministic, "Omit the timestamp so identical runs give identical bytes");
}

PosteriorOperator build_operator(const OperatorFlags& f, std::uint64_t seed) {
  const int sources = static_cast<int>(!f.cov_path.empty()) + static_cast<int>(!f.w_path.empty()) +
                      static_cast<int>(f.d > 0);
  if (sources != 1) throw UsageError("exactly one of --cov, --w or --d is required");
  if (!f.cov_path.empty()) {
    JointOptions options;
    options.enforce_unit_diagonal = !f.no_unit_diagonal;
    return compute_posterior_operator(read_joint_gaussian_file(f.cov_path, options));
  }
  if (!f.w_path.empty()) return PosteriorOperator::from_matrix(read_matrix_file(f.w_path));
  if (f.identity == !f.band.empty()) throw UsageError("--d needs exactly one of --identity or --band lo,hi");
  if (f.identity) return PosteriorOperator::identity(f.d);
  return random_bounded_operator(f.d, SpectralBand(f.band[0], f.band[1]), derive_seed(seed, 1));
}

ActionSet build_set(const RunConfig& cfg, Index d) {
  if (cfg.set.empty()) throw UsageError("--set is required");
  const SetKind kind = parse_set_kind(cfg.set);
  if (kind == SetKind::FiniteSet) {
    if (cfg.points_path.empty()) throw UsageError("--set finite needs --points FILE");
    ActionSet set = ActionSet::finite(read_matrix_file(cfg.points_path));
    if (set.dim() != d) throw DimensionMismatch("--points dimension differs from W");
    return set;
  }
  if (kind == SetKind::Custom) throw UsageError("custom action sets are only available through the library");
  return ActionSet::ball(kind, d);
}

std::string timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream s;
  s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return s.str();
}

void stamp(nlohmann::json& j, const CommonFlags& common) {
  if (!common.deterministic) j["generated_at"] = timestamp();
}

std::string csv_line(const nlohmann::json& row, const std::vector<std::string>& columns) {
  std::ostringstream s;
  s << std::setprecision(17);
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i) s << ',';
    const auto& v = row.at(columns[i]);
    if (v.is_null()) continue;
    if (v.is_string()) {
      s << v.get<std::string>();
    } else if (v.is_number_float()) {
      s << v.get<double>();
    } else {
      s << v.dump();
    }
  }
  return s.str();
}

void emit(const std::string& text, const CommonFlags& common, std::ostream& out) {
  if (common.output.empty()) {
    out << text;
    return;
  }
  std::ofstream file(common.output);
  if (!file) throw UsageError("cannot write " + common.output);
  file << text;
}

void emit_record(const nlohmann::json& j, const std::vector<std::string>& columns, const CommonFlags& common,
                 std::ostream& out) {
  if (common.format == "csv") {
    std::string header;
    for (std::size_t i = 0; i < columns.size(); ++i) header += (i ? "," : "") + columns[i];
    emit(header + "\n" + csv_line(j, columns) + "\n", common, out);
  } else {
    emit(j.dump(2) + "\n", common, out);
  }
}

int cmd_estimate(const RunConfig& cfg, std::ostream& out) {
  const PosteriorOperator op = build_operator(cfg.op, cfg.common.seed);
  const ActionSet set = build_set(cfg, op.dim());
  EstimatorOptions options;
  options.antithetic = cfg.antithetic;
  options.threads = cfg.common.threads;
  const VoiEstimate est = estimate_voi(op, set, cfg.n, cfg.common.seed, options);
  nlohmann::json j = est;
  j["d"] = op.dim();
  j["set_kind"] = std::string(to_string(set.kind()));
  stamp(j, cfg.common);
  emit_record(j, {"d", "set_kind", "mean", "std_error", "n_samples", "seed", "closed_form"}, cfg.common, out);
  return kOk;
}

int cmd_bounds(const RunConfig& cfg, std::ostream& out) {
  const PosteriorOperator op = build_operator(cfg.op, cfg.common.seed);
  const ActionSet set = build_set(cfg, op.dim());
  EstimatorOptions options;
  options.antithetic = cfg.antithetic;
  options.threads = cfg.common.threads;
  const BoundReport report = voi_sandwich(op, set, cfg.n, cfg.common.seed, options, cfg.nodes);
  nlohmann::json j = report;
  stamp(j, cfg.common);
  emit_record(j, {"d", "set_kind", "lower", "mc", "stderr", "upper", "n", "seed", "lambda_min", "lambda_max"},
              cfg.common, out);
  return kOk;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out) {
  if (cfg.dims.empty()) throw UsageError("--dims is required");
  if (cfg.op.band.size() != 2) throw UsageError("--band lo,hi is required");
  if (cfg.set.empty()) throw UsageError("--set is required");
  SweepConfig sweep;
  sweep.dims = cfg.dims;
  sweep.band = SpectralBand(cfg.op.band[0], cfg.op.band[1]);
  sweep.set_kind = parse_set_kind(cfg.set);
  sweep.n_mc = cfg.n;
  sweep.seed = cfg.common.seed;
  sweep.replicates = cfg.replicates;
  sweep.threads = cfg.common.threads;
  sweep.quadrature_nodes = cfg.nodes;
  sweep.antithetic = cfg.antithetic;
  sweep.validate();

  const std::vector<SweepRecord> records = run_sweep(sweep);
  std::ostringstream csv;
  write_sweep_csv(csv, records);
  nlohmann::json summary = sweep_summary(sweep, records);
  stamp(summary, cfg.common);

  // CSV goes to --output (or stdout); the summary to --summary, or to stdout
  // when the CSV went to a file.
  if (cfg.common.output.empty()) {
    out << csv.str();
  } else {
    std::ofstream file(cfg.common.output);
    if (!file) throw UsageError("cannot write " + cfg.common.output);
    file << csv.str();
  }
  if (!cfg.summary_path.empty()) {
    std::ofstream file(cfg.summary_path);
    if (!file) throw UsageError("cannot write " + cfg.summary_path);
    file << summary.dump(2) << '\n';
  } else if (!cfg.common.output.empty()) {
    out << summary.dump(2) << '\n';
  }
  return summary["failed"].empty() ? kOk : kNumericalFailure;
}

std::vector<ActionPair> build_pairs(const std::string& spec, Index d, std::uint64_t seed) {
  if (spec.rfind("random:", 0) == 0) {
    Index count = 0;
    try {
      count = std::stoll(spec.substr(7));
    } catch (const std::exception&) {
      throw UsageError("--pairs random:N needs an integer N");
    }
    if (count < 1) throw UsageError("--pairs random:N needs N >= 1");
    return random_action_pairs(d, count, derive_seed(seed, 3));
  }
  // A "rows cols" matrix with cols = 2d: each row is a concatenated (a, a').
  const MatrixXd m = read_matrix_file(spec);
  if (m.cols() != 2 * d) throw DimensionMismatch("--pairs file needs 2d columns");
  std::vector<ActionPair> pairs;
  for (Index i = 0; i < m.rows(); ++i) {
    pairs.emplace_back(m.row(i).head(d).transpose(), m.row(i).tail(d).transpose());
  }
  return pairs;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
  const PosteriorOperator op = build_operator(cfg.op, cfg.common.seed);
  const std::vector<ActionPair> pairs = build_pairs(cfg.pairs, op.dim(), cfg.common.seed);
  const std::vector<TailReport> reports = check_increments(op, pairs, cfg.n, cfg.common.seed, cfg.common.threads);
  const int violations = total_violations(reports);
  nlohmann::json j = {{"d", op.dim()},
                      {"n", cfg.n},
                      {"seed", cfg.common.seed},
                      {"pairs", reports.size()},
                      {"violations", violations},
                      {"reports", reports}};
  stamp(j, cfg.common);
  emit(j.dump(2) + "\n", cfg.common, out);
  return violations == 0 ? kOk : kNumericalFailure;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Value of information for high-dimensional Gaussian decision problems", "voi"};
  app.require_subcommand(1);
  app.set_config("--config", "", "TOML/INI config file; command-line flags override it, and it overrides defaults");
  app.footer("Exit codes: 0 ok, 1 numerical failure or violations, 2 usage error.");

  RunConfig cfg;

  auto* estimate = app.add_subcommand("estimate", "Monte Carlo estimate of the value of information");
  auto* bounds = app.add_subcommand("bounds", "Sudakov lower bound, MC estimate and upper bound");
  auto* sweep = app.add_subcommand("sweep", "Dimension sweep with log-log slope fits");
  auto* verify = app.add_subcommand("verify", "Check sub-Gaussian increments of the value process");

  for (auto* cmd : {estimate, bounds}) {
    add_operator_flags(cmd, cfg.op);
    add_common_flags(cmd, cfg.common);
    cmd->add_option("--set", cfg.set, "Action set: l1, l2, linf or finite");
    cmd->add_option("--points", cfg.points_path, "Rows of a finite action set (\"n d\" matrix file)")
        ->check(CLI::ExistingFile);
    cmd->add_option("--n", cfg.n, "Monte Carlo samples")->capture_default_str();
    cmd->add_flag("--antithetic", cfg.antithetic, "Pair every draw Z with -Z");
  }
  bounds->add_option("--nodes", cfg.nodes, "Quadrature nodes for the entropy integral")->capture_default_str();

  add_common_flags(sweep, cfg.common);
  sweep->add_option("--dims", cfg.dims, "Ascending dimensions, comma separated")->delimiter(',');
  sweep->add_option("--band", cfg.op.band, "Eigenvalue band lo,hi")->delimiter(',')->expected(2);
  sweep->add_option("--set", cfg.set, "l2 or linf");
  sweep->add_option("--n", cfg.n, "Monte Carlo samples per cell")->capture_default_str();
  sweep->add_option("--replicates", cfg.replicates, "Replicates per dimension")->capture_default_str();
  sweep->add_option("--summary", cfg.summary_path, "Write the JSON summary here");
  sweep->add_option("--nodes", cfg.nodes, "Quadrature nodes for the entropy integral")->capture_default_str();
  sweep->add_flag("--antithetic", cfg.antithetic, "Pair every draw Z with -Z");

  add_operator_flags(verify, cfg.op);
  add_common_flags(verify, cfg.common);
  verify->add_option("--pairs", cfg.pairs, "random:N, or a matrix file whose rows are (a, a')")->capture_default_str();
  verify->add_option("--n", cfg.n, "Samples per pair")->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "voi: " << e.what() << "\n" << app.help();
    return kUsage;
  }

  try {
    if (*estimate) return cmd_estimate(cfg, out);
    if (*bounds) return cmd_bounds(cfg, out);
    if (*sweep) return cmd_sweep(cfg, out);
    if (*verify) return cmd_verify(cfg, out);
  } catch (const UsageError& e) {
    err << "voi: " << e.what() << "\n" << app.help();
    return kUsage;
  } catch (const InvalidArgument& e) {
    err << "voi: " << e.what() << '\n';
    return kUsage;
  } catch (const ParseError& e) {
    err << "voi: " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    err << "voi: " << e.what() << '\n';
    return kNumericalFailure;
  }
  return kUsage;
}

}  // namespace voi::cli
