#include "voi/experiments.hpp"

#include <cmath>
#include <iomanip>
#include <map>
#include <ostream>

#include "voi/errors.hpp"
#include "voi/parallel.hpp"
#include "voi/random.hpp"

namespace voi {

void SweepConfig::validate() const {
  if (dims.empty()) throw InvalidArgument("sweep needs at least one dimension");
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (dims[i] < 1) throw InvalidArgument("sweep dimensions must be positive");
    if (i > 0 && dims[i] <= dims[i - 1]) throw InvalidArgument("sweep dimensions must be strictly ascending");
  }
  if (replicates < 1) throw InvalidArgument("sweep needs replicates >= 1");
  if (n_mc < 100) throw InvalidArgument("sweep needs n >= 100");
  if (set_kind != SetKind::L2Ball && set_kind != SetKind::LinfBall) {
    throw InvalidArgument("sweeps run on the L2 or Linf ball");
  }
}

std::uint64_t cell_seed(std::uint64_t base, Index d, int replicate) noexcept {
  return derive_seed(derive_seed(base, static_cast<std::uint64_t>(d)), static_cast<std::uint64_t>(replicate));
}

std::vector<SweepRecord> run_sweep(const SweepConfig& cfg) {
  cfg.validate();
  const auto reps = static_cast<std::size_t>(cfg.replicates);
  std::vector<SweepRecord> records(cfg.dims.size() * reps);
  parallel_for(records.size(), cfg.threads, [&](std::size_t cell) {
    SweepRecord& rec = records[cell];
    rec.d = cfg.dims[cell / reps];
    rec.replicate = static_cast<int>(cell % reps);
    rec.seed = cell_seed(cfg.seed, rec.d, rec.replicate);
    try {
      const PosteriorOperator op = random_bounded_operator(rec.d, cfg.band, derive_seed(rec.seed, 1));
      const ActionSet set = ActionSet::ball(cfg.set_kind, rec.d);
      EstimatorOptions options;
      options.antithetic = cfg.antithetic;
      const BoundReport report =
          voi_sandwich(op, set, cfg.n_mc, derive_seed(rec.seed, 2), options, cfg.quadrature_nodes);
      rec.mc = report.mc;
      rec.std_error = report.std_error;
      rec.lower = report.lower;
      rec.upper = report.upper;
      rec.lambda_min = report.lambda_min;
      rec.lambda_max = report.lambda_max;
    } catch (const Error& e) {
      rec.failed = true;
      rec.error = e.what();
    }
  });
  return records;
}

SweepField parse_sweep_field(std::string_view text) {
  if (text == "mc") return SweepField::Mc;
  if (text == "lower") return SweepField::Lower;
  if (text == "upper") return SweepField::Upper;
  throw InvalidArgument("unknown sweep field '" + std::string(text) + "'");
}

std::string_view to_string(SweepField field) noexcept {
  switch (field) {
    case SweepField::Mc: return "mc";
    case SweepField::Lower: return "lower";
    case SweepField::Upper: return "upper";
  }
  return "unknown";
}

SlopeFit fit_loglog_slope(const std::vector<SweepRecord>& records, SweepField field) {
  std::map<Index, std::pair<double, int>> by_dim;
  for (const auto& r : records) {
    if (r.failed) continue;
    const double v = field == SweepField::Mc ? r.mc : field == SweepField::Lower ? r.lower : r.upper;
    auto& [sum, count] = by_dim[r.d];
    sum += v;
    ++count;
  }
  if (by_dim.size() < 4) {
    throw InsufficientData("slope fit needs at least 4 distinct dimensions, got " + std::to_string(by_dim.size()));
  }
  std::vector<double> xs;
  std::vector<double> ys;
  for (const auto& [d, acc] : by_dim) {
    const double mean = acc.first / acc.second;
    if (!(mean > 0.0)) throw InsufficientData("slope fit needs positive values, d = " + std::to_string(d));
    xs.push_back(std::log(static_cast<double>(d)));
    ys.push_back(std::log(mean));
  }
  const auto m = static_cast<double>(xs.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= m;
  my /= m;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  SlopeFit fit{};
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double sse = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (fit.intercept + fit.slope * xs[i]);
    sse += r * r;
  }
  fit.r2 = syy > 0.0 ? 1.0 - sse / syy : 1.0;
  fit.points = static_cast<int>(xs.size());
  return fit;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRecord>& records) {
  const auto flags = out.flags();
  const auto precision = out.precision();
  out << "d,replicate,seed,mc,stderr,lower,upper,lambda_min,lambda_max\n" << std::setprecision(17);
  for (const auto& r : records) {
    if (r.failed) continue;
    out << r.d << ',' << r.replicate << ',' << r.seed << ',' << r.mc << ',' << r.std_error << ',' << r.lower << ','
        << r.upper << ',' << r.lambda_min << ',' << r.lambda_max << '\n';
  }
  out.flags(flags);
  out.precision(precision);
}

}  // namespace voi
