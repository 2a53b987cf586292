#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "voi/voi_estimator.hpp"

namespace voi {

struct SweepConfig {
  std::vector<Index> dims;
  SpectralBand band{1.0, 1.0};
  SetKind set_kind = SetKind::L2Ball;
  Index n_mc = 100000;
  std::uint64_t seed = 1;
  int replicates = 1;
  int threads = 1;
  int quadrature_nodes = 512;
  bool antithetic = false;

  /// dims strictly ascending and positive, replicates >= 1, n_mc >= 100,
  /// set kind L2 or Linf. Throws InvalidArgument.
  void validate() const;
};

struct SweepRecord {
  Index d = 0;
  int replicate = 0;
  std::uint64_t seed = 0;
  double mc = 0.0;
  double std_error = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  bool failed = false;
  std::string error;
};

/// Seed of cell (d, replicate); W is drawn from derive_seed(cell, 1) and the
/// Monte Carlo stream from derive_seed(cell, 2).
std::uint64_t cell_seed(std::uint64_t base, Index d, int replicate) noexcept;

/// One record per (d, replicate), ordered by d then replicate. Cells run in
/// parallel (cfg.threads) and a cell that throws is recorded as failed.
std::vector<SweepRecord> run_sweep(const SweepConfig& cfg);

enum class SweepField { Mc, Lower, Upper };
SweepField parse_sweep_field(std::string_view text);
std::string_view to_string(SweepField field) noexcept;

struct SlopeFit {
  double slope;
  double intercept;
  double r2;
  int points;
};

/// OLS of log(mean field per d) on log d over successful records.
/// Throws InsufficientData with fewer than 4 distinct d.
SlopeFit fit_loglog_slope(const std::vector<SweepRecord>& records, SweepField field);

/// Header d,replicate,seed,mc,stderr,lower,upper,lambda_min,lambda_max;
/// failed cells are omitted. Values use 17 significant digits.
void write_sweep_csv(std::ostream& out, const std::vector<SweepRecord>& records);

}  // namespace voi
