#pragma once

#include <cstdint>
#include <span>

namespace voi {

/// SplitMix64 finalizer. Used to derive independent stream keys.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Combines a parent seed with a child index into a new seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept;

/// Small counter-keyed generator (xoshiro256**). Every stream is addressed by
/// (seed, stream index), so a sample's value never depends on how the work
/// was split into chunks or threads.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t stream_index) noexcept;

  std::uint64_t next_u64() noexcept;
  /// Uniform on the open interval (0, 1).
  double uniform() noexcept;
  double uniform(double lo, double hi) noexcept;
  /// Standard normal via Box-Muller; the second variate of each pair is cached.
  double normal() noexcept;

 private:
  std::uint64_t s_[4];
  double cached_ = 0.0;
  bool has_cached_ = false;
};

/// Fills `out` with standard normals from stream (seed, stream_index).
void fill_standard_normal(std::uint64_t seed, std::uint64_t stream_index, std::span<double> out) noexcept;

}  // namespace voi
