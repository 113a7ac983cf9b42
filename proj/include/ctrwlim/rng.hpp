#pragma once

#include <array>
#include <cstdint>

namespace ctrwlim {

/// Identifies one independent random stream: one per sample path.
struct SeedSpec {
  std::uint64_t master_seed = 0;
  std::uint64_t stream_id = 0;
};

/// Separate sub-streams inside one (master_seed, stream_id) pair, so a path can
/// extend one sequence (e.g. waiting times) without shifting another (jumps).
enum class Substream : std::uint64_t {
  generic = 0x67656e,
  jumps = 0x6a756d,
  waiting = 0x776169,
  subordinator = 0x737562,
  levy = 0x6c6576,
};

/// xoshiro256** keyed by (master_seed, stream_id, substream).
///
/// The state is derived by splitmix64-hashing the key, so any stream can be
/// created directly with no dependence on other streams. Conversions to
/// uniform/exponential/normal variates are implemented here rather than with
/// <random> distributions so the output is identical across standard libraries.
class Engine {
 public:
  Engine(SeedSpec seed, Substream sub);

  std::uint64_t next_u64() noexcept;

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept;
  /// Uniform on the open interval (0, 1).
  double uniform_open() noexcept;
  /// Standard exponential, mean 1.
  double exponential() noexcept;
  /// Standard normal via Box–Muller (the spare variate is cached).
  double normal() noexcept;

 private:
  std::array<std::uint64_t, 4> s_{};
  double spare_ = 0.0;
  bool has_spare_ = false;
};

std::uint64_t splitmix64(std::uint64_t& state) noexcept;

}  // namespace ctrwlim
