#pragma once

#include <cstdint>
#include <vector>

namespace modwave {

// Counter-based generator. Output i of a stream with key k is mix64(k + i * kGamma),
// i.e. SplitMix64 evaluated at an explicit counter, so any draw is addressable and two
// streams with different keys never share state.
//
// Stream splitting: a trial seed s is expanded into independent keys with
// stream_seed(s, id) = mix64(s ^ mix64(id * kGamma + kStreamSalt)). Each source of
// randomness in a trial (subspace, waveforms, noise, frequency draw) owns one id.

enum class Stream : std::uint64_t {
  Subspace = 1,
  Waveform = 2,
  Noise = 3,
  Frequency = 4,
};

std::uint64_t mix64(std::uint64_t x) noexcept;
std::uint64_t stream_seed(std::uint64_t seed, Stream id) noexcept;
/// Order-sensitive 64-bit combination, used for per-trial seeds.
std::uint64_t hash_combine(std::uint64_t a, std::uint64_t b) noexcept;

class CounterRng {
 public:
  explicit CounterRng(std::uint64_t key) noexcept : key_(key) {}

  std::uint64_t next_u64() noexcept;
  /// Uniform on [0,1) with 53 random bits.
  double uniform() noexcept;
  /// Uniform on (0,1], never zero (safe for log).
  double uniform_open0() noexcept;
  /// Standard normal via Box-Muller; the second variate is cached.
  double normal() noexcept;
  /// Unbiased integer in [0, bound).
  std::uint64_t below(std::uint64_t bound) noexcept;
  bool coin() noexcept { return (next_u64() >> 63) != 0; }

  std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double cached_normal_ = 0.0;
  bool has_cached_ = false;
};

/// k distinct indices from [0, n) in draw order (partial Fisher-Yates).
std::vector<std::size_t> sample_without_replacement(CounterRng& rng, std::size_t n, std::size_t k);

}  // namespace modwave
