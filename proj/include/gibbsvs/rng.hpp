#pragma once

// Counter-based random numbers (Philox4x32-10, Salmon et al. 2011).
//
// A generator is fully determined by (seed, stream, substream). The sampler
// derives the stream from (chain, iteration, step) and uses the observation
// index as substream, so per-observation draws come out the same whether
// they are produced sequentially or by an OpenMP team.

#include <array>
#include <cstdint>
#include <limits>
#include <random>

namespace gibbsvs {

class Philox4x32 {
 public:
  using result_type = std::uint64_t;
  using Block = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  Philox4x32(std::uint64_t seed, std::uint64_t stream, std::uint32_t substream = 0);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  /// The raw bijection, exposed for known-answer tests.
  static Block bijection(Block counter, Key key);

 private:
  void refill();

  Key key_{};
  Block counter_{};
  Block buffer_{};
  int used_ = 4;
};

/// Tags that keep the per-step streams of one iteration apart.
enum class StreamTag : std::uint64_t {
  init = 1,
  latent = 2,
  sign = 3,
  indicator = 4,
  coefficients = 5,
  scan_order = 6,
  metropolis = 7,
  evaluation = 8,
  generator = 9,
  prior = 10,
};

/// 64-bit stream id from (chain, iteration, tag). Iterations must be < 2^40.
constexpr std::uint64_t stream_id(std::uint32_t chain, std::uint64_t iteration, StreamTag tag) {
  return (static_cast<std::uint64_t>(chain & 0xFFFFu) << 48) ^ ((iteration & 0xFFFFFFFFFFull) << 8) ^
         static_cast<std::uint64_t>(tag);
}

/// Philox engine plus the handful of variates the library needs.
class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t stream, std::uint32_t substream = 0)
      : engine_(seed, stream, substream) {}

  std::uint64_t bits() { return engine_(); }
  /// Uniform on the open interval (0, 1).
  double uniform() { return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53; }
  double normal() { return normal_(engine_); }
  bool bernoulli(double p) { return uniform() < p; }
  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

  Philox4x32& engine() { return engine_; }

 private:
  Philox4x32 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace gibbsvs
