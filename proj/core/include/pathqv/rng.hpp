#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace pathqv {

/// Philox4x32-10 counter-based block function.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                        std::array<std::uint32_t, 2> key) noexcept;

/// Identifies independent random streams inside one replica.
enum class StreamId : std::uint32_t {
  Brownian = 1,
  Fbm = 2,
  FixedJumps = 3,
  Noise = 4,
  NoiseFbm = 5,
  Auxiliary = 6,
  CompoundPoisson = 100,  // + component index
};

/// (seed, replica) pair addressing one Monte Carlo sample.
struct StreamKey {
  std::uint64_t seed = 0;
  std::uint32_t replica = 0;
};

/// Uniform random bit generator over one Philox stream. The key is the seed;
/// the counter carries (block index, replica, stream id), so streams for
/// different replicas or components never overlap and can be drawn in any
/// order or in parallel.
class RngStream {
 public:
  using result_type = std::uint64_t;

  RngStream(StreamKey key, std::uint32_t stream) noexcept;
  RngStream(StreamKey key, StreamId stream) noexcept
      : RngStream(key, static_cast<std::uint32_t>(stream)) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept;
  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

 private:
  std::array<std::uint32_t, 2> key_;
  std::uint32_t replica_;
  std::uint32_t stream_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buf_{};
  int used_ = 4;
};

}  // namespace pathqv
