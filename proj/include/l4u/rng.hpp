#pragma once

#include <array>
#include <complex>
#include <cstdint>

namespace l4u {

/// Philox4x32-10 counter-based generator.
///
/// The 64-bit seed is the Philox key. The 128-bit counter is split into a
/// 64-bit stream id (upper half) and a 64-bit block position (lower half), so
/// every stream is an independent, randomly addressable sequence.
/// `substream(id)` derives a child stream id with SplitMix64; generators that
/// draw sample m from `root.substream(m)` are reproducible regardless of the
/// order (or thread) in which samples are produced.
///
/// Normals use Box-Muller on two fresh uniforms (no cached spare), so a draw
/// consumes a fixed number of words.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0) noexcept
      : seed_(seed), stream_(stream) {}

  CounterRng substream(std::uint64_t id) const noexcept;

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream() const noexcept { return stream_; }

  std::uint32_t next_u32() noexcept;
  std::uint64_t next_u64() noexcept;

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() noexcept;
  /// Uniform in (0, 1).
  double uniform_open() noexcept;
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }
  /// Uniform integer in [0, n); n must be positive.
  std::uint64_t uniform_int(std::uint64_t n) noexcept;
  double normal() noexcept;
  /// Circularly-symmetric complex Gaussian with E|z|^2 = variance.
  std::complex<double> complex_normal(double variance = 1.0) noexcept;

  /// Raw Philox4x32-10 block function, exposed for known-answer tests.
  static std::array<std::uint32_t, 4> philox(std::array<std::uint32_t, 4> counter,
                                             std::array<std::uint32_t, 2> key) noexcept;

 private:
  void refill() noexcept;

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int used_ = 4;
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

}  // namespace l4u
