#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace btf {

/// Philox4x32-10 counter-based generator.
///
/// A generator is identified by (seed, stream). The seed is the 64-bit
/// Philox key; the stream occupies the upper half of the 128-bit counter and
/// the lower half counts blocks, so distinct streams never overlap. The same
/// (seed, stream) always yields the same variate sequence.
///
/// Single-owner: hand each concurrent task its own instance via split() or
/// fork().
class Rng {
public:
  using result_type = std::uint64_t;
  using Block = std::array<std::uint32_t, 4>;

  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() { return next_u64(); }
  std::uint64_t next_u64();

  /// Uniform double in the open interval (0, 1) with 53 random bits.
  double uniform();

  /// Independent child keyed by `id`; does not advance this generator.
  Rng fork(std::uint64_t id) const;

  /// Independent child; advances this generator by one draw.
  Rng split();

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

  /// Raw block function, exposed for known-answer tests.
  static Block philox(Block counter, std::array<std::uint32_t, 2> key);

private:
  void refill();

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  Block buffer_{};
  int used_ = 4;
};

} // namespace btf
