#pragma once

#include <array>
#include <concepts>
#include <cstddef>
#include <cstdint>

namespace dpboot {

/// Anything that hands out uniform deviates on the open interval (0, 1).
/// Samplers are written against this so tests can drive them with
/// scripted deviates.
template <typename T>
concept UniformSource = requires(T& src) {
  { src.uniform() } -> std::convertible_to<double>;
};

/// Philox4x32-10 block function (Salmon et al., Random123).
/// Maps a 128-bit counter and a 64-bit key to 128 pseudo-random bits.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                            std::array<std::uint32_t, 2> key) noexcept;

/// SplitMix64 finalizer. Used to derive child seeds from a master seed.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Derives an independent 64-bit seed from (master, tag).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t tag) noexcept;

/// Counter-based random stream.
///
/// The key is the master seed and the upper half of the counter is the
/// stream id, so the output sequence is a pure function of
/// (master_seed, stream_id). Two streams never share a counter block
/// unless both ids match. One instance must not be shared across threads;
/// derive one stream per task instead.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t stream_id) noexcept;

  std::uint64_t master_seed() const noexcept { return master_seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }

  /// Next 64 raw bits.
  std::uint64_t next_u64() noexcept;

  /// Uniform on (0, 1), 53-bit resolution, never exactly 0 or 1.
  double uniform() noexcept;

 private:
  void refill() noexcept;

  std::uint64_t master_seed_;
  std::uint64_t stream_id_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int cursor_ = 4;  // in 32-bit words; 4 means empty
};

static_assert(UniformSource<RngStream>);

/// Uniform index in [0, n) from one deviate. Requires n > 0.
template <UniformSource Source>
std::size_t uniform_index(Source& src, std::size_t n) {
  const auto i = static_cast<std::size_t>(src.uniform() * static_cast<double>(n));
  return i < n ? i : n - 1;
}

}  // namespace dpboot
