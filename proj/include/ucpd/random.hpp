#pragma once

#include <array>
#include <cstdint>

namespace ucpd {

/// Philox4x32-10 block function (Salmon et al., Random123).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/// Standard normal quantile, Wichura's AS241 (PPND16), ~1e-16 relative.
double normal_quantile(double p);

/// Stream tags keep independent uses of one (seed, index) pair apart.
enum class StreamTag : std::uint32_t {
  LimitPath = 0,
  SegmentBefore = 1,
  SegmentAfter = 2,
  Probe = 3,
};

/// Counter-based random stream. The key is the master seed; the counter holds
/// (block, tag, index). Two streams with different (index, tag) never share a
/// block, so per-replication streams can be consumed in any order or on any
/// thread with identical results.
class CounterStream {
 public:
  CounterStream(std::uint64_t master_seed, std::uint64_t index, StreamTag tag = StreamTag::LimitPath);

  std::uint32_t next_u32();
  /// Uniform on the open interval (0, 1) with 53 random bits.
  double uniform();
  double normal() { return normal_quantile(uniform()); }

 private:
  void refill();

  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 4> counter_;
  std::array<std::uint32_t, 4> buffer_{};
  unsigned used_ = 4;
};

}  // namespace ucpd
