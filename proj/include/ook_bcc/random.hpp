#pragma once

// Counter-based random streams.
//
// Every Monte-Carlo work item owns a PhiloxStream addressed by
// (root seed, substream id). The generator state is just a 128-bit counter
// and a 64-bit key, so any substream can be constructed directly without
// touching the others. That is what makes the results independent of the
// worker count and of the execution order.

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

namespace ook_bcc {

// Philox4x32-10 bijection (Salmon et al., SC'11).
class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static constexpr Counter apply(Counter ctr, Key key) noexcept {
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        key[0] += kWeyl0;
        key[1] += kWeyl1;
      }
      const std::uint64_t p0 = std::uint64_t{kMul0} * ctr[0];
      const std::uint64_t p1 = std::uint64_t{kMul1} * ctr[2];
      const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
      const auto lo0 = static_cast<std::uint32_t>(p0);
      const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
      const auto lo1 = static_cast<std::uint32_t>(p1);
      ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }
    return ctr;
  }

 private:
  static constexpr std::uint32_t kMul0 = 0xD2511F53u;
  static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
};

// 64-bit UniformRandomBitGenerator over one Philox substream.
// Counter words 0-1 hold the block position, words 2-3 the substream id.
class PhiloxStream {
 public:
  using result_type = std::uint64_t;

  constexpr PhiloxStream(std::uint64_t seed, std::uint64_t substream) noexcept
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        substream_(substream) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  constexpr result_type operator()() noexcept {
    if (lane_ == 2) {
      refill();
    }
    return buffer_[lane_++];
  }

  constexpr std::uint64_t substream() const noexcept { return substream_; }

 private:
  constexpr void refill() noexcept {
    const Philox4x32::Counter ctr{static_cast<std::uint32_t>(position_),
                                  static_cast<std::uint32_t>(position_ >> 32),
                                  static_cast<std::uint32_t>(substream_),
                                  static_cast<std::uint32_t>(substream_ >> 32)};
    const auto out = Philox4x32::apply(ctr, key_);
    buffer_[0] = (std::uint64_t{out[1]} << 32) | out[0];
    buffer_[1] = (std::uint64_t{out[3]} << 32) | out[2];
    ++position_;
    lane_ = 0;
  }

  Philox4x32::Key key_;
  std::uint64_t substream_;
  std::uint64_t position_ = 0;
  std::array<std::uint64_t, 2> buffer_{};
  int lane_ = 2;
};

// Uniform on the open interval (0, 1) with 53 random bits.
template <class Engine>
double uniform_open01(Engine& engine) {
  return (static_cast<double>(engine() >> 11) + 0.5) * 0x1p-53;
}

// Box-Muller standard normal source. Keeps the second variate of each pair,
// so the stream consumption is fixed at one engine call per output.
class StandardNormal {
 public:
  template <class Engine>
  double operator()(Engine& engine) {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double radius = std::sqrt(-2.0 * std::log(uniform_open01(engine)));
    const double angle = 2.0 * std::numbers::pi * uniform_open01(engine);
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

 private:
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace ook_bcc
