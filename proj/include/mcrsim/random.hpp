#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace mcrsim {

// Philox4x32-10 counter-based generator. A stream is fully determined by
// (seed, substream); draws within a stream advance a 64-bit block counter.
// Satisfies UniformRandomBitGenerator with 64-bit output.
class Philox4x32 {
 public:
  using result_type = std::uint64_t;

  Philox4x32(std::uint64_t seed, std::uint64_t substream)
      : key_{static_cast<std::uint32_t>(seed),
             static_cast<std::uint32_t>(seed >> 32)},
        substream_(substream) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() {
    if (cursor_ == 2) refill();
    return buffer_[cursor_++];
  }

  // Uniform on (0, 1): never returns 0 or 1.
  double uniform() {
    return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
  }

  static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> ctr,
                                            std::array<std::uint32_t, 2> key) {
    constexpr std::uint32_t kM0 = 0xD2511F53u, kM1 = 0xCD9E8D57u;
    constexpr std::uint32_t kW0 = 0x9E3779B9u, kW1 = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round) {
      const std::uint64_t p0 = static_cast<std::uint64_t>(kM0) * ctr[0];
      const std::uint64_t p1 = static_cast<std::uint64_t>(kM1) * ctr[2];
      ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0],
             static_cast<std::uint32_t>(p1),
             static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1],
             static_cast<std::uint32_t>(p0)};
      key[0] += kW0;
      key[1] += kW1;
    }
    return ctr;
  }

 private:
  void refill() {
    const auto out = block({static_cast<std::uint32_t>(counter_),
                            static_cast<std::uint32_t>(counter_ >> 32),
                            static_cast<std::uint32_t>(substream_),
                            static_cast<std::uint32_t>(substream_ >> 32)},
                           key_);
    ++counter_;
    buffer_[0] = (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
    buffer_[1] = (static_cast<std::uint64_t>(out[2]) << 32) | out[3];
    cursor_ = 0;
  }

  std::array<std::uint32_t, 2> key_;
  std::uint64_t substream_;
  std::uint64_t counter_ = 0;
  std::array<std::uint64_t, 2> buffer_{};
  int cursor_ = 2;
};

}  // namespace mcrsim
