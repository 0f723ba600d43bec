// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>

namespace jumpform {

// Philox 4x32-10 counter-based generator. Streams are addressed by
// (seed, stream): the seed is the key, the stream id occupies the upper
// counter words, and draws advance the lower 64-bit counter. Identical
// (seed, stream) pairs reproduce the same sequence regardless of how other
// streams are consumed, which is what makes path-parallel runs bit-stable.
class Philox4x32 {
 public:
  Philox4x32(uint64_t seed, uint64_t stream)
      : key0_(static_cast<uint32_t>(seed)), key1_(static_cast<uint32_t>(seed >> 32)),
        hi0_(static_cast<uint32_t>(stream)), hi1_(static_cast<uint32_t>(stream >> 32)) {}

  uint32_t next_u32() {
    if (pos_ == 4) {
      gen_block();
      pos_ = 0;
    }
    return buf_[pos_++];
  }

  uint64_t next_u64() {
    uint64_t lo = next_u32();
    return (static_cast<uint64_t>(next_u32()) << 32) | lo;
  }

  // uniform on (0,1): 53 random bits, offset away from 0
  double uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  double exponential() { return -std::log(uniform()); }

  double normal() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    double u1 = uniform(), u2 = uniform();
    double rho = std::sqrt(-2.0 * std::log(u1));
    cached_ = rho * std::sin(2.0 * M_PI * u2);
    have_cached_ = true;
    return rho * std::cos(2.0 * M_PI * u2);
  }

 private:
  static constexpr uint32_t kM0 = 0xD2511F53u, kM1 = 0xCD9E8D57u;
  static constexpr uint32_t kW0 = 0x9E3779B9u, kW1 = 0xBB67AE85u;

  static void mulhilo(uint32_t a, uint32_t b, uint32_t& lo, uint32_t& hi) {
    uint64_t p = static_cast<uint64_t>(a) * b;
    lo = static_cast<uint32_t>(p);
    hi = static_cast<uint32_t>(p >> 32);
  }

  void gen_block() {
    uint32_t c0 = static_cast<uint32_t>(ctr_);
    uint32_t c1 = static_cast<uint32_t>(ctr_ >> 32);
    uint32_t c2 = hi0_, c3 = hi1_;
    uint32_t k0 = key0_, k1 = key1_;
    for (int round = 0; round < 10; ++round) {
      uint32_t lo0, hi0, lo1, hi1;
      mulhilo(kM0, c0, lo0, hi0);
      mulhilo(kM1, c2, lo1, hi1);
      uint32_t n0 = hi1 ^ c1 ^ k0;
      uint32_t n1 = lo1;
      uint32_t n2 = hi0 ^ c3 ^ k1;
      uint32_t n3 = lo0;
      c0 = n0;
      c1 = n1;
      c2 = n2;
      c3 = n3;
      k0 += kW0;
      k1 += kW1;
    }
    buf_[0] = c0;
    buf_[1] = c1;
    buf_[2] = c2;
    buf_[3] = c3;
    ++ctr_;
  }

  uint32_t key0_, key1_;
  uint32_t hi0_, hi1_;
  uint64_t ctr_ = 0;
  uint32_t buf_[4] = {0, 0, 0, 0};
  int pos_ = 4;
  double cached_ = 0.0;
  bool have_cached_ = false;
};

}  // namespace jumpform
