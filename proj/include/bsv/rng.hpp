#pragma once
#include <array>
#include <cstdint>

namespace bsv {

// Philox4x32-10 counter-based generator. A stream is fixed by (key, stream id);
// draws advance the low counter words.
class Philox4x32 {
 public:
  using result_type = std::uint32_t;
  Philox4x32(std::uint64_t key, std::uint64_t stream = 0) {
    key_ = {std::uint32_t(key), std::uint32_t(key >> 32)};
    ctr_ = {0, 0, std::uint32_t(stream), std::uint32_t(stream >> 32)};
  }
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return 0xffffffffu; }

  result_type operator()() {
    if (pos_ == 4) {
      buf_ = block(ctr_, key_);
      if (++ctr_[0] == 0) ++ctr_[1];
      pos_ = 0;
    }
    return buf_[pos_++];
  }
  // Uniform double in [0,1) with 53 random bits.
  double uniform() {
    std::uint64_t hi = (*this)() >> 5, lo = (*this)() >> 6;
    return double(hi * 67108864ull + lo) * 0x1.0p-53;
  }

  static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> c, std::array<std::uint32_t, 2> k) {
    for (int r = 0; r < 10; ++r) {
      std::uint64_t p0 = std::uint64_t(0xD2511F53u) * c[0];
      std::uint64_t p1 = std::uint64_t(0xCD9E8D57u) * c[2];
      c = {std::uint32_t(p1 >> 32) ^ c[1] ^ k[0], std::uint32_t(p1), std::uint32_t(p0 >> 32) ^ c[3] ^ k[1],
           std::uint32_t(p0)};
      k[0] += 0x9E3779B9u;
      k[1] += 0xBB67AE85u;
    }
    return c;
  }

 private:
  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 4> ctr_;
  std::array<std::uint32_t, 4> buf_{};
  int pos_ = 4;
};

}  // namespace bsv
