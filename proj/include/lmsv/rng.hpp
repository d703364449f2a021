#pragma once

// Counter-based pseudo-random numbers: Philox4x32-10.
//
// Stream layout (documented contract, stable across releases):
//   key     = (master_seed lo32, master_seed hi32)
//   counter = (block lo32, block hi32, stream_id lo32, stream_id hi32)
// so one master seed supports 2^64 independent streams of 2^64 blocks
// (4 x u32 per block).  Monte Carlo code derives stream ids as
//   stream_id = role << 56 | param_index << 32 | replication
// giving every (role, parameter, replication) triple its own stream;
// replications are therefore reproducible regardless of scheduling.

#include <cmath>
#include <cstdint>
#include <numbers>

namespace lmsv {

struct PhiloxBlock {
  std::uint32_t v[4];
};

class Philox4x32 {
 public:
  Philox4x32(std::uint64_t key, std::uint64_t counter_hi)
      : key0_(static_cast<std::uint32_t>(key)),
        key1_(static_cast<std::uint32_t>(key >> 32)),
        ctr2_(static_cast<std::uint32_t>(counter_hi)),
        ctr3_(static_cast<std::uint32_t>(counter_hi >> 32)) {}

  PhiloxBlock block(std::uint64_t index) const {
    std::uint32_t c0 = static_cast<std::uint32_t>(index);
    std::uint32_t c1 = static_cast<std::uint32_t>(index >> 32);
    std::uint32_t c2 = ctr2_, c3 = ctr3_;
    std::uint32_t k0 = key0_, k1 = key1_;
    for (int round = 0; round < 10; ++round) {
      const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * c0;
      const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * c2;
      const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
      const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
      const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
      const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
      const std::uint32_t n0 = hi1 ^ c1 ^ k0;
      const std::uint32_t n1 = lo1;
      const std::uint32_t n2 = hi0 ^ c3 ^ k1;
      const std::uint32_t n3 = lo0;
      c0 = n0;
      c1 = n1;
      c2 = n2;
      c3 = n3;
      k0 += kWeyl0;
      k1 += kWeyl1;
    }
    return PhiloxBlock{{c0, c1, c2, c3}};
  }

 private:
  static constexpr std::uint32_t kMul0 = 0xD2511F53u;
  static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

  std::uint32_t key0_, key1_, ctr2_, ctr3_;
};

// A buffered view over one Philox stream with uniform and normal draws.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t stream_id)
      : gen_(master_seed, stream_id), master_seed_(master_seed), stream_id_(stream_id) {}

  std::uint64_t master_seed() const { return master_seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  std::uint32_t next_u32() {
    if (pos_ == 4) {
      buf_ = gen_.block(block_index_++);
      pos_ = 0;
    }
    return buf_.v[pos_++];
  }

  std::uint64_t next_u64() {
    const std::uint64_t lo = next_u32();
    const std::uint64_t hi = next_u32();
    return lo | (hi << 32);
  }

  // Uniform on the open interval (0,1): 53-bit mantissa, offset by 2^-54
  // so inverse-transform sampling never sees 0 or 1.
  double uniform01() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller (pairs cached).
  double normal() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    const double u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    cached_ = r * std::sin(a);
    have_cached_ = true;
    return r * std::cos(a);
  }

 private:
  Philox4x32 gen_;
  std::uint64_t master_seed_;
  std::uint64_t stream_id_;
  std::uint64_t block_index_ = 0;
  PhiloxBlock buf_{};
  int pos_ = 4;
  double cached_ = 0.0;
  bool have_cached_ = false;
};

enum class StreamRole : std::uint64_t {
  gaussian_path = 1,
  noise = 2,
  aux = 3,
};

inline std::uint64_t make_stream_id(StreamRole role, std::uint64_t param_index,
                                    std::uint64_t replication) {
  return (static_cast<std::uint64_t>(role) << 56) | ((param_index & 0xFFFFFFu) << 32) |
         (replication & 0xFFFFFFFFu);
}

}  // namespace lmsv
