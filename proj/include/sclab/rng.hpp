#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace sclab {

/// Philox4x32-10 block cipher: maps a 128-bit counter and 64-bit key to a
/// 128-bit output block through ten multiply-xor rounds.
struct Philox4x32 {
  using Block = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static constexpr std::uint32_t kMult0 = 0xD2511F53u;
  static constexpr std::uint32_t kMult1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

  static Block round(const Block& ctr, const Key& key) {
    const std::uint64_t p0 = std::uint64_t{kMult0} * ctr[0];
    const std::uint64_t p1 = std::uint64_t{kMult1} * ctr[2];
    return {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0],
            static_cast<std::uint32_t>(p1),
            static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1],
            static_cast<std::uint32_t>(p0)};
  }

  static Block block(Block ctr, Key key) {
    for (int r = 0; r < 9; ++r) {
      ctr = round(ctr, key);
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    return round(ctr, key);
  }
};

/// Derive an unrelated seed from a master seed and a purpose tag
/// (splitmix64 finalizer). Used to give each sub-experiment of a run its
/// own stream space.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t tag) {
  std::uint64_t z = master + tag * 0x9E3779B97F4A7C15ull + 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/// Counter-based random stream. The output sequence is a pure function of
/// (master_seed, stream_index): the stream index occupies counter words 2-3
/// and the block counter words 0-1, so distinct streams never overlap and
/// results do not depend on scheduling or worker count.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t stream_index)
      : key_{static_cast<std::uint32_t>(master_seed),
             static_cast<std::uint32_t>(master_seed >> 32)},
        stream_lo_(static_cast<std::uint32_t>(stream_index)),
        stream_hi_(static_cast<std::uint32_t>(stream_index >> 32)) {}

  std::uint32_t next_u32() {
    if (pos_ == 4) refill();
    return buf_[pos_++];
  }

  std::uint64_t next_u64() {
    const std::uint64_t lo = next_u32();
    const std::uint64_t hi = next_u32();
    return (hi << 32) | lo;
  }

  /// Uniform draw on the open interval (0,1); never returns an endpoint, so
  /// log() and 1-u are always finite and nonzero.
  double uniform() {
    return (static_cast<double>(next_u64() >> 12) + 0.5) * 0x1.0p-52;
  }

  /// Standard normal draw (Box-Muller; consumes two uniforms per pair).
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform()));
    const double angle = 2.0 * M_PI * uniform();
    spare_ = r * std::sin(angle);
    have_spare_ = true;
    return r * std::cos(angle);
  }

  /// Exponential draw with the given rate; strictly positive.
  double exponential(double rate) { return -std::log(uniform()) / rate; }

 private:
  void refill() {
    const Philox4x32::Block ctr = {static_cast<std::uint32_t>(block_),
                                   static_cast<std::uint32_t>(block_ >> 32),
                                   stream_lo_, stream_hi_};
    buf_ = Philox4x32::block(ctr, key_);
    ++block_;
    pos_ = 0;
  }

  Philox4x32::Key key_;
  std::uint32_t stream_lo_, stream_hi_;
  std::uint64_t block_ = 0;
  Philox4x32::Block buf_{};
  int pos_ = 4;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace sclab
