#pragma once

#include <cstdint>
#include <string_view>

namespace relaysim {

/// Counter-based pseudo-random stream. A stream is fully determined by
/// (seed, label); draws are stateless hashes of a running counter, so
/// sub-streams never perturb each other no matter how many values any of
/// them consumes.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::string_view label)
      : key_(derive_key(seed, label)) {}

  std::uint64_t next_u64() {
    return finalize(key_ + (++counter_) * 0x9e3779b97f4a7c15ULL);
  }

  // [0, 1), 53-bit resolution
  double next_double() { return double(next_u64() >> 11) * 0x1.0p-53; }

  double next_uniform(double lo, double hi) {
    return lo + (hi - lo) * next_double();
  }

  // integer in [0, n); n == 0 yields 0
  std::uint64_t next_below(std::uint64_t n) {
    return n == 0 ? 0 : next_u64() % n;
  }

  std::uint64_t key() const { return key_; }

 private:
  // splitmix64 finalizer
  static std::uint64_t finalize(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  static std::uint64_t derive_key(std::uint64_t seed, std::string_view label) {
    // FNV-1a over the label, folded into the seed
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : label) {
      h = (h ^ c) * 0x100000001b3ULL;
    }
    return finalize(finalize(seed) ^ h);
  }

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace relaysim
