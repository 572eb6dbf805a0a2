#pragma once

#include <cstdint>
#include <cmath>
#include <initializer_list>

namespace qcs {

// splitmix64 finalizer; bijective on 64-bit words.
inline constexpr uint64_t mix64(uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Folds a word into a running stream key. Used to derive independent
// substreams from (master_seed, tag, index, ...) tuples; every consumer of
// randomness in the library keys its generator through this.
inline constexpr uint64_t mix_key(uint64_t h, uint64_t w) {
  return mix64(h + 0x9E3779B97F4A7C15ull * (w + 0x632BE59BD9B4E019ull));
}

inline constexpr uint64_t mix_key(uint64_t h, std::initializer_list<uint64_t> words) {
  for (uint64_t w : words) h = mix_key(h, w);
  return h;
}

// xoshiro256++ with splitmix64 state expansion. Deterministic for a given
// key on every platform; streams with distinct keys are independent for all
// practical purposes.
class Rng {
 public:
  explicit Rng(uint64_t key) {
    uint64_t sm = key;
    for (auto& w : state_) {
      sm += 0x9E3779B97F4A7C15ull;
      w = mix64(sm);
    }
  }

  uint64_t next_u64() {
    const uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform on [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform on (0, 1]; safe as a log() argument.
  double uniform_pos() { return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53; }

  // Standard normal via Box-Muller; second draw of each pair is cached.
  double gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = uniform_pos();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

  // Unbiased integer in [0, n) via rejection.
  uint64_t below(uint64_t n) {
    const uint64_t threshold = (0 - n) % n;
    for (;;) {
      const uint64_t r = next_u64();
      if (r >= threshold) return r % n;
    }
  }

 private:
  static constexpr uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  uint64_t state_[4];
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace qcs
