#pragma once

#include <cstdint>
#include <vector>

namespace semnet {

// Stateless counter-based randomness: every draw is a pure function of a
// key tuple, so parallel and serial evaluation orders agree bit for bit.

inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t hash_key(std::uint64_t a, std::uint64_t b) {
  return mix64(mix64(a) ^ b);
}

inline std::uint64_t hash_key(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  return mix64(hash_key(a, b) ^ c);
}

inline std::uint64_t hash_key(std::uint64_t a, std::uint64_t b, std::uint64_t c,
                              std::uint64_t d) {
  return mix64(hash_key(a, b, c) ^ d);
}

// Uniform in [0, 1) with 53 random bits.
inline double to_unit(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

inline double uniform01(std::uint64_t a, std::uint64_t b, std::uint64_t c,
                        std::uint64_t d) {
  return to_unit(hash_key(a, b, c, d));
}

// Sequential stream over a fixed key; used where a draw count rather than a
// natural index tuple identifies the draw (shuffles, synthetic data).
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream)
      : key_(hash_key(seed, stream)) {}

  std::uint64_t next_u64() { return hash_key(key_, counter_++); }

  double uniform01() { return to_unit(next_u64()); }

  // Uniform integer in [0, n); n >= 1.
  std::uint64_t below(std::uint64_t n) {
    return static_cast<std::uint64_t>(uniform01() * static_cast<double>(n)) % n;
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace semnet
