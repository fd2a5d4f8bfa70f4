#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace sealev {

// Deterministic seeded randomness with a fixed cross-platform algorithm.
// std::uniform_int_distribution is implementation-defined, so everything that
// feeds replayable artifacts (probe placement, sim answers) goes through
// these helpers instead.

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed = 0xcbf29ce484222325ULL) {
  std::uint64_t h = seed;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Mixes an arbitrary list of parts (numbers, strings) into one 64-bit seed.
class SeedMixer {
 public:
  explicit SeedMixer(std::uint64_t root) : state_(root) { next(); }

  SeedMixer& mix(std::uint64_t v) {
    state_ ^= v + 0x9e3779b97f4a7c15ULL + (state_ << 6) + (state_ >> 2);
    next();
    return *this;
  }

  SeedMixer& mix(std::string_view s) { return mix(fnv1a64(s)); }

  std::uint64_t value() const { return state_; }

 private:
  void next() { std::uint64_t s = state_; state_ = splitmix64(s); }
  std::uint64_t state_;
};

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() { return splitmix64(state_); }

  // Unbiased-enough bounded draw for desk-scale simulation (modulo bias is
  // negligible for bounds << 2^64).
  std::uint64_t below(std::uint64_t bound) { return bound == 0 ? 0 : next() % bound; }

  // Uniform in [0, 1).
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  bool chance(double p) { return unit() < p; }

  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::uint64_t state_;
};

}  // namespace sealev
