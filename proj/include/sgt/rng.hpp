#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace sgt {

// SplitMix64 finalizer.
constexpr uint64_t mix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Stable seed for (master seed, coordinates...). Every trial/stream gets its
// own generator derived this way, so results never depend on scheduling.
uint64_t derive_seed(uint64_t master, std::initializer_list<uint64_t> parts);

// mt19937_64 engine with pinned draw algorithms. The standard distributions
// are implementation-defined, so Bernoulli and bounded draws are done by hand
// to keep streams bit-identical across platforms.
class Rng {
 public:
  explicit Rng(uint64_t seed) : eng_(seed) {}

  uint64_t next_u64() { return eng_(); }

  // P(true) = round(p * 2^53) / 2^53.
  bool bernoulli(double p) { return (next_u64() >> 11) < threshold53(p); }

  // Unbiased integer in [0, bound) by rejection; bound >= 1.
  uint64_t uniform_below(uint64_t bound);

  static uint64_t threshold53(double p);

 private:
  std::mt19937_64 eng_;
};

}  // namespace sgt
