#include "sgt/rng.hpp"

#include <stdexcept>

namespace sgt {

uint64_t derive_seed(uint64_t master, std::initializer_list<uint64_t> parts) {
  uint64_t s = mix64(master);
  for (uint64_t p : parts) s = mix64(s ^ p);
  return s;
}

uint64_t Rng::threshold53(double p) {
  if (p <= 0.0) return 0;
  if (p >= 1.0) return 1ull << 53;
  return static_cast<uint64_t>(p * 9007199254740992.0 + 0.5);  // p * 2^53
}

uint64_t Rng::uniform_below(uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("uniform_below: bound must be positive");
  if (bound == 1) return 0;
  const uint64_t min = (0 - bound) % bound;  // 2^64 mod bound
  uint64_t r = next_u64();
  while (r < min) r = next_u64();
  return r % bound;
}

}  // namespace sgt
