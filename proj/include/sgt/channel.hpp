#pragma once

#include <cstdint>
#include <span>
#include <string>

#include "sgt/bits.hpp"
#include "sgt/combin.hpp"

namespace sgt {

// Pool-test results Y^T.
using OutcomeVector = BitVector;

// The eavesdropper's view: per test either the true outcome or an erasure.
struct EveView {
  BitVector values;  // outcome bits, meaningful where kept
  BitVector kept;    // 1 = observed, 0 = erased
  std::size_t kept_count = 0;

  std::size_t size() const { return kept.size(); }

  // 0, 1, or 2 for '?'. Erasures serialize as symbol value 2.
  int symbol(std::size_t t) const { return kept.get(t) ? int(values.get(t)) : 2; }

  std::string to_string() const;                    // over {0,1,?}
  static EveView from_string(std::string_view s);   // inverse
};

// Bit t of the result is the OR over the defective rows at column t.
OutcomeVector run_tests(const BitMatrix& design, std::span<const uint32_t> members);
OutcomeVector run_tests(const BitMatrix& design, const DefectiveSet& defectives);

// Keep each position independently with probability delta; deterministic in seed.
EveView eavesdrop(const OutcomeVector& y, double delta, uint64_t seed);

}  // namespace sgt
