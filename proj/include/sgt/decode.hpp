#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "sgt/channel.hpp"
#include "sgt/design.hpp"

namespace sgt {

inline constexpr uint64_t kDefaultEnumerationCap = 10'000'000;

// true iff row has no 1 where y has 0 (row <= y bitwise): the only rows that
// can belong to a defective item.
bool row_consistent(const BitVector& row, const OutcomeVector& y);

struct MlResult {
  std::optional<DefectiveSet> decoded;  // lowest-ranked consistent bin set
  uint64_t consistent_count = 0;        // (bin set, row combination) candidates
  uint64_t consistent_sets = 0;         // distinct bin sets among them
  bool unique = false;                  // exactly one bin set is consistent
};

// Exhaustive ML over bin sets and row combinations. In the noiseless model a
// candidate is maximal iff the OR of its rows equals y exactly. Throws
// InstanceTooLarge when C(N,K)*M^K exceeds cap.
MlResult ml_decode(const Codebook& codebook, const OutcomeVector& y,
                   uint64_t cap = kDefaultEnumerationCap);

struct DndResult {
  std::vector<uint32_t> possibly_defective;        // sorted
  std::vector<uint32_t> definitely_non_defective;  // sorted; partitions [0, N)
};

// Definite Non-Defective rule: an item stays possibly defective iff at least
// one row in its bin is consistent with y. O(N*M*T) bit operations.
DndResult dnd_decode(const Codebook& codebook, const OutcomeVector& y);

}  // namespace sgt
