#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sgt/rng.hpp"

namespace sgt {

// log2 of C(n, k) via lgamma; -inf for k out of range.
double log2_binomial(uint64_t n, uint64_t k);

// Exact C(n, k); throws std::overflow_error if it does not fit in uint64_t.
uint64_t binomial_exact(uint64_t n, uint64_t k);

// min(C(n, k), sat) without overflow.
uint64_t binomial_capped(uint64_t n, uint64_t k, uint64_t sat);

// min(a * b, sat) without overflow.
uint64_t sat_mul(uint64_t a, uint64_t b, uint64_t sat);

// min(C(n, k) * m^k, sat): the ML/posterior enumeration size.
uint64_t candidate_count_capped(uint64_t n, uint64_t k, uint64_t m, uint64_t sat);

// Colexicographic rank of a strictly increasing 0-based index tuple:
// rank = sum_j C(members[j], j+1). Throws std::overflow_error if > uint64.
uint64_t colex_rank(std::span<const uint32_t> sorted_members);

// Inverse of colex_rank for k-subsets of [0, n). Throws std::invalid_argument
// if rank >= C(n, k).
std::vector<uint32_t> colex_unrank(uint64_t rank, uint32_t k, uint32_t n);

// Advance a sorted k-subset of [0, n) to its colex successor (rank + 1).
// Returns false when the input is the last subset.
bool next_subset_colex(std::vector<uint32_t>& members, uint32_t n);

// Uniform k-subset of [0, n) by Floyd's algorithm; sorted ascending.
std::vector<uint32_t> sample_subset(Rng& rng, uint32_t n, uint32_t k);

// The set of defective items: sorted members plus the colex rank that serves
// as the message index.
struct DefectiveSet {
  std::vector<uint32_t> members;
  uint64_t index_w = 0;

  static DefectiveSet from_members(std::vector<uint32_t> members);
  static DefectiveSet from_rank(uint64_t rank, uint32_t k, uint32_t n);
};

}  // namespace sgt
