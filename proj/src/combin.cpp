#include "sgt/combin.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace sgt {

double log2_binomial(uint64_t n, uint64_t k) {
  if (k > n) return -std::numeric_limits<double>::infinity();
  constexpr double kLn2 = 0.6931471805599453;
  return (std::lgamma(double(n) + 1.0) - std::lgamma(double(k) + 1.0) -
          std::lgamma(double(n - k) + 1.0)) /
         kLn2;
}

uint64_t binomial_exact(uint64_t n, uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 c = 1;
  for (uint64_t j = 1; j <= k; ++j) {
    c = c * (n - k + j) / j;  // exact at every step: product of j consecutive ints
    if (c > std::numeric_limits<uint64_t>::max())
      throw std::overflow_error("binomial_exact: value exceeds uint64");
  }
  return static_cast<uint64_t>(c);
}

uint64_t binomial_capped(uint64_t n, uint64_t k, uint64_t sat) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 c = 1;
  for (uint64_t j = 1; j <= k; ++j) {
    c = c * (n - k + j) / j;
    if (c >= sat) return sat;
  }
  return static_cast<uint64_t>(c);
}

uint64_t sat_mul(uint64_t a, uint64_t b, uint64_t sat) {
  unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
  return p >= sat ? sat : static_cast<uint64_t>(p);
}

uint64_t candidate_count_capped(uint64_t n, uint64_t k, uint64_t m, uint64_t sat) {
  uint64_t c = binomial_capped(n, k, sat);
  for (uint64_t j = 0; j < k && c < sat; ++j) c = sat_mul(c, m, sat);
  return c;
}

uint64_t colex_rank(std::span<const uint32_t> sorted_members) {
  unsigned __int128 r = 0;
  for (std::size_t j = 0; j < sorted_members.size(); ++j) {
    r += binomial_exact(sorted_members[j], static_cast<uint64_t>(j) + 1);
    if (r > std::numeric_limits<uint64_t>::max())
      throw std::overflow_error("colex_rank: rank exceeds uint64");
  }
  return static_cast<uint64_t>(r);
}

std::vector<uint32_t> colex_unrank(uint64_t rank, uint32_t k, uint32_t n) {
  if (binomial_capped(n, k, rank + 1) <= rank)
    throw std::invalid_argument("colex_unrank: rank out of range");
  std::vector<uint32_t> members(k);
  uint64_t r = rank;
  for (uint32_t j = k; j >= 1; --j) {
    // largest c with C(c, j) <= r
    uint32_t c = j - 1;  // C(j-1, j) = 0 <= r always
    for (uint32_t t = c + 1; t < n; ++t) {
      if (binomial_capped(t, j, r + 1) <= r)
        c = t;
      else
        break;
    }
    members[j - 1] = c;
    r -= binomial_exact(c, j);
  }
  return members;
}

bool next_subset_colex(std::vector<uint32_t>& members, uint32_t n) {
  const std::size_t k = members.size();
  for (std::size_t j = 0; j < k; ++j) {
    const uint32_t limit = (j + 1 < k) ? members[j + 1] : n;
    if (members[j] + 1 < limit) {
      ++members[j];
      for (std::size_t i = 0; i < j; ++i) members[i] = static_cast<uint32_t>(i);
      return true;
    }
  }
  return false;
}

std::vector<uint32_t> sample_subset(Rng& rng, uint32_t n, uint32_t k) {
  if (k > n) throw std::invalid_argument("sample_subset: k > n");
  std::vector<uint32_t> out;
  out.reserve(k);
  for (uint32_t j = n - k; j < n; ++j) {
    const auto t = static_cast<uint32_t>(rng.uniform_below(j + 1));
    if (std::find(out.begin(), out.end(), t) != out.end())
      out.push_back(j);
    else
      out.push_back(t);
  }
  std::sort(out.begin(), out.end());
  return out;
}

DefectiveSet DefectiveSet::from_members(std::vector<uint32_t> members) {
  std::sort(members.begin(), members.end());
  if (std::adjacent_find(members.begin(), members.end()) != members.end())
    throw std::invalid_argument("DefectiveSet: duplicate members");
  DefectiveSet s;
  s.index_w = colex_rank(members);
  s.members = std::move(members);
  return s;
}

DefectiveSet DefectiveSet::from_rank(uint64_t rank, uint32_t k, uint32_t n) {
  DefectiveSet s;
  s.members = colex_unrank(rank, k, n);
  s.index_w = rank;
  return s;
}

}  // namespace sgt
