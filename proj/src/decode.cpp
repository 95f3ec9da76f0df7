#include "sgt/decode.hpp"

#include <stdexcept>

#include "sgt/errors.hpp"

namespace sgt {
namespace {

// Depth-first product over the surviving rows of the chosen bins, counting
// combinations whose OR equals y. Rows here are already covered by y, so
// equality only needs the ones of y to be hit.
struct ComboCounter {
  const Codebook& cb;
  const std::vector<std::vector<uint32_t>>& survivors;
  std::span<const uint64_t> target;
  std::vector<uint64_t> scratch;  // (k+1) stacked OR accumulators
  std::size_t wpr;

  ComboCounter(const Codebook& cb_, const std::vector<std::vector<uint32_t>>& surv,
               std::span<const uint64_t> y, std::size_t k)
      : cb(cb_), survivors(surv), target(y), scratch((k + 1) * cb_.words_per_row(), 0),
        wpr(cb_.words_per_row()) {}

  uint64_t count(std::span<const uint32_t> bins) {
    std::fill(scratch.begin(), scratch.begin() + static_cast<std::ptrdiff_t>(wpr), 0);
    return walk(bins, 0);
  }

 private:
  uint64_t walk(std::span<const uint32_t> bins, std::size_t depth) {
    const auto acc = std::span<const uint64_t>(scratch).subspan(depth * wpr, wpr);
    if (depth == bins.size()) return bitops::equal(acc, target) ? 1 : 0;
    auto next = std::span<uint64_t>(scratch).subspan((depth + 1) * wpr, wpr);
    uint64_t total = 0;
    for (uint32_t m : survivors[bins[depth]]) {
      auto row = cb.row(bins[depth], m);
      for (std::size_t i = 0; i < wpr; ++i) next[i] = acc[i] | row[i];
      total += walk(bins, depth + 1);
    }
    return total;
  }
};

}  // namespace

bool row_consistent(const BitVector& row, const OutcomeVector& y) {
  if (row.size() != y.size()) throw std::invalid_argument("row_consistent: length mismatch");
  return bitops::covered_by(row.words(), y.words());
}

MlResult ml_decode(const Codebook& codebook, const OutcomeVector& y, uint64_t cap) {
  const uint32_t n = codebook.params.n_items;
  const uint32_t k = codebook.params.n_defective;
  if (y.size() != codebook.params.n_tests)
    throw std::invalid_argument("ml_decode: outcome length mismatch");
  const uint64_t sat = cap == UINT64_MAX ? UINT64_MAX : cap + 1;
  if (candidate_count_capped(n, k, codebook.m, sat) > cap)
    throw InstanceTooLarge("ml_decode: C(N,K)*M^K exceeds the enumeration cap");

  // Any candidate containing a row not covered by y cannot OR to y, so the
  // enumeration can be restricted to the per-bin survivors.
  std::vector<std::vector<uint32_t>> survivors(n);
  std::vector<uint32_t> active;
  for (uint32_t j = 0; j < n; ++j) {
    for (uint64_t m = 0; m < codebook.m; ++m)
      if (bitops::covered_by(codebook.row(j, m), y.words()))
        survivors[j].push_back(static_cast<uint32_t>(m));
    if (!survivors[j].empty()) active.push_back(j);
  }

  MlResult result;
  if (active.size() < k) return result;

  ComboCounter counter(codebook, survivors, y.words(), k);
  uint64_t best_rank = 0;
  std::vector<uint32_t> best_members;

  // K-subsets of the active bins, via index positions into `active`.
  std::vector<uint32_t> pos(k);
  for (uint32_t i = 0; i < k; ++i) pos[i] = i;
  std::vector<uint32_t> bins(k);
  for (;;) {
    for (uint32_t i = 0; i < k; ++i) bins[i] = active[pos[i]];
    const uint64_t combos = counter.count(bins);
    if (combos > 0) {
      result.consistent_count += combos;
      result.consistent_sets += 1;
      const uint64_t rank = colex_rank(bins);
      if (result.consistent_sets == 1 || rank < best_rank) {
        best_rank = rank;
        best_members = bins;
      }
    }
    // next k-combination of [0, active.size())
    std::size_t i = k;
    while (i > 0 && pos[i - 1] == active.size() - k + (i - 1)) --i;
    if (i == 0) break;
    ++pos[i - 1];
    for (std::size_t j = i; j < k; ++j) pos[j] = pos[j - 1] + 1;
  }

  if (result.consistent_sets > 0) {
    result.unique = result.consistent_sets == 1;
    DefectiveSet s;
    s.members = std::move(best_members);
    s.index_w = best_rank;
    result.decoded = std::move(s);
  }
  return result;
}

DndResult dnd_decode(const Codebook& codebook, const OutcomeVector& y) {
  const uint32_t n = codebook.params.n_items;
  if (y.size() != codebook.params.n_tests)
    throw std::invalid_argument("dnd_decode: outcome length mismatch");
  DndResult r;
  for (uint32_t j = 0; j < n; ++j) {
    bool possible = false;
    for (uint64_t m = 0; m < codebook.m && !possible; ++m)
      possible = bitops::covered_by(codebook.row(j, m), y.words());
    (possible ? r.possibly_defective : r.definitely_non_defective).push_back(j);
  }
  return r;
}

}  // namespace sgt
