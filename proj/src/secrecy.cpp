#include "sgt/secrecy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sgt/errors.hpp"
#include "sgt/parallel.hpp"
#include "sgt/rng.hpp"

namespace sgt {
namespace {

// Counts row combinations for one bin set whose OR agrees with z on the kept
// positions. Rows incompatible on their own (a 1 at a kept 0 of z) are
// filtered per bin beforehand; the DFS then only needs to check that every
// kept 1 of z gets covered.
struct MaskedComboCounter {
  const Codebook& cb;
  const std::vector<std::vector<uint32_t>>& compatible;
  std::span<const uint64_t> target;  // z values & kept
  std::span<const uint64_t> mask;    // kept
  std::vector<uint64_t> scratch;
  std::size_t wpr;

  MaskedComboCounter(const Codebook& cb_, const std::vector<std::vector<uint32_t>>& comp,
                     std::span<const uint64_t> target_, std::span<const uint64_t> mask_,
                     std::size_t k)
      : cb(cb_), compatible(comp), target(target_), mask(mask_),
        scratch((k + 1) * cb_.words_per_row(), 0), wpr(cb_.words_per_row()) {}

  uint64_t count(std::span<const uint32_t> bins) {
    std::fill(scratch.begin(), scratch.begin() + static_cast<std::ptrdiff_t>(wpr), 0);
    return walk(bins, 0);
  }

 private:
  uint64_t walk(std::span<const uint32_t> bins, std::size_t depth) {
    const auto acc = std::span<const uint64_t>(scratch).subspan(depth * wpr, wpr);
    if (depth == bins.size()) {
      for (std::size_t i = 0; i < wpr; ++i)
        if ((acc[i] & mask[i]) != target[i]) return 0;
      return 1;
    }
    auto next = std::span<uint64_t>(scratch).subspan((depth + 1) * wpr, wpr);
    uint64_t total = 0;
    for (uint32_t m : compatible[bins[depth]]) {
      auto row = cb.row(bins[depth], m);
      for (std::size_t i = 0; i < wpr; ++i) next[i] = acc[i] | row[i];
      total += walk(bins, depth + 1);
    }
    return total;
  }
};

double entropy_from_counts(const std::vector<uint64_t>& counts, uint64_t total) {
  // All-equal counts mean an exactly uniform posterior; computing log2 of the
  // support size directly keeps zero-leakage cases exact in floating point.
  const uint64_t first = counts.front();
  if (first != 0 &&
      std::all_of(counts.begin(), counts.end(), [&](uint64_t c) { return c == first; }))
    return std::log2(static_cast<double>(counts.size()));
  double acc = 0.0;
  for (uint64_t c : counts)
    if (c > 1) acc += static_cast<double>(c) * std::log2(static_cast<double>(c));
  return std::log2(static_cast<double>(total)) - acc / static_cast<double>(total);
}

}  // namespace

PosteriorOverW posterior_over_w(const Codebook& codebook, const EveView& z, uint64_t cap) {
  const uint32_t n = codebook.params.n_items;
  const uint32_t k = codebook.params.n_defective;
  if (z.size() != codebook.params.n_tests)
    throw std::invalid_argument("posterior_over_w: view length mismatch");
  const uint64_t sat = cap == UINT64_MAX ? UINT64_MAX : cap + 1;
  if (candidate_count_capped(n, k, codebook.m, sat) > cap)
    throw InstanceTooLarge("posterior_over_w: C(N,K)*M^K exceeds the enumeration cap");

  const std::size_t wpr = codebook.words_per_row();
  std::vector<uint64_t> target(wpr), mask(wpr);
  for (std::size_t i = 0; i < wpr; ++i) {
    mask[i] = z.kept.words()[i];
    target[i] = z.values.words()[i] & mask[i];
  }

  std::vector<std::vector<uint32_t>> compatible(n);
  for (uint32_t j = 0; j < n; ++j)
    for (uint64_t m = 0; m < codebook.m; ++m) {
      auto row = codebook.row(j, m);
      bool clashes = false;
      for (std::size_t i = 0; i < wpr && !clashes; ++i)
        clashes = (row[i] & mask[i] & ~target[i]) != 0;
      if (!clashes) compatible[j].push_back(static_cast<uint32_t>(m));
    }

  PosteriorOverW post;
  post.counts.resize(binomial_exact(n, k));
  MaskedComboCounter counter(codebook, compatible, target, mask, k);

  std::vector<uint32_t> members(k);
  for (uint32_t i = 0; i < k; ++i) members[i] = i;
  uint64_t w = 0;
  do {
    // Bins with no compatible row force zero combinations for this w.
    bool feasible = true;
    for (uint32_t j : members)
      if (compatible[j].empty()) {
        feasible = false;
        break;
      }
    if (feasible) {
      const uint64_t c = counter.count(members);
      post.counts[w] = c;
      post.total += c;
    }
    ++w;
  } while (next_subset_colex(members, n));

  if (post.total == 0)
    throw std::invalid_argument("posterior_over_w: view is inconsistent with the codebook");

  post.weights.resize(post.counts.size());
  for (std::size_t i = 0; i < post.counts.size(); ++i)
    post.weights[i] = static_cast<double>(post.counts[i]) / static_cast<double>(post.total);
  post.entropy_bits = entropy_from_counts(post.counts, post.total);

  const double ceiling = std::log2(static_cast<double>(post.counts.size()));
  double sum = 0.0;
  for (double x : post.weights) sum += x;
  if (std::abs(sum - 1.0) > 1e-9 || post.entropy_bits > ceiling + 1e-9)
    throw std::logic_error("posterior_over_w: normalization or entropy ceiling violated");
  return post;
}

LeakageEstimate empirical_leakage(const Codebook& codebook, double delta, uint64_t trials,
                                  uint64_t seed, uint64_t cap, unsigned workers) {
  if (trials < 2) throw std::invalid_argument("empirical_leakage: trials must be >= 2");
  const uint32_t n = codebook.params.n_items;
  const uint32_t k = codebook.params.n_defective;
  const uint64_t sat = cap == UINT64_MAX ? UINT64_MAX : cap + 1;
  if (candidate_count_capped(n, k, codebook.m, sat) > cap)
    throw InstanceTooLarge("empirical_leakage: C(N,K)*M^K exceeds the enumeration cap");
  const double prior_bits = std::log2(static_cast<double>(binomial_exact(n, k)));

  std::vector<double> mi(trials);
  parallel_for(trials, worker_count(workers), [&](uint64_t trial) {
    Rng w_rng(derive_seed(seed, {trial, 1}));
    const auto members = sample_subset(w_rng, n, k);
    Rng assign_rng(derive_seed(seed, {trial, 2}));

    // Only the defective rows shape Y; non-defective choices are drawn anyway
    // to keep the stream layout independent of W.
    OutcomeVector y(codebook.params.n_tests);
    auto acc = y.words();
    for (uint32_t j = 0; j < n; ++j) {
      const uint64_t choice = assign_rng.uniform_below(codebook.m);
      if (std::binary_search(members.begin(), members.end(), j))
        bitops::or_into(acc, codebook.row(j, choice));
    }

    const EveView z = eavesdrop(y, delta, derive_seed(seed, {trial, 3}));
    const PosteriorOverW post = posterior_over_w(codebook, z, cap);
    mi[trial] = prior_bits - post.entropy_bits;
  });

  double mean = 0.0;
  for (double x : mi) mean += x;
  mean /= static_cast<double>(trials);
  double var = 0.0;
  for (double x : mi) var += (x - mean) * (x - mean);
  var /= static_cast<double>(trials - 1);

  LeakageEstimate est;
  est.mi_bits = mean;
  est.std_err = std::sqrt(var / static_cast<double>(trials));
  est.trials = trials;
  est.normalized = mean / prior_bits;
  return est;
}

std::vector<uint64_t> consistent_rows_per_bin(const Codebook& codebook, const EveView& z) {
  const uint32_t n = codebook.params.n_items;
  if (z.size() != codebook.params.n_tests)
    throw std::invalid_argument("consistent_rows_per_bin: view length mismatch");
  const std::size_t wpr = codebook.words_per_row();
  std::vector<uint64_t> target(wpr), mask(wpr);
  for (std::size_t i = 0; i < wpr; ++i) {
    mask[i] = z.kept.words()[i];
    target[i] = z.values.words()[i] & mask[i];
  }
  std::vector<uint64_t> counts(n, 0);
  for (uint32_t j = 0; j < n; ++j)
    for (uint64_t m = 0; m < codebook.m; ++m)
      if (bitops::matches_masked(codebook.row(j, m), target, mask)) ++counts[j];
  return counts;
}

}  // namespace sgt
