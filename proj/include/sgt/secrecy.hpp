#pragma once

#include <cstdint>
#include <vector>

#include "sgt/channel.hpp"
#include "sgt/decode.hpp"
#include "sgt/design.hpp"

namespace sgt {

// Exact posterior over the C(N,K) defective-set indices given an EveView.
// Uniform priors over W and over row choices make consistency counting exact
// Bayes: weight(w) is proportional to the number of row combinations in w's
// bins whose OR matches z at every kept position.
struct PosteriorOverW {
  std::vector<uint64_t> counts;  // consistent row combinations, colex order
  std::vector<double> weights;   // counts normalized
  uint64_t total = 0;
  double entropy_bits = 0.0;
};

PosteriorOverW posterior_over_w(const Codebook& codebook, const EveView& z,
                                uint64_t cap = kDefaultEnumerationCap);

// Plug-in estimate of I(W; Z^T) for a fixed codebook: the prior term
// log2 C(N,K) is exact, the conditional entropy is averaged over Monte-Carlo
// draws of (W, row assignment, erasures).
struct LeakageEstimate {
  double mi_bits = 0.0;
  double std_err = 0.0;
  uint64_t trials = 0;
  double normalized = 0.0;  // mi_bits / log2 C(N,K)
};

LeakageEstimate empirical_leakage(const Codebook& codebook, double delta, uint64_t trials,
                                  uint64_t seed, uint64_t cap = kDefaultEnumerationCap,
                                  unsigned workers = 0);

// Entry j counts the rows of bin j that match z at every kept position: how
// many options Eve sees per bin.
std::vector<uint64_t> consistent_rows_per_bin(const Codebook& codebook, const EveView& z);

}  // namespace sgt
