#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace sgt {

// Binary entropy in bits; 0 at the endpoints.
double binary_entropy_bits(double p);

// Number of tests sufficient for reliable-and-secure ML decoding:
// max over i in [1, K] of (1+eps)/(1-delta) * (K/i) * log2 C(N-K, i).
struct MlThreshold {
  double tests = 0.0;
  uint32_t argmax_i = 0;
};
MlThreshold ml_tests_threshold(uint32_t n, uint32_t k, double delta, double eps);

// Closed-form upper bound on the max above: (1+eps)/(1-delta) * K * log2((N-K)e).
double ml_tests_threshold_simple(uint32_t n, uint32_t k, double delta, double eps);

// Converse: no reliable-and-secure scheme below (1-eps_t)/(1-delta) * log2 C(N,K).
double converse_tests_bound(uint32_t n, uint32_t k, double delta, double eps_t);

// Largest delta for which the DND guarantee is non-vacuous: (1 - ln2/K)/2.
double dnd_delta_limit(uint32_t k);

// DND threshold (1+eps)/((1-ln2/K)/2 - delta) * K * log2 N; requires
// delta < dnd_delta_limit(k).
double dnd_tests_threshold(uint32_t n, uint32_t k, double delta, double eps);

// Analytic DND error bound N^(1 - beta*((1-ln2/K)/2 - delta)) for
// T = beta * K * log2 N, reported together with the exponent epsilon in the
// equivalent form N^(-epsilon).
struct DndErrorBound {
  double bound = 0.0;
  double epsilon = 0.0;
};
DndErrorBound dnd_error_bound(uint32_t n, uint32_t k, double delta, double beta);

// Per-test mutual information between the OR of i Bernoulli(1-q) inputs and
// the pair (OR of the other K-i inputs, overall OR): q^(K-i) * Hb(q^i) bits.
double or_mutual_information(uint32_t i, uint32_t k, double q);

// Gap report of the closed form against the i/K lower bound at q = 1 - ln2/K.
// The bound is asymptotic in K; small-K gaps may be negative and are reported,
// not clamped.
struct MiBoundEntry {
  uint32_t i = 0;
  double closed_form = 0.0;
  double target = 0.0;  // i/K
  double gap = 0.0;     // closed_form - target
};
struct MiBoundReport {
  double q = 0.0;
  double min_gap = 0.0;
  std::vector<MiBoundEntry> entries;
};
MiBoundReport mi_bound_report(uint32_t k, std::span<const uint32_t> sample_is);

// Gallager function E_o(rho) of the induced binary joint: X1 = OR of i
// Bernoulli(p) bits, X2 = OR of the other K-i, Y = X1 | X2; log base 2.
double gallager_exponent(double rho, uint32_t i, uint32_t k, double p);

// Error bound pieces for the ML decoder against C(N-K,i)*M^i confusers.
// `single` is the per-event bound, `with_union` folds in the 2^K union factor.
struct MlErrorBounds {
  double single = 0.0;
  double with_union = 0.0;
};
MlErrorBounds ml_error_bound_single(uint32_t n, uint32_t k, uint32_t t, uint64_t m, uint32_t i,
                                    double rho, double p);

// Total bound 2^K * sum_i min over a 101-point rho grid of the per-i bound.
struct MlErrorBoundTotal {
  double total = 0.0;
  std::vector<double> per_i;     // optimized per-i bounds, i = 1..K
  std::vector<double> rho_star;  // grid minimizers
};
MlErrorBoundTotal ml_error_bound(uint32_t n, uint32_t k, uint32_t t, uint64_t m, double p);

// Secrecy capacity (1 - delta) * C.
double secrecy_capacity(double delta, double capacity_nosec);

}  // namespace sgt
