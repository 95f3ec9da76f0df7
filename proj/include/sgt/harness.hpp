#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sgt/design.hpp"

namespace sgt {

struct ExperimentConfig {
  DesignParams base;  // n_tests is set per grid point
  std::vector<uint32_t> t_grid;
  uint64_t trials = 1000;
  uint64_t master_seed = 0;
  bool use_ml = false;
  bool use_dnd = true;
  uint64_t ml_cap = 10'000'000;
  bool leakage = false;
  std::string output_path;  // empty = stdout

  // Study a single draw of the codebook instead of averaging over it.
  bool fixed_codebook = false;
  // Pin the bin size across the grid; without this, bins scale with T the way
  // the secrecy argument requires.
  std::optional<uint64_t> fixed_bin_size;
};

// Line-oriented key=value text. Keys: n, k, t_grid, delta, eps_prime, mode,
// trials, seed, decoders, ml_cap, leakage, out. '#' starts a comment.
// Unknown or duplicate keys are rejected; errors carry the line number.
ExperimentConfig parse_config(std::string_view text);

struct SweepRecord {
  uint32_t t = 0;
  uint64_t m = 0;
  std::optional<double> ml_success, ml_ci;
  std::optional<double> dnd_success, dnd_ci;
  std::optional<double> mean_survivors;
  std::optional<double> mi_bits, mi_se;
  std::optional<double> thr_ml, thr_dnd, thr_converse, dnd_bound;
};

struct SweepResult {
  std::vector<SweepRecord> records;
};

// Monte-Carlo sweep over the T grid: per trial a fresh codebook (unless
// fixed_codebook), a uniform defective set, a fresh row assignment, the pool
// tests, and the enabled decoders. Deterministic in (config, master_seed)
// regardless of the worker count.
SweepResult run_sweep(const ExperimentConfig& config, unsigned workers = 0);

// Fixed column order; absent metrics become empty fields; '.' decimal point
// regardless of locale.
void emit_csv(const SweepResult& result, std::ostream& out);
void emit_csv(const SweepResult& result, const std::string& path);

// Per-trial trace for a single-T config: one row per (trial, decoder) with
// trial_id, w_true, y, z, decoder, success, tie, n_survivors.
void run_simulate(const ExperimentConfig& config, std::ostream& trace, unsigned workers = 0);

struct LeakageRecord {
  uint32_t n = 0, k = 0, t = 0;
  uint64_t m = 0;
  double delta = 0.0;
  uint64_t trials = 0;
  double mi_bits = 0.0, std_err = 0.0, normalized = 0.0;
};

// Leakage estimates over the T grid for the configured bin size, optionally
// paired with the unbinned M = 1 baseline on the same trial seeds.
std::vector<LeakageRecord> run_leakage(const ExperimentConfig& config, bool include_baseline,
                                       unsigned workers = 0);
void emit_leakage_csv(std::span<const LeakageRecord> records, std::ostream& out);

// Wilson 95% score-interval halfwidth.
double wilson_halfwidth(uint64_t successes, uint64_t trials, double z = 1.959963984540054);

// Shortest round-trip decimal rendering (std::to_chars).
std::string format_double(double v);

}  // namespace sgt
