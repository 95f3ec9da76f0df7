// Acceptance suite: one line per criterion, nonzero exit if any fails.
// Heavier Monte-Carlo settings live here rather than in the unit tests.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "sgt/bounds.hpp"
#include "sgt/channel.hpp"
#include "sgt/decode.hpp"
#include "sgt/design.hpp"
#include "sgt/harness.hpp"
#include "sgt/parallel.hpp"
#include "sgt/rng.hpp"
#include "sgt/secrecy.hpp"

using namespace sgt;

namespace {

int g_failures = 0;

class Criterion {
 public:
  explicit Criterion(std::string name)
      : name_(std::move(name)), start_(std::chrono::steady_clock::now()) {}

  void expect(bool ok, const std::string& detail) {
    if (!ok) {
      failed_ = true;
      details_ += (details_.empty() ? "" : "; ") + detail;
    }
  }

  void note(const std::string& detail) {
    details_ += (details_.empty() ? "" : "; ") + detail;
  }

  ~Criterion() {
    const auto secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_);
    std::printf("%s  %-34s %s (%.1fs)\n", failed_ ? "FAIL" : "PASS", name_.c_str(),
                details_.c_str(), secs.count());
    std::fflush(stdout);
    if (failed_) ++g_failures;
  }

 private:
  std::string name_;
  bool failed_ = false;
  std::string details_;
  std::chrono::steady_clock::time_point start_;
};

std::string fmt(double v) { return format_double(v); }

// -------------------------------------------------------------------------
// 1. DND never rules out a true defective, across the full parameter grid.
void dnd_no_false_negatives() {
  Criterion c("dnd-no-false-negatives");
  uint64_t total_trials = 0, violations = 0;
  for (uint32_t n : {50u, 500u})
    for (uint32_t k : {2u, 3u, 10u})
      for (double delta : {0.0, 0.1, 0.4}) {
        const uint64_t trials = (n == 500 && k == 10) ? 3000 : 6200;
        const auto t = static_cast<uint32_t>(std::ceil(1.2 * k * std::log2(double(n))));
        const DesignParams params = design_params(n, k, t, delta, 0.0, SecrecyMode::weak);
        const uint64_t m = bin_size(params);
        std::vector<uint8_t> bad(trials, 0);
        parallel_for(trials, worker_count(), [&](uint64_t trial) {
          const uint64_t base = derive_seed(1000, {n, k, uint64_t(delta * 100), trial});
          const Codebook cb = generate_codebook_with_bin_size(params, m, mix64(base));
          Rng w_rng(mix64(base + 1));
          const auto members = sample_subset(w_rng, n, k);
          Rng assign_rng(mix64(base + 2));
          OutcomeVector y(t);
          auto acc = y.words();
          for (uint32_t j = 0; j < n; ++j) {
            const uint64_t choice = assign_rng.uniform_below(m);
            if (std::binary_search(members.begin(), members.end(), j))
              bitops::or_into(acc, cb.row(j, choice));
          }
          const DndResult r = dnd_decode(cb, y);
          for (uint32_t j : members)
            if (std::binary_search(r.definitely_non_defective.begin(),
                                   r.definitely_non_defective.end(), j))
              bad[trial] = 1;
        });
        total_trials += trials;
        for (uint8_t b : bad) violations += b;
      }
  c.expect(total_trials >= 100000, "needs at least 1e5 trials, ran " + std::to_string(total_trials));
  c.expect(violations == 0, std::to_string(violations) + " violations");
  c.note(std::to_string(total_trials) + " trials, " + std::to_string(violations) + " violations");
}

// -------------------------------------------------------------------------
// 2. Empirical DND error at the analytic test count stays within twice the
//    analytic error bound (Monte-Carlo slack included).
void dnd_error_within_bound() {
  Criterion c("dnd-error-within-analytic-bound");
  const uint32_t n = 500, k = 3;
  const double delta = 0.1, eps = 0.5;
  const auto t = static_cast<uint32_t>(std::ceil(dnd_tests_threshold(n, k, delta, eps)));
  c.expect(t == 142, "expected T = 142, got " + std::to_string(t));

  const DesignParams params = design_params(n, k, t, delta, 0.0, SecrecyMode::weak);
  const uint64_t m = bin_size(params);
  const uint64_t trials = 4000;
  std::vector<uint8_t> ok(trials, 0);
  parallel_for(trials, worker_count(), [&](uint64_t trial) {
    const uint64_t base = derive_seed(2000, {trial});
    const Codebook cb = generate_codebook_with_bin_size(params, m, mix64(base));
    Rng w_rng(mix64(base + 1));
    const auto members = sample_subset(w_rng, n, k);
    Rng assign_rng(mix64(base + 2));
    OutcomeVector y(t);
    auto acc = y.words();
    for (uint32_t j = 0; j < n; ++j) {
      const uint64_t choice = assign_rng.uniform_below(m);
      if (std::binary_search(members.begin(), members.end(), j))
        bitops::or_into(acc, cb.row(j, choice));
    }
    ok[trial] = dnd_decode(cb, y).possibly_defective == members ? 1 : 0;
  });
  uint64_t successes = 0;
  for (uint8_t b : ok) successes += b;
  const double err = 1.0 - double(successes) / double(trials);
  const double analytic = std::pow(double(n), -eps);
  c.expect(err <= 2.0 * analytic,
           "err " + fmt(err) + " > 2x analytic " + fmt(2.0 * analytic));
  c.note("T=142 M=" + std::to_string(m) + " err=" + fmt(err) + " bound=" + fmt(analytic));
}

// -------------------------------------------------------------------------
// 3. ML decoding equals an exhaustive reference on every in-cap instance.
namespace reference {

MlResult ml(const Codebook& cb, const OutcomeVector& y) {
  const uint32_t n = cb.params.n_items;
  const uint32_t k = cb.params.n_defective;
  MlResult out;
  uint64_t best_rank = 0;
  std::vector<uint32_t> best;
  std::vector<uint32_t> members(k);
  for (uint32_t i = 0; i < k; ++i) members[i] = i;
  uint64_t rank = 0;
  do {
    uint64_t combos_here = 0;
    std::vector<uint64_t> combo(k, 0);
    for (;;) {
      OutcomeVector orv(cb.params.n_tests);
      for (uint32_t i = 0; i < k; ++i)
        for (std::size_t t = 0; t < cb.params.n_tests; ++t)
          if (cb.rows.get(members[i] * cb.m + combo[i], t)) orv.set(t, true);
      if (orv == y) ++combos_here;
      uint32_t pos = 0;
      while (pos < k && ++combo[pos] == cb.m) combo[pos++] = 0;
      if (pos == k) break;
    }
    if (combos_here > 0) {
      out.consistent_count += combos_here;
      out.consistent_sets += 1;
      if (out.consistent_sets == 1 || rank < best_rank) {
        best_rank = rank;
        best = members;
      }
    }
    ++rank;
  } while (next_subset_colex(members, n));
  if (out.consistent_sets > 0) {
    out.unique = out.consistent_sets == 1;
    DefectiveSet s;
    s.members = best;
    s.index_w = best_rank;
    out.decoded = s;
  }
  return out;
}

}  // namespace reference

void ml_matches_exhaustive_oracle() {
  Criterion c("ml-matches-exhaustive-oracle");
  struct Shape {
    uint32_t n, k, t;
    uint64_t m;
  };
  const Shape shapes[] = {{8, 2, 24, 2}, {6, 2, 16, 4}, {10, 1, 12, 8}, {5, 3, 15, 2}, {12, 2, 18, 1}};
  uint64_t instances = 0, mismatches = 0;
  for (const auto& s : shapes) {
    const double delta = double(s.k) * std::log2(double(s.m)) / double(s.t);
    const DesignParams params = design_params(s.n, s.k, s.t, delta, 0.0, SecrecyMode::weak);
    if (candidate_count_capped(s.n, s.k, s.m, 1u << 20) > 100000) {
      c.expect(false, "shape exceeds the 1e5 candidate cap");
      continue;
    }
    for (uint64_t inst = 0; inst < 100; ++inst) {
      const Codebook cb =
          generate_codebook_with_bin_size(params, s.m, derive_seed(3000, {s.n, inst}));
      Rng rng(derive_seed(3001, {s.n, inst}));
      OutcomeVector y(s.t);
      if (inst % 5 == 0) {
        for (std::size_t t = 0; t < s.t; ++t) y.set(t, rng.bernoulli(0.4));
      } else {
        const auto members = sample_subset(rng, s.n, s.k);
        const auto assign = assign_rows(cb, derive_seed(3002, {s.n, inst}));
        y = run_tests(realize_design(cb, assign), members);
      }
      const MlResult fast = ml_decode(cb, y, 100000);
      const MlResult ref = reference::ml(cb, y);
      const bool same = fast.consistent_count == ref.consistent_count &&
                        fast.consistent_sets == ref.consistent_sets &&
                        fast.unique == ref.unique &&
                        fast.decoded.has_value() == ref.decoded.has_value() &&
                        (!fast.decoded || fast.decoded->members == ref.decoded->members);
      ++instances;
      if (!same) ++mismatches;
    }
  }
  c.expect(instances == 500, "expected 500 instances");
  c.expect(mismatches == 0, std::to_string(mismatches) + " mismatches");
  c.note(std::to_string(instances) + " instances, exact match");
}

// -------------------------------------------------------------------------
// 4. ML success rises with T at desk scale and clears 0.95 at the top.
void ml_success_trend() {
  Criterion c("ml-success-trend");
  auto cfg = parse_config(
      "n=20\nk=2\ndelta=0.2\nt_grid=8,16,32,64\ntrials=800\nseed=41\ndecoders=ml\n");
  const SweepResult result = run_sweep(cfg);
  for (std::size_t i = 1; i < result.records.size(); ++i) {
    const auto& lo = result.records[i - 1];
    const auto& hi = result.records[i];
    const double tol = 2.0 * std::max(*lo.ml_ci, *hi.ml_ci);
    c.expect(*hi.ml_success >= *lo.ml_success - tol,
             "dip at T=" + std::to_string(hi.t) + ": " + fmt(*hi.ml_success) + " < " +
                 fmt(*lo.ml_success) + " - " + fmt(tol));
  }
  const double top = *result.records.back().ml_success;
  c.expect(top >= 0.95, "success at T=64 is " + fmt(top) + " < 0.95");
  std::string curve;
  for (const auto& r : result.records) curve += fmt(*r.ml_success) + " ";
  c.note("success: " + curve);
}

// -------------------------------------------------------------------------
// 5. Binning suppresses leakage: strong-mode bins beat the unbinned design by
//    at least 5x on paired draws, and zero observation means zero leakage.
void binning_suppresses_leakage() {
  Criterion c("binning-suppresses-leakage");
  const uint32_t n = 8, k = 1, t = 12;
  const double delta = 0.5;
  const auto strong = design_params(n, k, t, delta, 0.25, SecrecyMode::strong);
  const Codebook binned = generate_codebook(strong, 505);
  c.expect(binned.m == 512, "strong-mode M is " + std::to_string(binned.m));
  const Codebook flat = generate_codebook_with_bin_size(strong, 1, 505);

  const uint64_t trials = 2000, seed = 51;
  const LeakageEstimate with_bins = empirical_leakage(binned, delta, trials, seed);
  const LeakageEstimate baseline = empirical_leakage(flat, delta, trials, seed);
  c.expect(with_bins.normalized <= baseline.normalized / 5.0,
           "normalized " + fmt(with_bins.normalized) + " vs baseline " +
               fmt(baseline.normalized));

  const LeakageEstimate blind = empirical_leakage(binned, 0.0, 200, seed);
  c.expect(blind.mi_bits == 0.0, "delta=0 leakage is " + fmt(blind.mi_bits));
  c.note("binned " + fmt(with_bins.normalized) + ", baseline " + fmt(baseline.normalized) +
         ", delta0 " + fmt(blind.mi_bits));
}

// -------------------------------------------------------------------------
// 6. The closed-form per-test information matches Monte-Carlo estimates and
//    clears the i/K bound at large K.
void or_mi_closed_form() {
  Criterion c("or-mi-closed-form-vs-monte-carlo");
  struct Probe {
    uint32_t i, k;
  };
  for (const Probe pr : {Probe{1, 3}, Probe{2, 4}, Probe{3, 3}}) {
    const double p = std::numbers::ln2 / pr.k;
    const double closed = or_mutual_information(pr.i, pr.k, 1.0 - p);
    // plug-in MI over the 2 x 4 empirical joint of (x1, (x2, y))
    const uint64_t samples = 1000000;
    Rng rng(derive_seed(6000, {pr.i, pr.k}));
    uint64_t joint[2][4] = {};
    for (uint64_t s = 0; s < samples; ++s) {
      bool x1 = false, x2 = false;
      for (uint32_t b = 0; b < pr.i; ++b) x1 = x1 || rng.bernoulli(p);
      for (uint32_t b = 0; b < pr.k - pr.i; ++b) x2 = x2 || rng.bernoulli(p);
      const bool y = x1 || x2;
      ++joint[x1][int(x2) * 2 + int(y)];
    }
    double mi = 0.0, var_term = 0.0;
    double px[2] = {}, pz[4] = {};
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 4; ++b) {
        px[a] += double(joint[a][b]) / double(samples);
        pz[b] += double(joint[a][b]) / double(samples);
      }
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 4; ++b) {
        const double pj = double(joint[a][b]) / double(samples);
        if (pj == 0.0) continue;
        const double term = std::log2(pj / (px[a] * pz[b]));
        mi += pj * term;
        var_term += pj * term * term;
      }
    const double sigma = std::sqrt(std::max(0.0, var_term - mi * mi) / double(samples));
    c.expect(std::abs(mi - closed) <= 3.0 * sigma + 1e-4,
             "i=" + std::to_string(pr.i) + " K=" + std::to_string(pr.k) + ": mc " + fmt(mi) +
                 " vs closed " + fmt(closed) + " (3sigma " + fmt(3 * sigma) + ")");
  }

  const std::vector<uint32_t> is = {1, 10, 100, 1000};
  const auto rep = mi_bound_report(1000, is);
  for (const auto& e : rep.entries)
    c.expect(e.closed_form >= 0.99 * e.target,
             "K=1000 i=" + std::to_string(e.i) + ": " + fmt(e.closed_form) + " < 0.99*" +
                 fmt(e.target));
  c.note("3 Monte-Carlo probes within 3 sigma; K=1000 bound holds");
}

// -------------------------------------------------------------------------
// 7. Gallager function: zero at rho = 0, slope there equals the information.
void gallager_exponent_slope() {
  Criterion c("gallager-exponent-slope");
  const std::pair<uint32_t, uint32_t> iks[] = {{1, 1}, {1, 2}, {2, 2}, {1, 3}, {3, 3},
                                               {2, 4}, {2, 5}, {4, 6}, {5, 5}};
  for (const auto& [i, k] : iks) {
    const double p = std::numbers::ln2 / k;
    const double at0 = gallager_exponent(0.0, i, k, p);
    c.expect(std::abs(at0) <= 1e-12,
             "E_o(0) = " + fmt(at0) + " at i=" + std::to_string(i) + " K=" + std::to_string(k));
    const double h = 1e-5;
    const double slope = (-3 * gallager_exponent(0, i, k, p) + 4 * gallager_exponent(h, i, k, p) -
                          gallager_exponent(2 * h, i, k, p)) /
                         (2 * h);
    const double mi = or_mutual_information(i, k, 1.0 - p);
    c.expect(std::abs(slope - mi) / mi < 1e-3,
             "slope " + fmt(slope) + " vs mi " + fmt(mi) + " at i=" + std::to_string(i) +
                 " K=" + std::to_string(k));
  }
  c.note("9 grid points");
}

// -------------------------------------------------------------------------
// 8. Converse <= ML threshold <= simplified threshold on the 36-point grid,
//    plus the frozen spot value.
void threshold_ordering() {
  Criterion c("threshold-ordering");
  int points = 0;
  for (uint32_t n : {50u, 100u, 500u})
    for (uint32_t k : {2u, 3u, 5u})
      for (double d : {0.0, 0.1, 0.25, 0.45}) {
        const double conv = converse_tests_bound(n, k, d, 0.0);
        const double ml = ml_tests_threshold(n, k, d, 0.0).tests;
        const double simple = ml_tests_threshold_simple(n, k, d, 0.0);
        c.expect(conv <= ml && ml <= simple,
                 "ordering broken at N=" + std::to_string(n) + " K=" + std::to_string(k) +
                     " d=" + fmt(d));
        ++points;
      }
  const auto spot = ml_tests_threshold(500, 3, 0.1, 0.1);
  c.expect(std::abs(spot.tests - 32.84) <= 0.1, "spot value " + fmt(spot.tests));
  c.expect(spot.argmax_i == 1, "argmax i = " + std::to_string(spot.argmax_i));
  c.note(std::to_string(points) + " grid points; spot " + fmt(spot.tests));
}

// -------------------------------------------------------------------------
// 9. Sweep shapes: the DND success curve at full scale rises monotonically
//    and crosses 1/2 before the analytic test count; at reduced scale ML
//    reaches any given success level with fewer tests than DND.
void success_curve_shapes() {
  Criterion c("success-curve-shapes");
  auto cfg = parse_config(
      "n=500\nk=3\ndelta=0.1\nt_grid=40,70,100,120,142\ntrials=8000\nseed=61\ndecoders=dnd\n");
  const SweepResult big = run_sweep(cfg);
  std::string curve;
  for (const auto& r : big.records) curve += fmt(*r.dnd_success) + " ";
  for (std::size_t i = 1; i < big.records.size(); ++i) {
    const auto& lo = big.records[i - 1];
    const auto& hi = big.records[i];
    const double tol = 2.0 * std::max(*lo.dnd_ci, *hi.dnd_ci);
    c.expect(*hi.dnd_success >= *lo.dnd_success - tol,
             "dip at T=" + std::to_string(hi.t));
  }
  const double analytic_t = dnd_tests_threshold(500, 3, 0.1, 0.5);
  uint32_t first_above_half = 0;
  for (const auto& r : big.records)
    if (*r.dnd_success >= 0.5) {
      first_above_half = r.t;
      break;
    }
  c.expect(first_above_half != 0, "curve never reaches 1/2");
  c.expect(first_above_half < analytic_t,
           "crossing at T=" + std::to_string(first_above_half) + " not below " + fmt(analytic_t));
  c.expect(*big.records.front().dnd_success < 0.5, "curve starts above 1/2");

  auto small_cfg = parse_config(
      "n=50\nk=3\ndelta=0.1\nt_grid=20,30,40,50,60\ntrials=1500\nseed=62\ndecoders=ml,dnd\n");
  const SweepResult small = run_sweep(small_cfg);
  auto first_reaching = [&](auto getter) {
    for (const auto& r : small.records)
      if (*(r.*getter) >= 0.5) return r.t;
    return 0u;
  };
  const uint32_t t_ml = first_reaching(&SweepRecord::ml_success);
  const uint32_t t_dnd = first_reaching(&SweepRecord::dnd_success);
  c.expect(t_ml != 0, "ML never reaches 1/2 on the small grid");
  c.expect(t_dnd != 0, "DND never reaches 1/2 on the small grid");
  c.expect(t_ml < t_dnd, "ML reaches 1/2 at T=" + std::to_string(t_ml) + ", DND at T=" +
                             std::to_string(t_dnd));
  c.note("full-scale: " + curve + "| crossing " + std::to_string(first_above_half) + " < " +
         fmt(analytic_t) + "; reduced: ML@" + std::to_string(t_ml) + " DND@" +
         std::to_string(t_dnd));
}

// -------------------------------------------------------------------------
// 10. Equal config and seed give byte-identical CSV whatever the worker count.
void csv_determinism() {
  Criterion c("csv-determinism");
  auto cfg = parse_config(
      "n=100\nk=2\ndelta=0.1\nt_grid=16,24\ntrials=300\nseed=71\ndecoders=ml,dnd\nleakage=true\n");
  std::string outputs[3];
  int idx = 0;
  for (unsigned workers : {1u, 3u, 8u}) {
    std::ostringstream os;
    emit_csv(run_sweep(cfg, workers), os);
    outputs[idx++] = os.str();
  }
  c.expect(outputs[0] == outputs[1], "workers 1 vs 3 differ");
  c.expect(outputs[0] == outputs[2], "workers 1 vs 8 differ");
  std::ostringstream os;
  emit_csv(run_sweep(cfg, 2), os);
  c.expect(outputs[0] == os.str(), "repeat run differs");
  c.note(std::to_string(outputs[0].size()) + " bytes, stable across 1/2/3/8 workers");
}

}  // namespace

int main() {
  std::printf("acceptance suite\n");
  dnd_no_false_negatives();
  dnd_error_within_bound();
  ml_matches_exhaustive_oracle();
  ml_success_trend();
  binning_suppresses_leakage();
  or_mi_closed_form();
  gallager_exponent_slope();
  threshold_ordering();
  success_curve_shapes();
  csv_determinism();
  std::printf("%d criterion(s) failed\n", g_failures);
  return g_failures == 0 ? 0 : 1;
}
