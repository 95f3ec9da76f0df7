#include "sgt/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "sgt/bounds.hpp"
#include "sgt/channel.hpp"
#include "sgt/decode.hpp"
#include "sgt/errors.hpp"
#include "sgt/parallel.hpp"
#include "sgt/rng.hpp"
#include "sgt/secrecy.hpp"

namespace sgt {
namespace {

// Seed-derivation tags; one stream per random object per (T, trial).
enum : uint64_t { kTagCodebook = 1, kTagAssign = 2, kTagDefectives = 3, kTagEve = 4 };

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

[[noreturn]] void config_fail(std::size_t line, const std::string& msg) {
  throw ConfigError("line " + std::to_string(line) + ": " + msg);
}

template <typename T>
T parse_integer(std::string_view v, std::size_t line, const char* key) {
  T out{};
  const auto* first = v.data();
  const auto* last = v.data() + v.size();
  auto [p, ec] = std::from_chars(first, last, out);
  if (ec != std::errc{} || p != last)
    config_fail(line, std::string(key) + ": expected an integer, got '" + std::string(v) + "'");
  return out;
}

double parse_real(std::string_view v, std::size_t line, const char* key) {
  double out{};
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || p != v.data() + v.size())
    config_fail(line, std::string(key) + ": expected a number, got '" + std::string(v) + "'");
  return out;
}

bool parse_bool(std::string_view v, std::size_t line, const char* key) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  config_fail(line, std::string(key) + ": expected true/false");
}

std::vector<std::string_view> split(std::string_view v, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= v.size(); ++i)
    if (i == v.size() || v[i] == sep) {
      parts.push_back(trim(v.substr(start, i - start)));
      start = i + 1;
    }
  return parts;
}

struct TrialOutcome {
  uint8_t ml_ok = 0, dnd_ok = 0;
  uint32_t survivors = 0;
  double mi = 0.0;
};

struct TrialContext {
  std::vector<uint32_t> members;
  OutcomeVector y;
  Codebook codebook;  // only populated in fresh-codebook mode
};

// One Monte-Carlo draw: codebook (fresh or shared), defective set, row
// assignment, pool tests. Y is the OR of the chosen rows of the defective
// bins; building the full N x T design would not change it.
void draw_trial(const ExperimentConfig& cfg, const DesignParams& params, uint64_t m,
                const Codebook* shared, uint32_t t, uint64_t trial, TrialContext& ctx) {
  const Codebook* cb = shared;
  if (cb == nullptr) {
    ctx.codebook = generate_codebook_with_bin_size(
        params, m, derive_seed(cfg.master_seed, {t, trial, kTagCodebook}));
    cb = &ctx.codebook;
  }
  Rng w_rng(derive_seed(cfg.master_seed, {t, trial, kTagDefectives}));
  ctx.members = sample_subset(w_rng, params.n_items, params.n_defective);

  Rng assign_rng(derive_seed(cfg.master_seed, {t, trial, kTagAssign}));
  ctx.y = OutcomeVector(params.n_tests);
  auto acc = ctx.y.words();
  for (uint32_t j = 0; j < params.n_items; ++j) {
    const uint64_t choice = assign_rng.uniform_below(m);
    if (std::binary_search(ctx.members.begin(), ctx.members.end(), j))
      bitops::or_into(acc, cb->row(j, choice));
  }
}

void append_field(std::string& line, const std::optional<double>& v) {
  line.push_back(',');
  if (v) line += format_double(*v);
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, p);
}

double wilson_halfwidth(uint64_t successes, uint64_t trials, double z) {
  if (trials == 0) throw std::invalid_argument("wilson_halfwidth: trials must be positive");
  const double n = static_cast<double>(trials);
  const double phat = static_cast<double>(successes) / n;
  const double z2 = z * z;
  return z * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n)) / (1.0 + z2 / n);
}

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig cfg;
  uint32_t n = 0, k = 0;
  double delta = 0.0, eps_prime = 0.0;
  SecrecyMode mode = SecrecyMode::weak;
  bool seen[12] = {};
  enum Key { kN, kK, kTGrid, kDelta, kEps, kMode, kTrials, kSeed, kDecoders, kMlCap, kLeakage, kOut };
  static const std::map<std::string_view, Key> kKeys = {
      {"n", kN},         {"k", kK},           {"t_grid", kTGrid},   {"delta", kDelta},
      {"eps_prime", kEps}, {"mode", kMode},   {"trials", kTrials},  {"seed", kSeed},
      {"decoders", kDecoders}, {"ml_cap", kMlCap}, {"leakage", kLeakage}, {"out", kOut}};

  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = std::min(text.find('\n', start), text.size());
    std::string_view line = trim(text.substr(start, end - start));
    start = end + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') continue;

    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) config_fail(line_no, "expected key=value");
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    const auto it = kKeys.find(key);
    if (it == kKeys.end()) config_fail(line_no, "unknown key '" + std::string(key) + "'");
    if (seen[it->second]) config_fail(line_no, "duplicate key '" + std::string(key) + "'");
    seen[it->second] = true;

    switch (it->second) {
      case kN:
        n = parse_integer<uint32_t>(value, line_no, "n");
        break;
      case kK:
        k = parse_integer<uint32_t>(value, line_no, "k");
        break;
      case kTGrid: {
        for (auto part : split(value, ','))
          cfg.t_grid.push_back(parse_integer<uint32_t>(part, line_no, "t_grid"));
        if (cfg.t_grid.empty()) config_fail(line_no, "t_grid: must be nonempty");
        for (uint32_t t : cfg.t_grid)
          if (t == 0) config_fail(line_no, "t_grid: entries must be positive");
        for (std::size_t i = 1; i < cfg.t_grid.size(); ++i)
          if (cfg.t_grid[i] <= cfg.t_grid[i - 1])
            config_fail(line_no, "t_grid: must be strictly increasing");
        break;
      }
      case kDelta:
        delta = parse_real(value, line_no, "delta");
        if (!(delta >= 0.0 && delta < 1.0)) config_fail(line_no, "delta: must be in [0, 1)");
        break;
      case kEps:
        eps_prime = parse_real(value, line_no, "eps_prime");
        if (!(eps_prime >= 0.0)) config_fail(line_no, "eps_prime: must be >= 0");
        break;
      case kMode:
        if (value == "weak")
          mode = SecrecyMode::weak;
        else if (value == "strong")
          mode = SecrecyMode::strong;
        else
          config_fail(line_no, "mode: expected weak or strong");
        break;
      case kTrials:
        cfg.trials = parse_integer<uint64_t>(value, line_no, "trials");
        if (cfg.trials == 0) config_fail(line_no, "trials: must be >= 1");
        break;
      case kSeed:
        cfg.master_seed = parse_integer<uint64_t>(value, line_no, "seed");
        break;
      case kDecoders: {
        cfg.use_ml = cfg.use_dnd = false;
        for (auto part : split(value, ',')) {
          if (part.empty()) continue;
          if (part == "ml")
            cfg.use_ml = true;
          else if (part == "dnd")
            cfg.use_dnd = true;
          else
            config_fail(line_no, "decoders: expected a subset of {ml, dnd}");
        }
        break;
      }
      case kMlCap:
        cfg.ml_cap = parse_integer<uint64_t>(value, line_no, "ml_cap");
        if (cfg.ml_cap == 0) config_fail(line_no, "ml_cap: must be positive");
        break;
      case kLeakage:
        cfg.leakage = parse_bool(value, line_no, "leakage");
        break;
      case kOut:
        cfg.output_path = std::string(value);
        break;
    }
  }

  if (!seen[kN]) throw ConfigError("missing required key 'n'");
  if (!seen[kK]) throw ConfigError("missing required key 'k'");
  if (!seen[kTGrid]) throw ConfigError("missing required key 't_grid'");
  cfg.base = design_params(n, k, cfg.t_grid.front(), delta, eps_prime, mode);
  return cfg;
}

SweepResult run_sweep(const ExperimentConfig& config, unsigned workers) {
  const unsigned w = worker_count(workers);
  SweepResult result;
  const uint32_t n = config.base.n_items;
  const uint32_t k = config.base.n_defective;
  const double delta = config.base.delta;
  const bool dnd_regime = delta < dnd_delta_limit(k);
  double prior_bits = 0.0;
  if (config.leakage) {
    const uint64_t sat = config.ml_cap == UINT64_MAX ? UINT64_MAX : config.ml_cap + 1;
    if (binomial_capped(n, k, sat) > config.ml_cap)
      throw InstanceTooLarge("run_sweep: C(N,K) exceeds ml_cap for leakage estimation");
    prior_bits = std::log2(static_cast<double>(binomial_exact(n, k)));
  }

  for (uint32_t t : config.t_grid) {
    DesignParams params = config.base;
    params.n_tests = t;
    params.validate();
    const uint64_t m = config.fixed_bin_size.value_or(bin_size(params));

    if (config.use_ml || config.leakage) {
      const uint64_t sat = config.ml_cap == UINT64_MAX ? UINT64_MAX : config.ml_cap + 1;
      if (candidate_count_capped(n, k, m, sat) > config.ml_cap)
        throw InstanceTooLarge("run_sweep: C(N,K)*M^K exceeds ml_cap at T=" + std::to_string(t));
    }

    Codebook shared;
    if (config.fixed_codebook)
      shared = generate_codebook_with_bin_size(
          params, m, derive_seed(config.master_seed, {t, 0, kTagCodebook}));

    std::vector<TrialOutcome> outcomes(config.trials);
    parallel_for(config.trials, w, [&](uint64_t trial) {
      TrialContext ctx;
      draw_trial(config, params, m, config.fixed_codebook ? &shared : nullptr, t, trial, ctx);
      const Codebook& cb = config.fixed_codebook ? shared : ctx.codebook;
      TrialOutcome& out = outcomes[trial];

      if (config.use_dnd) {
        const DndResult r = dnd_decode(cb, ctx.y);
        out.survivors = static_cast<uint32_t>(r.possibly_defective.size());
        out.dnd_ok = r.possibly_defective == ctx.members ? 1 : 0;
      }
      if (config.use_ml) {
        const MlResult r = ml_decode(cb, ctx.y, config.ml_cap);
        out.ml_ok =
            (r.unique && r.decoded && r.decoded->members == ctx.members) ? 1 : 0;
      }
      if (config.leakage) {
        const EveView z =
            eavesdrop(ctx.y, delta, derive_seed(config.master_seed, {t, trial, kTagEve}));
        const PosteriorOverW post = posterior_over_w(cb, z, config.ml_cap);
        out.mi = prior_bits - post.entropy_bits;
      }
    });

    SweepRecord rec;
    rec.t = t;
    rec.m = m;
    const auto trials = config.trials;
    if (config.use_ml) {
      uint64_t ok = 0;
      for (const auto& o : outcomes) ok += o.ml_ok;
      rec.ml_success = static_cast<double>(ok) / static_cast<double>(trials);
      rec.ml_ci = wilson_halfwidth(ok, trials);
    }
    if (config.use_dnd) {
      uint64_t ok = 0;
      double surv = 0.0;
      for (const auto& o : outcomes) {
        ok += o.dnd_ok;
        surv += o.survivors;
      }
      rec.dnd_success = static_cast<double>(ok) / static_cast<double>(trials);
      rec.dnd_ci = wilson_halfwidth(ok, trials);
      rec.mean_survivors = surv / static_cast<double>(trials);
    }
    if (config.leakage) {
      double mean = 0.0;
      for (const auto& o : outcomes) mean += o.mi;
      mean /= static_cast<double>(trials);
      double var = 0.0;
      for (const auto& o : outcomes) var += (o.mi - mean) * (o.mi - mean);
      var = trials > 1 ? var / static_cast<double>(trials - 1) : 0.0;
      rec.mi_bits = mean;
      rec.mi_se = std::sqrt(var / static_cast<double>(trials));
    }
    rec.thr_ml = ml_tests_threshold(n, k, delta, 0.0).tests;
    rec.thr_converse = converse_tests_bound(n, k, delta, 0.0);
    if (dnd_regime) {
      rec.thr_dnd = dnd_tests_threshold(n, k, delta, 0.0);
      const double beta = double(t) / (double(k) * std::log2(double(n)));
      rec.dnd_bound = dnd_error_bound(n, k, delta, beta).bound;
    }
    result.records.push_back(std::move(rec));
  }
  return result;
}

void emit_csv(const SweepResult& result, std::ostream& out) {
  out << "T,M,ml_success,ml_ci,dnd_success,dnd_ci,mean_survivors,mi_bits,mi_se,"
         "thr_ml,thr_dnd,thr_converse,dnd_bound\n";
  for (const auto& r : result.records) {
    std::string line = std::to_string(r.t) + "," + std::to_string(r.m);
    append_field(line, r.ml_success);
    append_field(line, r.ml_ci);
    append_field(line, r.dnd_success);
    append_field(line, r.dnd_ci);
    append_field(line, r.mean_survivors);
    append_field(line, r.mi_bits);
    append_field(line, r.mi_se);
    append_field(line, r.thr_ml);
    append_field(line, r.thr_dnd);
    append_field(line, r.thr_converse);
    append_field(line, r.dnd_bound);
    out << line << '\n';
  }
  if (!out) throw IoError("emit_csv: write failed");
}

void emit_csv(const SweepResult& result, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open for writing: " + path);
  emit_csv(result, f);
}

void run_simulate(const ExperimentConfig& config, std::ostream& trace, unsigned workers) {
  if (config.t_grid.size() != 1)
    throw ConfigError("simulate expects a single-entry t_grid");
  DesignParams params = config.base;
  params.n_tests = config.t_grid.front();
  params.validate();
  const uint64_t m = config.fixed_bin_size.value_or(bin_size(params));
  const uint32_t t = params.n_tests;

  if (config.use_ml) {
    const uint64_t sat = config.ml_cap == UINT64_MAX ? UINT64_MAX : config.ml_cap + 1;
    if (candidate_count_capped(params.n_items, params.n_defective, m, sat) > config.ml_cap)
      throw InstanceTooLarge("simulate: C(N,K)*M^K exceeds ml_cap");
  }

  Codebook shared;
  if (config.fixed_codebook)
    shared = generate_codebook_with_bin_size(
        params, m, derive_seed(config.master_seed, {t, 0, kTagCodebook}));

  struct Row {
    uint64_t w_true = 0;
    std::string y, z;
    int ml_ok = -1, ml_tie = -1;
    uint64_t ml_survivors = 0;
    int dnd_ok = -1;
    uint64_t dnd_survivors = 0;
  };
  std::vector<Row> rows(config.trials);
  parallel_for(config.trials, worker_count(workers), [&](uint64_t trial) {
    TrialContext ctx;
    draw_trial(config, params, m, config.fixed_codebook ? &shared : nullptr, t, trial, ctx);
    const Codebook& cb = config.fixed_codebook ? shared : ctx.codebook;
    Row& row = rows[trial];
    row.w_true = colex_rank(ctx.members);
    row.y = ctx.y.to_string();
    const EveView z =
        eavesdrop(ctx.y, params.delta, derive_seed(config.master_seed, {t, trial, kTagEve}));
    row.z = z.to_string();
    if (config.use_dnd) {
      const DndResult r = dnd_decode(cb, ctx.y);
      row.dnd_ok = r.possibly_defective == ctx.members ? 1 : 0;
      row.dnd_survivors = r.possibly_defective.size();
    }
    if (config.use_ml) {
      const MlResult r = ml_decode(cb, ctx.y, config.ml_cap);
      row.ml_ok = (r.unique && r.decoded && r.decoded->members == ctx.members) ? 1 : 0;
      row.ml_tie = (r.consistent_sets > 1) ? 1 : 0;
      row.ml_survivors = r.consistent_count;
    }
  });

  trace << "trial_id,w_true,y,z,decoder,success,tie,n_survivors\n";
  for (uint64_t i = 0; i < config.trials; ++i) {
    const Row& row = rows[i];
    const std::string prefix =
        std::to_string(i) + "," + std::to_string(row.w_true) + "," + row.y + "," + row.z;
    if (row.ml_ok >= 0)
      trace << prefix << ",ml," << row.ml_ok << "," << row.ml_tie << "," << row.ml_survivors
            << "\n";
    if (row.dnd_ok >= 0)
      trace << prefix << ",dnd," << row.dnd_ok << ",0," << row.dnd_survivors << "\n";
    if (row.ml_ok < 0 && row.dnd_ok < 0) trace << prefix << ",,,,\n";
  }
  if (!trace) throw IoError("simulate: write failed");
}

std::vector<LeakageRecord> run_leakage(const ExperimentConfig& config, bool include_baseline,
                                       unsigned workers) {
  std::vector<LeakageRecord> records;
  for (uint32_t t : config.t_grid) {
    DesignParams params = config.base;
    params.n_tests = t;
    params.validate();
    const uint64_t m = config.fixed_bin_size.value_or(bin_size(params));
    const uint64_t cb_seed = derive_seed(config.master_seed, {t, 0, kTagCodebook});
    const uint64_t leak_seed = derive_seed(config.master_seed, {t, 0, kTagEve});

    const auto run_one = [&](uint64_t bin_count) {
      const Codebook cb = generate_codebook_with_bin_size(params, bin_count, cb_seed);
      const LeakageEstimate est =
          empirical_leakage(cb, params.delta, config.trials, leak_seed, config.ml_cap, workers);
      LeakageRecord rec;
      rec.n = params.n_items;
      rec.k = params.n_defective;
      rec.t = t;
      rec.m = bin_count;
      rec.delta = params.delta;
      rec.trials = est.trials;
      rec.mi_bits = est.mi_bits;
      rec.std_err = est.std_err;
      rec.normalized = est.normalized;
      records.push_back(rec);
    };
    run_one(m);
    if (include_baseline && m != 1) run_one(1);
  }
  return records;
}

void emit_leakage_csv(std::span<const LeakageRecord> records, std::ostream& out) {
  out << "N,K,T,M,delta,trials,mi_bits,std_err,normalized\n";
  for (const auto& r : records)
    out << r.n << ',' << r.k << ',' << r.t << ',' << r.m << ',' << format_double(r.delta) << ','
        << r.trials << ',' << format_double(r.mi_bits) << ',' << format_double(r.std_err) << ','
        << format_double(r.normalized) << '\n';
  if (!out) throw IoError("emit_leakage_csv: write failed");
}

}  // namespace sgt
