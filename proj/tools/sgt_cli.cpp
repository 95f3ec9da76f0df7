// Command-line front end: gen / simulate / sweep / bounds / leakage.
// Exit codes: 0 ok, 2 config error, 3 instance too large, 4 I/O error.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "sgt/bounds.hpp"
#include "sgt/design.hpp"
#include "sgt/errors.hpp"
#include "sgt/harness.hpp"

namespace {

std::string read_text_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw sgt::IoError("cannot open config: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

sgt::ExperimentConfig load_config(const std::string& path, const std::string& out_override,
                                  bool fixed_codebook, std::optional<uint64_t> fixed_m) {
  sgt::ExperimentConfig cfg = sgt::parse_config(read_text_file(path));
  if (!out_override.empty()) cfg.output_path = out_override;
  cfg.fixed_codebook = fixed_codebook;
  cfg.fixed_bin_size = fixed_m;
  return cfg;
}

// Writes via `emit` to cfg.output_path, or stdout when the path is empty.
template <typename Emit>
void write_output(const std::string& path, Emit&& emit) {
  if (path.empty()) {
    emit(std::cout);
  } else {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw sgt::IoError("cannot open for writing: " + path);
    emit(f);
  }
}

std::vector<double> parse_list_real(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, ',')) out.push_back(std::stod(part));
  return out;
}

std::vector<uint32_t> parse_list_u32(const std::string& s) {
  std::vector<uint32_t> out;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, ',')) out.push_back(static_cast<uint32_t>(std::stoul(part)));
  return out;
}

int run(int argc, char** argv) {
  CLI::App app{"Secure group testing simulator and bound calculator"};
  app.require_subcommand(1);

  std::string config_path, out_path;
  bool fixed_codebook = false;
  std::optional<uint64_t> fixed_m;
  unsigned workers = 0;

  auto add_common = [&](CLI::App* cmd, bool with_flags) {
    cmd->add_option("-c,--config", config_path, "key=value config file")->required();
    cmd->add_option("-o,--out", out_path, "output path (overrides 'out' in the config)");
    if (with_flags) {
      cmd->add_flag("--fixed-codebook", fixed_codebook,
                    "reuse one codebook draw across trials");
      cmd->add_option("--fixed-m", fixed_m, "pin the bin size instead of scaling it with T");
      cmd->add_option("--workers", workers, "worker threads (0 = auto, capped by SGT_THREADS)");
    }
  };

  auto* gen = app.add_subcommand("gen", "generate a codebook container");
  add_common(gen, false);
  gen->add_option("--fixed-m", fixed_m, "pin the bin size instead of deriving it from T");

  auto* simulate = app.add_subcommand("simulate", "per-trial trace for a single-T config");
  add_common(simulate, true);

  auto* sweep = app.add_subcommand("sweep", "Monte-Carlo sweep over the T grid");
  add_common(sweep, true);

  auto* leakage = app.add_subcommand("leakage", "empirical leakage over the T grid");
  add_common(leakage, true);
  bool no_baseline = false;
  leakage->add_flag("--no-baseline", no_baseline, "skip the paired M=1 baseline rows");

  auto* bounds = app.add_subcommand("bounds", "threshold table for a parameter grid");
  std::string n_list = "500", k_list = "3", delta_list = "0.1";
  double eps = 0.0, eps_t = 0.0;
  bool as_csv = false;
  bounds->add_option("--n-list", n_list, "comma-separated N values");
  bounds->add_option("--k-list", k_list, "comma-separated K values");
  bounds->add_option("--delta-list", delta_list, "comma-separated delta values");
  bounds->add_option("--eps", eps, "achievability slack");
  bounds->add_option("--eps-t", eps_t, "converse slack");
  bounds->add_flag("--csv", as_csv, "CSV instead of aligned text");
  bounds->add_option("-o,--out", out_path, "output path (default stdout)");

  CLI11_PARSE(app, argc, argv);

  if (gen->parsed()) {
    const auto cfg = load_config(config_path, out_path, false, fixed_m);
    if (cfg.t_grid.size() != 1) throw sgt::ConfigError("gen expects a single-entry t_grid");
    if (cfg.output_path.empty()) throw sgt::ConfigError("gen needs an output path ('out' or -o)");
    sgt::DesignParams params = cfg.base;
    params.n_tests = cfg.t_grid.front();
    const sgt::Codebook cb =
        cfg.fixed_bin_size
            ? sgt::generate_codebook_with_bin_size(params, *cfg.fixed_bin_size, cfg.master_seed)
            : sgt::generate_codebook(params, cfg.master_seed);
    sgt::save_codebook(cb, cfg.output_path);
    std::cerr << "wrote " << cfg.output_path << " (N=" << params.n_items << " M=" << cb.m
              << " T=" << params.n_tests << ")\n";
  } else if (simulate->parsed()) {
    const auto cfg = load_config(config_path, out_path, fixed_codebook, fixed_m);
    write_output(cfg.output_path, [&](std::ostream& os) { sgt::run_simulate(cfg, os, workers); });
  } else if (sweep->parsed()) {
    const auto cfg = load_config(config_path, out_path, fixed_codebook, fixed_m);
    const sgt::SweepResult result = sgt::run_sweep(cfg, workers);
    write_output(cfg.output_path, [&](std::ostream& os) { sgt::emit_csv(result, os); });
  } else if (leakage->parsed()) {
    const auto cfg = load_config(config_path, out_path, fixed_codebook, fixed_m);
    const auto records = sgt::run_leakage(cfg, !no_baseline, workers);
    write_output(cfg.output_path,
                 [&](std::ostream& os) { sgt::emit_leakage_csv(records, os); });
  } else if (bounds->parsed()) {
    const auto ns = parse_list_u32(n_list);
    const auto ks = parse_list_u32(k_list);
    const auto deltas = parse_list_real(delta_list);
    write_output(out_path, [&](std::ostream& os) {
      if (as_csv)
        os << "N,K,delta,thr_ml,argmax_i,thr_ml_simple,thr_converse,thr_dnd\n";
      else
        os << "     N    K  delta      thr_ml  i   thr_simple    thr_conv     thr_dnd\n";
      char buf[256];
      for (uint32_t n : ns)
        for (uint32_t k : ks)
          for (double d : deltas) {
            const auto ml = sgt::ml_tests_threshold(n, k, d, eps);
            const double simple = sgt::ml_tests_threshold_simple(n, k, d, eps);
            const double conv = sgt::converse_tests_bound(n, k, d, eps_t);
            const bool dnd_ok = d < sgt::dnd_delta_limit(k);
            const double dnd = dnd_ok ? sgt::dnd_tests_threshold(n, k, d, eps) : 0.0;
            if (as_csv) {
              os << n << ',' << k << ',' << sgt::format_double(d) << ','
                 << sgt::format_double(ml.tests) << ',' << ml.argmax_i << ','
                 << sgt::format_double(simple) << ',' << sgt::format_double(conv) << ',';
              if (dnd_ok) os << sgt::format_double(dnd);
              os << '\n';
            } else {
              std::snprintf(buf, sizeof buf, "%6u %4u %6.3f %11.3f %2u %12.3f %11.3f",
                            n, k, d, ml.tests, ml.argmax_i, simple, conv);
              os << buf;
              if (dnd_ok) {
                std::snprintf(buf, sizeof buf, " %11.3f", dnd);
                os << buf;
              } else {
                os << "           -";
              }
              os << '\n';
            }
          }
    });
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const sgt::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const sgt::InstanceTooLarge& e) {
    std::cerr << "instance too large: " << e.what() << "\n";
    return 3;
  } catch (const sgt::IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
