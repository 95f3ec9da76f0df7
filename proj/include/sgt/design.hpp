#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "sgt/bits.hpp"
#include "sgt/combin.hpp"

namespace sgt {

// Which sign of eps_prime enters the bin-size exponent. Weak secrecy shrinks
// the bins (delta - eps'), strong secrecy enlarges them (delta + eps').
enum class SecrecyMode : uint8_t { weak = 0, strong = 1 };

struct DesignParams {
  uint32_t n_items = 0;      // N
  uint32_t n_defective = 0;  // K
  uint32_t n_tests = 0;      // T
  double delta = 0.0;        // eavesdropper observation probability
  double eps_prime = 0.0;    // bin-size slack
  double row_density = 0.0;  // Bernoulli parameter for codeword entries
  SecrecyMode mode = SecrecyMode::weak;

  // Exponent e with log2(M) = T*e/K.
  double bin_exponent() const {
    return mode == SecrecyMode::weak ? delta - eps_prime : delta + eps_prime;
  }

  void validate() const;  // throws ConfigError
};

// Fills row_density with its default ln2/k when density <= 0.
DesignParams design_params(uint32_t n, uint32_t k, uint32_t t, double delta, double eps_prime,
                           SecrecyMode mode, double row_density = 0.0);

// Rows per bin: round(2^(T*e/K)), clamped to >= 1.
uint64_t bin_size(const DesignParams& params);

// log2 of the realized integer M, the value bound computations should use.
double log2_bin_size(const DesignParams& params);

inline constexpr uint64_t kDefaultCodebookBitCap = 1ull << 33;

// The public testing codebook: N bins of M i.i.d. Bernoulli rows of T bits.
struct Codebook {
  DesignParams params;
  uint64_t m = 0;  // rows per bin
  uint64_t seed = 0;
  BitMatrix rows;  // (N*M) x T, row (bin, idx) at bin*m + idx

  std::span<const uint64_t> row(uint32_t bin, uint64_t idx) const {
    return rows.row(static_cast<std::size_t>(bin) * m + idx);
  }
  std::size_t words_per_row() const { return rows.words_per_row(); }
};

// Deterministic in (params, seed); rejects N*M*T above max_bits.
Codebook generate_codebook(const DesignParams& params, uint64_t seed,
                           uint64_t max_bits = kDefaultCodebookBitCap);

// Same, but with an explicit bin size (fixed-M sweeps).
Codebook generate_codebook_with_bin_size(const DesignParams& params, uint64_t m, uint64_t seed,
                                         uint64_t max_bits = kDefaultCodebookBitCap);

// Wrap explicit rows (tests, loader). rows must be (N*bin_size(params)) x T.
Codebook codebook_from_rows(const DesignParams& params, BitMatrix rows, uint64_t seed = 0);

// The mixer's private per-item row choice.
struct RowAssignment {
  std::vector<uint32_t> choices;  // one index in [0, M) per item
};

RowAssignment assign_rows(const Codebook& codebook, uint64_t seed);

// N x T matrix with row j = bins[j][choices[j]].
BitMatrix realize_design(const Codebook& codebook, const RowAssignment& assignment);

// Flat binary container ("SGT1"). Little-endian header, then N*M rows of
// ceil(T/8) bytes, row-major, LSB-first within each byte.
void save_codebook(const Codebook& codebook, std::ostream& out);
void save_codebook(const Codebook& codebook, const std::string& path);
Codebook load_codebook(std::istream& in);
Codebook load_codebook(const std::string& path);

}  // namespace sgt
