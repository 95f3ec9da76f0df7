#include "sgt/design.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <ostream>
#include <sstream>

#include "sgt/errors.hpp"
#include "sgt/rng.hpp"

namespace sgt {
namespace {

constexpr char kMagic[4] = {'S', 'G', 'T', '1'};

void put_u64(std::ostream& out, uint64_t v) {
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  out.write(b, 8);
}

void put_f64(std::ostream& out, double v) {
  uint64_t u;
  std::memcpy(&u, &v, 8);
  put_u64(out, u);
}

uint64_t get_u64(std::istream& in) {
  unsigned char b[8];
  if (!in.read(reinterpret_cast<char*>(b), 8)) throw IoError("codebook: truncated header");
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(b[i]) << (8 * i);
  return v;
}

double get_f64(std::istream& in) {
  uint64_t u = get_u64(in);
  double v;
  std::memcpy(&v, &u, 8);
  return v;
}

}  // namespace

void DesignParams::validate() const {
  if (n_items == 0) throw ConfigError("n must be positive");
  if (n_defective == 0 || n_defective >= n_items)
    throw ConfigError("k must satisfy 0 < k < n");
  if (n_tests == 0) throw ConfigError("t must be positive");
  if (!(delta >= 0.0 && delta < 1.0)) throw ConfigError("delta must be in [0, 1)");
  if (!(eps_prime >= 0.0)) throw ConfigError("eps_prime must be >= 0");
  if (mode == SecrecyMode::weak && delta - eps_prime < 0.0)
    throw ConfigError("weak mode requires delta - eps_prime >= 0");
  if (!(row_density > 0.0 && row_density < 1.0))
    throw ConfigError("row_density must be in (0, 1)");
}

DesignParams design_params(uint32_t n, uint32_t k, uint32_t t, double delta, double eps_prime,
                           SecrecyMode mode, double row_density) {
  DesignParams p;
  p.n_items = n;
  p.n_defective = k;
  p.n_tests = t;
  p.delta = delta;
  p.eps_prime = eps_prime;
  p.mode = mode;
  p.row_density = row_density > 0.0 ? row_density : std::log(2.0) / k;
  p.validate();
  return p;
}

uint64_t bin_size(const DesignParams& params) {
  const double log2m = double(params.n_tests) * params.bin_exponent() / params.n_defective;
  const double m = std::exp2(log2m);
  if (m >= 9.2e18) throw InstanceTooLarge("bin_size: M does not fit in uint64");
  const auto rounded = static_cast<uint64_t>(std::llround(m));
  return rounded < 1 ? 1 : rounded;
}

double log2_bin_size(const DesignParams& params) {
  return std::log2(static_cast<double>(bin_size(params)));
}

Codebook generate_codebook_with_bin_size(const DesignParams& params, uint64_t m, uint64_t seed,
                                         uint64_t max_bits) {
  params.validate();
  if (m == 0) throw ConfigError("bin size must be positive");
  const uint64_t total_bits =
      sat_mul(sat_mul(params.n_items, m, UINT64_MAX), params.n_tests, UINT64_MAX);
  if (total_bits > max_bits)
    throw InstanceTooLarge("generate_codebook: N*M*T exceeds the memory cap");

  Codebook cb;
  cb.params = params;
  cb.m = m;
  cb.seed = seed;
  cb.rows = BitMatrix(static_cast<std::size_t>(params.n_items) * m, params.n_tests);

  Rng rng(seed);
  const uint64_t thr = Rng::threshold53(params.row_density);
  const std::size_t n_rows = cb.rows.rows();
  const std::size_t t = params.n_tests;
  for (std::size_t r = 0; r < n_rows; ++r) {
    auto row = cb.rows.row(r);
    uint64_t word = 0;
    for (std::size_t c = 0; c < t; ++c) {
      if ((rng.next_u64() >> 11) < thr) word |= 1ull << (c % kWordBits);
      if ((c + 1) % kWordBits == 0 || c + 1 == t) {
        row[c / kWordBits] = word;
        word = 0;
      }
    }
  }
  return cb;
}

Codebook generate_codebook(const DesignParams& params, uint64_t seed, uint64_t max_bits) {
  return generate_codebook_with_bin_size(params, bin_size(params), seed, max_bits);
}

Codebook codebook_from_rows(const DesignParams& params, BitMatrix rows, uint64_t seed) {
  params.validate();
  const uint64_t m = bin_size(params);
  if (rows.rows() != static_cast<std::size_t>(params.n_items) * m ||
      rows.cols() != params.n_tests)
    throw ConfigError("codebook_from_rows: row matrix does not match params");
  Codebook cb;
  cb.params = params;
  cb.m = m;
  cb.seed = seed;
  cb.rows = std::move(rows);
  return cb;
}

RowAssignment assign_rows(const Codebook& codebook, uint64_t seed) {
  RowAssignment a;
  a.choices.resize(codebook.params.n_items);
  Rng rng(seed);
  for (auto& c : a.choices) c = static_cast<uint32_t>(rng.uniform_below(codebook.m));
  return a;
}

BitMatrix realize_design(const Codebook& codebook, const RowAssignment& assignment) {
  const uint32_t n = codebook.params.n_items;
  if (assignment.choices.size() != n)
    throw ConfigError("realize_design: assignment size does not match N");
  BitMatrix design(n, codebook.params.n_tests);
  for (uint32_t j = 0; j < n; ++j) {
    if (assignment.choices[j] >= codebook.m)
      throw ConfigError("realize_design: row choice out of range");
    auto src = codebook.row(j, assignment.choices[j]);
    auto dst = design.row(j);
    for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i];
  }
  return design;
}

void save_codebook(const Codebook& codebook, std::ostream& out) {
  out.write(kMagic, 4);
  put_u64(out, codebook.params.n_items);
  put_u64(out, codebook.params.n_defective);
  put_u64(out, codebook.params.n_tests);
  put_u64(out, codebook.m);
  put_f64(out, codebook.params.delta);
  put_f64(out, codebook.params.eps_prime);
  put_f64(out, codebook.params.row_density);
  out.put(static_cast<char>(codebook.params.mode));
  put_u64(out, codebook.seed);

  const std::size_t row_bytes = (codebook.params.n_tests + 7) / 8;
  const std::size_t n_rows = codebook.rows.rows();
  std::vector<char> buf(row_bytes);
  for (std::size_t r = 0; r < n_rows; ++r) {
    auto row = codebook.rows.row(r);
    for (std::size_t b = 0; b < row_bytes; ++b)
      buf[b] = static_cast<char>((row[b / 8] >> (8 * (b % 8))) & 0xFF);
    out.write(buf.data(), static_cast<std::streamsize>(row_bytes));
  }
  if (!out) throw IoError("codebook: write failed");
}

void save_codebook(const Codebook& codebook, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open for writing: " + path);
  save_codebook(codebook, f);
}

Codebook load_codebook(std::istream& in) {
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0)
    throw IoError("codebook: bad magic");
  DesignParams p;
  const uint64_t n = get_u64(in);
  const uint64_t k = get_u64(in);
  const uint64_t t = get_u64(in);
  const uint64_t m = get_u64(in);
  p.delta = get_f64(in);
  p.eps_prime = get_f64(in);
  p.row_density = get_f64(in);
  const int mode = in.get();
  if (mode != 0 && mode != 1) throw IoError("codebook: bad mode byte");
  p.mode = static_cast<SecrecyMode>(mode);
  const uint64_t seed = get_u64(in);
  if (n > UINT32_MAX || k > UINT32_MAX || t > UINT32_MAX)
    throw IoError("codebook: dimensions out of range");
  p.n_items = static_cast<uint32_t>(n);
  p.n_defective = static_cast<uint32_t>(k);
  p.n_tests = static_cast<uint32_t>(t);
  p.validate();
  if (m == 0 || m != bin_size(p)) throw IoError("codebook: bin size does not match params");

  Codebook cb;
  cb.params = p;
  cb.m = m;
  cb.seed = seed;
  cb.rows = BitMatrix(static_cast<std::size_t>(n) * m, p.n_tests);
  const std::size_t row_bytes = (p.n_tests + 7) / 8;
  std::vector<unsigned char> buf(row_bytes);
  for (std::size_t r = 0; r < cb.rows.rows(); ++r) {
    if (!in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(row_bytes)))
      throw IoError("codebook: truncated payload");
    auto row = cb.rows.row(r);
    for (std::size_t b = 0; b < row_bytes; ++b)
      row[b / 8] |= static_cast<uint64_t>(buf[b]) << (8 * (b % 8));
    // bits past T must be zero
    const std::size_t tail = p.n_tests % kWordBits;
    if (tail != 0 && (row.back() >> tail) != 0)
      throw IoError("codebook: nonzero padding bits");
  }
  if (in.peek() != std::istream::traits_type::eof())
    throw IoError("codebook: trailing bytes");
  return cb;
}

Codebook load_codebook(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open for reading: " + path);
  return load_codebook(f);
}

}  // namespace sgt
