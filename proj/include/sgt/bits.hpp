#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sgt {

inline constexpr std::size_t kWordBits = 64;

constexpr std::size_t words_for_bits(std::size_t bits) {
  return (bits + kWordBits - 1) / kWordBits;
}

// Packed bit vector. Bit t lives in word t/64 at position t%64; bits past
// size() are kept zero so whole-word operations need no tail masking.
class BitVector {
 public:
  BitVector() = default;
  explicit BitVector(std::size_t bits) : bits_(bits), words_(words_for_bits(bits), 0) {}

  static BitVector from_string(std::string_view s);  // e.g. "0101"

  std::size_t size() const { return bits_; }
  std::span<const uint64_t> words() const { return words_; }
  std::span<uint64_t> words() { return words_; }

  bool get(std::size_t i) const { return (words_[i / kWordBits] >> (i % kWordBits)) & 1u; }
  void set(std::size_t i, bool v) {
    const uint64_t m = 1ull << (i % kWordBits);
    if (v)
      words_[i / kWordBits] |= m;
    else
      words_[i / kWordBits] &= ~m;
  }

  std::size_t popcount() const {
    std::size_t n = 0;
    for (uint64_t w : words_) n += static_cast<std::size_t>(std::popcount(w));
    return n;
  }

  std::string to_string() const;

  friend bool operator==(const BitVector&, const BitVector&) = default;

 private:
  std::size_t bits_ = 0;
  std::vector<uint64_t> words_;
};

// Dense matrix of packed bit rows, row-major.
class BitMatrix {
 public:
  BitMatrix() = default;
  BitMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), wpr_(words_for_bits(cols)), words_(rows * wpr_, 0) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t words_per_row() const { return wpr_; }

  std::span<const uint64_t> row(std::size_t r) const { return {words_.data() + r * wpr_, wpr_}; }
  std::span<uint64_t> row(std::size_t r) { return {words_.data() + r * wpr_, wpr_}; }

  bool get(std::size_t r, std::size_t c) const {
    return (words_[r * wpr_ + c / kWordBits] >> (c % kWordBits)) & 1u;
  }
  void set(std::size_t r, std::size_t c, bool v) {
    const uint64_t m = 1ull << (c % kWordBits);
    uint64_t& w = words_[r * wpr_ + c / kWordBits];
    if (v)
      w |= m;
    else
      w &= ~m;
  }

  BitVector row_as_vector(std::size_t r) const;

  friend bool operator==(const BitMatrix&, const BitMatrix&) = default;

 private:
  std::size_t rows_ = 0, cols_ = 0, wpr_ = 0;
  std::vector<uint64_t> words_;
};

namespace bitops {

// true iff row has no 1 where y has 0 (row & ~y == 0)
inline bool covered_by(std::span<const uint64_t> row, std::span<const uint64_t> y) {
  for (std::size_t i = 0; i < row.size(); ++i)
    if (row[i] & ~y[i]) return false;
  return true;
}

inline void or_into(std::span<uint64_t> acc, std::span<const uint64_t> row) {
  for (std::size_t i = 0; i < acc.size(); ++i) acc[i] |= row[i];
}

inline bool equal(std::span<const uint64_t> a, std::span<const uint64_t> b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) return false;
  return true;
}

// true iff row agrees with vals on every masked position ((row ^ vals) & mask == 0)
inline bool matches_masked(std::span<const uint64_t> row, std::span<const uint64_t> vals,
                           std::span<const uint64_t> mask) {
  for (std::size_t i = 0; i < row.size(); ++i)
    if ((row[i] ^ vals[i]) & mask[i]) return false;
  return true;
}

}  // namespace bitops
}  // namespace sgt
