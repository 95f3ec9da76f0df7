#include "sgt/bits.hpp"

#include <stdexcept>

namespace sgt {

BitVector BitVector::from_string(std::string_view s) {
  BitVector v(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '1')
      v.set(i, true);
    else if (s[i] != '0')
      throw std::invalid_argument("BitVector::from_string: expected only '0'/'1'");
  }
  return v;
}

std::string BitVector::to_string() const {
  std::string s(bits_, '0');
  for (std::size_t i = 0; i < bits_; ++i)
    if (get(i)) s[i] = '1';
  return s;
}

BitVector BitMatrix::row_as_vector(std::size_t r) const {
  BitVector v(cols_);
  auto src = row(r);
  auto dst = v.words();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i];
  return v;
}

}  // namespace sgt
