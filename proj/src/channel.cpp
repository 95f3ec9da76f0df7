#include "sgt/channel.hpp"

#include <stdexcept>

#include "sgt/rng.hpp"

namespace sgt {

std::string EveView::to_string() const {
  std::string s(size(), '?');
  for (std::size_t t = 0; t < size(); ++t) {
    const int v = symbol(t);
    if (v != 2) s[t] = static_cast<char>('0' + v);
  }
  return s;
}

EveView EveView::from_string(std::string_view s) {
  EveView z;
  z.values = BitVector(s.size());
  z.kept = BitVector(s.size());
  for (std::size_t t = 0; t < s.size(); ++t) {
    switch (s[t]) {
      case '?':
        break;
      case '0':
        z.kept.set(t, true);
        ++z.kept_count;
        break;
      case '1':
        z.kept.set(t, true);
        z.values.set(t, true);
        ++z.kept_count;
        break;
      default:
        throw std::invalid_argument("EveView::from_string: expected '0'/'1'/'?'");
    }
  }
  return z;
}

OutcomeVector run_tests(const BitMatrix& design, std::span<const uint32_t> members) {
  OutcomeVector y(design.cols());
  auto acc = y.words();
  for (uint32_t j : members) {
    if (j >= design.rows()) throw std::out_of_range("run_tests: defective index out of range");
    bitops::or_into(acc, design.row(j));
  }
  return y;
}

OutcomeVector run_tests(const BitMatrix& design, const DefectiveSet& defectives) {
  return run_tests(design, std::span<const uint32_t>(defectives.members));
}

EveView eavesdrop(const OutcomeVector& y, double delta, uint64_t seed) {
  if (!(delta >= 0.0 && delta < 1.0))
    throw std::invalid_argument("eavesdrop: delta must be in [0, 1)");
  EveView z;
  const std::size_t t_count = y.size();
  z.values = BitVector(t_count);
  z.kept = BitVector(t_count);
  Rng rng(seed);
  const uint64_t thr = Rng::threshold53(delta);
  for (std::size_t t = 0; t < t_count; ++t) {
    if ((rng.next_u64() >> 11) < thr) {
      z.kept.set(t, true);
      if (y.get(t)) z.values.set(t, true);
      ++z.kept_count;
    }
  }
  return z;
}

}  // namespace sgt
