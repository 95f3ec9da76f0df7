#include "sgt/bounds.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "sgt/combin.hpp"

namespace sgt {
namespace {

void check_nk(uint32_t n, uint32_t k) {
  if (k == 0 || k >= n) throw std::invalid_argument("bounds: need 0 < K < N");
}

void check_delta(double delta) {
  if (!(delta >= 0.0 && delta < 1.0)) throw std::invalid_argument("bounds: delta must be in [0, 1)");
}

}  // namespace

double binary_entropy_bits(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("binary_entropy_bits: p in [0, 1]");
  if (p == 0.0 || p == 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

MlThreshold ml_tests_threshold(uint32_t n, uint32_t k, double delta, double eps) {
  check_nk(n, k);
  check_delta(delta);
  if (eps < 0.0) throw std::invalid_argument("bounds: eps must be >= 0");
  MlThreshold best;
  for (uint32_t i = 1; i <= k; ++i) {
    const double v =
        (1.0 + eps) / (1.0 - delta) * (double(k) / i) * log2_binomial(n - k, i);
    if (i == 1 || v > best.tests) {
      best.tests = v;
      best.argmax_i = i;
    }
  }
  return best;
}

double ml_tests_threshold_simple(uint32_t n, uint32_t k, double delta, double eps) {
  check_nk(n, k);
  check_delta(delta);
  if (eps < 0.0) throw std::invalid_argument("bounds: eps must be >= 0");
  return (1.0 + eps) / (1.0 - delta) * k * std::log2((n - k) * std::numbers::e);
}

double converse_tests_bound(uint32_t n, uint32_t k, double delta, double eps_t) {
  check_nk(n, k);
  check_delta(delta);
  return (1.0 - eps_t) / (1.0 - delta) * log2_binomial(n, k);
}

double dnd_delta_limit(uint32_t k) {
  if (k == 0) throw std::invalid_argument("dnd_delta_limit: K must be positive");
  return 0.5 * (1.0 - std::numbers::ln2 / k);
}

double dnd_tests_threshold(uint32_t n, uint32_t k, double delta, double eps) {
  check_nk(n, k);
  check_delta(delta);
  if (eps < 0.0) throw std::invalid_argument("bounds: eps must be >= 0");
  const double margin = dnd_delta_limit(k) - delta;
  if (margin <= 0.0)
    throw std::invalid_argument("dnd_tests_threshold: requires delta < (1 - ln2/K)/2");
  return (1.0 + eps) / margin * k * std::log2(double(n));
}

DndErrorBound dnd_error_bound(uint32_t n, uint32_t k, double delta, double beta) {
  check_nk(n, k);
  check_delta(delta);
  if (beta <= 0.0) throw std::invalid_argument("dnd_error_bound: beta must be positive");
  const double margin = dnd_delta_limit(k) - delta;
  if (margin <= 0.0)
    throw std::invalid_argument("dnd_error_bound: requires delta < (1 - ln2/K)/2");
  DndErrorBound b;
  b.epsilon = beta * margin - 1.0;
  b.bound = std::pow(double(n), -b.epsilon);
  return b;
}

double or_mutual_information(uint32_t i, uint32_t k, double q) {
  if (i < 1 || i > k) throw std::invalid_argument("or_mutual_information: need 1 <= i <= K");
  if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("or_mutual_information: q in (0, 1)");
  return std::pow(q, double(k - i)) * binary_entropy_bits(std::pow(q, double(i)));
}

MiBoundReport mi_bound_report(uint32_t k, std::span<const uint32_t> sample_is) {
  if (k < 2) throw std::invalid_argument("mi_bound_report: K must be >= 2");
  MiBoundReport rep;
  rep.q = 1.0 - std::numbers::ln2 / k;
  bool first = true;
  for (uint32_t i : sample_is) {
    MiBoundEntry e;
    e.i = i;
    e.closed_form = or_mutual_information(i, k, rep.q);
    e.target = double(i) / k;
    e.gap = e.closed_form - e.target;
    if (first || e.gap < rep.min_gap) rep.min_gap = e.gap;
    first = false;
    rep.entries.push_back(e);
  }
  return rep;
}

double gallager_exponent(double rho, uint32_t i, uint32_t k, double p) {
  if (!(rho >= 0.0 && rho <= 1.0))
    throw std::invalid_argument("gallager_exponent: rho must be in [0, 1]");
  if (i < 1 || i > k) throw std::invalid_argument("gallager_exponent: need 1 <= i <= K");
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("gallager_exponent: p in (0, 1)");
  const double q = 1.0 - p;
  const double p0_x1 = std::pow(q, double(i));      // P(X1 = 0)
  const double p0_x2 = std::pow(q, double(k - i));  // P(X2 = 0)
  const double px1[2] = {p0_x1, 1.0 - p0_x1};
  const double px2[2] = {p0_x2, 1.0 - p0_x2};
  const double s = 1.0 + rho;
  double outer = 0.0;
  for (int y = 0; y <= 1; ++y)
    for (int x2 = 0; x2 <= 1; ++x2) {
      double inner = 0.0;
      for (int x1 = 0; x1 <= 1; ++x1) {
        if (y != (x1 | x2)) continue;  // p(y, x2 | x1) = P(x2) * 1{y = x1 | x2}
        inner += px1[x1] * std::pow(px2[x2], 1.0 / s);
      }
      outer += std::pow(inner, s);
    }
  return -std::log2(outer);
}

MlErrorBounds ml_error_bound_single(uint32_t n, uint32_t k, uint32_t t, uint64_t m, uint32_t i,
                                    double rho, double p) {
  check_nk(n, k);
  if (t == 0 || m == 0) throw std::invalid_argument("ml_error_bound_single: need T, M >= 1");
  if (i < 1 || i > k) throw std::invalid_argument("ml_error_bound_single: need 1 <= i <= K");
  const double eo = gallager_exponent(rho, i, k, p);
  const double log2m = std::log2(static_cast<double>(m));
  const double exponent =
      -double(t) * eo + rho * (log2_binomial(n - k, i) + double(i) * log2m) + log2_binomial(k, i);
  MlErrorBounds b;
  b.single = std::exp2(exponent);
  b.with_union = std::exp2(exponent + double(k));
  return b;
}

MlErrorBoundTotal ml_error_bound(uint32_t n, uint32_t k, uint32_t t, uint64_t m, double p) {
  check_nk(n, k);
  MlErrorBoundTotal out;
  out.per_i.resize(k);
  out.rho_star.resize(k);
  double sum = 0.0;
  for (uint32_t i = 1; i <= k; ++i) {
    double best = 0.0, best_rho = 0.0;
    for (int g = 0; g <= 100; ++g) {
      const double rho = g / 100.0;
      const double v = ml_error_bound_single(n, k, t, m, i, rho, p).single;
      if (g == 0 || v < best) {
        best = v;
        best_rho = rho;
      }
    }
    out.per_i[i - 1] = best;
    out.rho_star[i - 1] = best_rho;
    sum += best;
  }
  out.total = std::exp2(double(k)) * sum;
  return out;
}

double secrecy_capacity(double delta, double capacity_nosec) {
  check_delta(delta);
  return (1.0 - delta) * capacity_nosec;
}

}  // namespace sgt
