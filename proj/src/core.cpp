#include "mrt/core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mrt {

namespace {

constexpr double kGuard = 1e-12;

}  // namespace

Threshold::Threshold(double lambda) : lambda_(lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw DomainError("threshold must be positive and finite, got " + std::to_string(lambda));
  }
}

SampleSeq::SampleSeq(Index base, std::vector<double> values)
    : base_(base), values_(std::move(values)) {
  if (values_.empty()) throw SizeError("SampleSeq must be non-empty");
}

double SampleSeq::at(Index k) const {
  if (!covers(k)) {
    throw DomainError("index " + std::to_string(k) + " outside [" + std::to_string(base_) + ", " +
                      std::to_string(last()) + "]");
  }
  return (*this)[k];
}

SampleSeq SampleSeq::slice(Index first, Index last_index) const {
  if (first > last_index || !covers(first) || !covers(last_index)) {
    throw SizeError("slice [" + std::to_string(first) + ", " + std::to_string(last_index) +
                    "] not covered by [" + std::to_string(base_) + ", " + std::to_string(last()) + "]");
  }
  auto begin = values_.begin() + (first - base_);
  return SampleSeq(first, std::vector<double>(begin, begin + (last_index - first + 1)));
}

double floor_guarded(double x) {
  const double r = std::nearbyint(x);
  if (std::abs(x - r) <= kGuard * std::max(1.0, std::abs(x))) return r;
  return std::floor(x);
}

double ceil_guarded(double x) {
  const double r = std::nearbyint(x);
  if (std::abs(x - r) <= kGuard * std::max(1.0, std::abs(x))) return r;
  return std::ceil(x);
}

double fold_index(double t, Threshold thr) {
  if (!std::isfinite(t)) throw DomainError("modulo_fold: non-finite input");
  const double period = thr.period();
  double q = std::floor((t + thr.lambda()) / period);
  // The quotient may round across an integer near the interval ends.
  const double r = t - period * q;
  if (r >= thr.lambda()) {
    q += 1.0;
  } else if (r < -thr.lambda()) {
    q -= 1.0;
  }
  return q;
}

double modulo_fold(double t, Threshold thr) {
  return t - thr.period() * fold_index(t, thr);
}

SampleSeq modulo_fold(const SampleSeq& a, Threshold thr) {
  std::vector<double> out(a.size());
  std::ranges::transform(a.values(), out.begin(), [thr](double v) { return modulo_fold(v, thr); });
  return SampleSeq(a.base(), std::move(out));
}

SampleSeq forward_diff(const SampleSeq& a, int order) {
  if (order < 1) throw DomainError("forward_diff: order must be positive");
  if (a.size() <= static_cast<std::size_t>(order)) {
    throw SizeError("forward_diff: sequence of length " + std::to_string(a.size()) +
                    " too short for order " + std::to_string(order));
  }
  std::vector<double> v(a.values().begin(), a.values().end());
  for (int n = 0; n < order; ++n) {
    for (std::size_t k = 0; k + 1 < v.size(); ++k) v[k] = v[k + 1] - v[k];
    v.pop_back();
  }
  return SampleSeq(a.base(), std::move(v));
}

SampleSeq anti_diff(const SampleSeq& a) {
  std::vector<double> out(a.size() + 1);
  out[0] = 0.0;
  double acc = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    acc += a.values()[k];
    out[k + 1] = acc;
  }
  return SampleSeq(a.base(), std::move(out));
}

SampleSeq anti_diff_bilateral(const SampleSeq& a) {
  if (!a.covers(0)) {
    throw DomainError("anti_diff_bilateral: index 0 not covered by [" + std::to_string(a.base()) +
                      ", " + std::to_string(a.last()) + "]");
  }
  std::vector<double> out(a.size() + 1);
  const auto zero = static_cast<std::size_t>(-a.base());
  out[zero] = 0.0;
  double acc = 0.0;
  for (std::size_t k = zero; k < a.size(); ++k) {
    acc += a.values()[k];
    out[k + 1] = acc;
  }
  acc = 0.0;
  for (std::size_t k = zero; k-- > 0;) {
    acc -= a.values()[k];
    out[k] = acc;
  }
  return SampleSeq(a.base(), std::move(out));
}

double round_to_2lambda(double x, Threshold thr) {
  if (!std::isfinite(x)) throw DomainError("round_to_2lambda: non-finite input");
  return thr.period() * std::ceil(floor_guarded(x / thr.lambda()) / 2.0);
}

double grid_distance(double x, Threshold thr) {
  const double units = x / thr.period();
  return std::abs(units - std::nearbyint(units)) * thr.period();
}

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace mrt
