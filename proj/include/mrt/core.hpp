#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mrt/errors.hpp"

namespace mrt {

using Index = std::int64_t;

/// Modulo half-range lambda. The centered fold maps every real into
/// [-lambda, lambda); the fold period is 2*lambda.
class Threshold {
 public:
  explicit Threshold(double lambda);

  double lambda() const noexcept { return lambda_; }
  double period() const noexcept { return 2.0 * lambda_; }

 private:
  double lambda_;
};

/// Finite sequence a[k] for k in [base, base + size). The base index may be
/// negative; indexing is by absolute index, never by offset.
class SampleSeq {
 public:
  SampleSeq(Index base, std::vector<double> values);

  Index base() const noexcept { return base_; }
  Index last() const noexcept { return base_ + static_cast<Index>(values_.size()) - 1; }
  std::size_t size() const noexcept { return values_.size(); }
  bool covers(Index k) const noexcept { return k >= base_ && k <= last(); }

  double operator[](Index k) const { return values_[static_cast<std::size_t>(k - base_)]; }
  double& operator[](Index k) { return values_[static_cast<std::size_t>(k - base_)]; }
  double at(Index k) const;

  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }

  /// Copy of the entries on [first, last]; both ends must be covered.
  SampleSeq slice(Index first, Index last) const;

  friend bool operator==(const SampleSeq&, const SampleSeq&) = default;

 private:
  Index base_;
  std::vector<double> values_;
};

/// floor/ceil that snap to the nearest integer when within a 1e-12 relative
/// guard band, so values sitting on grid lines are not misrounded.
double floor_guarded(double x);
double ceil_guarded(double x);

/// Number of periods removed by the fold: t = modulo_fold(t) + 2*lambda*q.
double fold_index(double t, Threshold thr);

/// M_lambda(t) = t - 2*lambda*floor((t + lambda) / (2*lambda)), in [-lambda, lambda).
double modulo_fold(double t, Threshold thr);

/// Elementwise fold of a sequence.
SampleSeq modulo_fold(const SampleSeq& a, Threshold thr);

/// N-th order forward difference; result has a.size() - order entries and the
/// same base index.
SampleSeq forward_diff(const SampleSeq& a, int order);

/// Finite anti-difference anchored at the base index:
/// (S a)[k] = sum_{j=base}^{k-1} a[j], for k in [base, base + size].
SampleSeq anti_diff(const SampleSeq& a);

/// Two-sided anti-difference anchored at index 0 (requires 0 to be covered):
/// S a[0] = 0, S a[k] = sum_{j=0}^{k-1} a[j] for k > 0,
/// S a[k] = -sum_{j=k}^{-1} a[j] for k < 0. Output covers [base, base + size].
SampleSeq anti_diff_bilateral(const SampleSeq& a);

/// 2*lambda * ceil(floor(x / lambda) / 2): nearest multiple of 2*lambda for
/// inputs within (-lambda, lambda) of the grid.
double round_to_2lambda(double x, Threshold thr);

/// Distance of x from the 2*lambda grid.
double grid_distance(double x, Threshold thr);

double max_abs(std::span<const double> v);

}  // namespace mrt
