#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "mrt/core.hpp"
#include "mrt/rng.hpp"

using namespace mrt;

namespace {

// Binomial form of the N-th forward difference, used as an oracle.
std::vector<double> binomial_diff(const std::vector<double>& a, int N) {
  std::vector<double> out(a.size() - static_cast<std::size_t>(N));
  for (std::size_t k = 0; k < out.size(); ++k) {
    double acc = 0.0, c = 1.0;
    for (int m = 0; m <= N; ++m) {
      acc += ((N - m) % 2 == 0 ? 1.0 : -1.0) * c * a[k + static_cast<std::size_t>(m)];
      c = c * (N - m) / (m + 1);
    }
    out[k] = acc;
  }
  return out;
}

}  // namespace

TEST_CASE("threshold rejects non-positive lambda") {
  CHECK_THROWS_AS(Threshold(0.0), DomainError);
  CHECK_THROWS_AS(Threshold(-1.0), DomainError);
  CHECK_THROWS_AS(Threshold(std::numeric_limits<double>::infinity()), DomainError);
  CHECK(Threshold(0.25).period() == 0.5);
}

TEST_CASE("modulo fold examples") {
  const Threshold one(1.0);
  CHECK(modulo_fold(0.3, one) == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(modulo_fold(2.5, one) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(modulo_fold(-2.5, one) == doctest::Approx(-0.5).epsilon(1e-15));
  for (double lam : {1.0, 0.025, 0.00025, 3.7}) {
    CHECK(modulo_fold(lam, Threshold(lam)) == -lam);
    CHECK(modulo_fold(-lam, Threshold(lam)) == -lam);
  }
  CHECK_THROWS_AS(modulo_fold(std::nan(""), one), DomainError);
  CHECK_THROWS_AS(modulo_fold(std::numeric_limits<double>::infinity(), one), DomainError);
}

TEST_CASE("modulo decomposition and range on random inputs") {
  Rng rng(11);
  for (int i = 0; i < 20000; ++i) {
    const double lam = std::exp(rng.uniform(std::log(1e-4), std::log(10.0)));
    const double t = rng.uniform(-1.0, 1.0) * std::exp(rng.uniform(0.0, std::log(1e4)));
    const Threshold thr(lam);
    const double y = modulo_fold(t, thr);
    REQUIRE(y >= -lam);
    REQUIRE(y < lam);
    const double q = (t - y) / (2.0 * lam);
    REQUIRE(std::abs(q - std::round(q)) * 2.0 * lam <= 1e-12 * std::max(1.0, std::abs(t)));
    REQUIRE(fold_index(t, thr) == std::round(q));
  }
}

TEST_CASE("fold followed by adding back the fold count is exact") {
  Rng rng(5);
  for (int i = 0; i < 5000; ++i) {
    const Threshold thr(rng.uniform(1e-3, 1.0));
    const double t = rng.uniform(-50.0, 50.0);
    REQUIRE(modulo_fold(t, thr) + thr.period() * fold_index(t, thr) == t);
  }
}

TEST_CASE("sample sequences index by absolute position") {
  CHECK_THROWS_AS(SampleSeq(0, {}), SizeError);
  SampleSeq a(-2, {1.0, 2.0, 3.0});
  CHECK(a.last() == 0);
  CHECK(a[-2] == 1.0);
  CHECK(a.at(0) == 3.0);
  CHECK_THROWS_AS(a.at(1), DomainError);
  CHECK(a.covers(-2));
  CHECK_FALSE(a.covers(-3));
  CHECK(a.slice(-1, 0) == SampleSeq(-1, {2.0, 3.0}));
  CHECK_THROWS_AS(a.slice(-3, 0), SizeError);
}

TEST_CASE("forward differences") {
  CHECK(forward_diff(SampleSeq(0, {5, 5, 5, 5}), 1) == SampleSeq(0, {0, 0, 0}));
  CHECK(forward_diff(SampleSeq(0, {0, 1, 4, 9}), 1) == SampleSeq(0, {1, 3, 5}));
  const std::vector<double> sq{0, 1, 4, 9};
  CHECK(forward_diff(SampleSeq(0, sq), 2).values()[0] == binomial_diff(sq, 2)[0]);
  CHECK(forward_diff(SampleSeq(0, sq), 2) == SampleSeq(0, {2, 2}));
  CHECK(forward_diff(SampleSeq(-7, sq), 1).base() == -7);
  CHECK_THROWS_AS(forward_diff(SampleSeq(0, sq), 4), SizeError);
  CHECK_THROWS_AS(forward_diff(SampleSeq(0, sq), 0), DomainError);

  Rng rng(3);
  std::vector<double> ints(40), reals(40);
  for (std::size_t i = 0; i < ints.size(); ++i) {
    ints[i] = std::floor(rng.uniform(-1000.0, 1000.0));
    reals[i] = rng.uniform(-1.0, 1.0);
  }
  for (int N = 1; N <= 8; ++N) {
    // Integer data: exact agreement with the binomial formula.
    const auto want = binomial_diff(ints, N);
    const SampleSeq got = forward_diff(SampleSeq(3, ints), N);
    for (std::size_t k = 0; k < want.size(); ++k) REQUIRE(got.values()[k] == want[k]);
    // N-fold application of the first difference.
    SampleSeq step(3, reals);
    for (int i = 0; i < N; ++i) step = forward_diff(step, 1);
    REQUIRE(forward_diff(SampleSeq(3, reals), N) == step);
    const auto wr = binomial_diff(reals, N);
    for (std::size_t k = 0; k < wr.size(); ++k) REQUIRE(step.values()[k] == doctest::Approx(wr[k]).epsilon(1e-9));
  }
}

TEST_CASE("anti-difference anchored at the base index") {
  CHECK(anti_diff(SampleSeq(-1, {1, 3, 5})) == SampleSeq(-1, {0, 1, 4, 9}));
  CHECK(anti_diff(SampleSeq(4, {0, 0, 0})) == SampleSeq(4, {0, 0, 0, 0}));
  Rng rng(8);
  std::vector<double> v(30);
  for (double& x : v) x = std::floor(rng.uniform(-50.0, 50.0));
  const SampleSeq a(-12, v);
  const SampleSeq back = anti_diff(forward_diff(a, 1));
  for (Index k = a.base(); k <= a.last(); ++k) REQUIRE(back[k] + a[a.base()] == a[k]);
}

TEST_CASE("bilateral anti-difference anchored at zero") {
  CHECK(anti_diff_bilateral(SampleSeq(-2, {1, 1, 1, 1})) == SampleSeq(-2, {-2, -1, 0, 1, 2}));
  CHECK(anti_diff_bilateral(SampleSeq(-1, {0, 0})) == SampleSeq(-1, {0, 0, 0}));
  CHECK_THROWS_AS(anti_diff_bilateral(SampleSeq(1, {1, 2})), DomainError);
  CHECK_THROWS_AS(anti_diff_bilateral(SampleSeq(-3, {1, 2})), DomainError);
  const SampleSeq a(-5, {3, 1, 4, 1, 5, 9, 2, 6, 5, 3});
  const SampleSeq s = anti_diff_bilateral(forward_diff(a, 1));
  for (Index k = a.base(); k <= a.last(); ++k) REQUIRE(s[k] == a[k] - a[0]);
}

TEST_CASE("rounding to the 2 lambda grid") {
  for (double lam : {1.0, 0.05, 0.00025}) {
    const Threshold thr(lam);
    CHECK(round_to_2lambda(4.0 * lam, thr) == 4.0 * lam);
    CHECK(round_to_2lambda(0.0, thr) == 0.0);
    // 2 lambda * ceil(floor(2.3) / 2) = 2 lambda
    CHECK(round_to_2lambda(2.3 * lam, thr) == doctest::Approx(2.0 * lam));
  }
  Rng rng(21);
  for (int i = 0; i < 5000; ++i) {
    const Threshold thr(rng.uniform(1e-3, 2.0));
    const double x = rng.uniform(-100.0, 100.0);
    const double r = round_to_2lambda(x, thr);
    REQUIRE(grid_distance(r, thr) <= 1e-9 * thr.lambda());
    REQUIRE(round_to_2lambda(r, thr) == r);
    // Exact grid points perturbed by less than lambda come back to the grid point.
    const double g = thr.period() * std::round(x / thr.period());
    REQUIRE(round_to_2lambda(g + rng.uniform(-0.99, 0.99) * thr.lambda(), thr) == doctest::Approx(g));
  }
}

TEST_CASE("guarded floor and ceil snap near-integers") {
  CHECK(floor_guarded(3.0 - 1e-14) == 3.0);
  CHECK(ceil_guarded(3.0 + 1e-14) == 3.0);
  CHECK(floor_guarded(2.5) == 2.0);
  CHECK(ceil_guarded(2.5) == 3.0);
  CHECK(floor_guarded(-1.0 - 1e-15) == -1.0);
}
