#include "mrt/random_signal.hpp"

#include <gsl/gsl_sf_expint.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "mrt/rng.hpp"

namespace mrt {

namespace {

// |pi/2 - Si(x)| <= sqrt(f^2 + g^2) with the auxiliary functions f < 1/x, g < 1/x^2.
double si_tail_bound(double x) { return std::sqrt(1.0 + 1.0 / (x * x)) / x; }

}  // namespace

BandlimitedStep::BandlimitedStep(double omega, std::vector<double> edges, std::vector<double> levels)
    : omega_(omega), edges_(std::move(edges)), levels_(std::move(levels)) {
  if (!(omega_ > 0.0)) throw DomainError("BandlimitedStep: omega must be positive");
  if (edges_.size() < 2 || levels_.size() + 1 != edges_.size()) {
    throw SizeError("BandlimitedStep: need edges.size() == levels.size() + 1 >= 2");
  }
  if (!std::is_sorted(edges_.begin(), edges_.end())) throw DomainError("BandlimitedStep: edges must be sorted");
  jumps_.resize(edges_.size());
  for (std::size_t j = 0; j < edges_.size(); ++j) {
    const double right = j < levels_.size() ? levels_[j] : 0.0;
    const double left = j > 0 ? levels_[j - 1] : 0.0;
    jumps_[j] = right - left;
    total_jump_ += std::abs(jumps_[j]);
  }
}

double BandlimitedStep::operator()(double t) const {
  double acc = 0.0;
  for (std::size_t j = 0; j < edges_.size(); ++j) {
    if (jumps_[j] != 0.0) acc += jumps_[j] * gsl_sf_Si(omega_ * (t - edges_[j]));
  }
  return acc / std::numbers::pi;
}

SampleSeq BandlimitedStep::sample(double T, Index first, Index last) const {
  if (last < first) throw SizeError("BandlimitedStep::sample: empty range");
  std::vector<double> v(static_cast<std::size_t>(last - first + 1));
  for (Index k = first; k <= last; ++k) v[static_cast<std::size_t>(k - first)] = (*this)(static_cast<double>(k) * T);
  return SampleSeq(first, std::move(v));
}

double BandlimitedStep::tail_envelope(double d) const {
  if (!(d > 0.0)) throw DomainError("tail_envelope: distance must be positive");
  // The jumps sum to zero, so Si may be shifted by -pi/2 (right tail) or
  // +pi/2 (left tail) in every term.
  return total_jump_ * si_tail_bound(omega_ * d) / std::numbers::pi;
}

namespace {

// Walks from `start` towards `stop` in certified steps: from a point with
// |g| = v < lambda no point within (lambda - v)/L can reach lambda, L a bound
// on |g'| over the step. Returns the point where the walk stalls (an
// exceedance within 1e-10), or `stop`.
double walk_to_exceedance(const BandlimitedStep& g, double lambda, double lipschitz, double start, double stop,
                          double total_jump) {
  const double dir = stop < start ? -1.0 : 1.0;
  const double lo = g.edges().front();
  const double hi = g.edges().back();
  // Outside the pieces, |g'(t)| <= (1/pi) sum |J_j| / dist(t, edges).
  auto slope_bound = [&](double a, double b) {
    const double dist = std::max(lo - std::max(a, b), std::min(a, b) - hi);
    return dist > 0.0 ? std::min(lipschitz, total_jump / (std::numbers::pi * dist)) : lipschitz;
  };
  double t = start;
  for (;;) {
    const double v = std::abs(g(t));
    if (v >= lambda) return t;
    const double room = lambda - v;
    double step = room / lipschitz;
    if (step < 1e-10) return t;
    for (int i = 0; i < 20; ++i) {
      const double wider = 2.0 * step;
      if (wider * slope_bound(t, t + dir * wider) > room) break;
      step = wider;
    }
    t += dir * step;
    if ((stop - t) * dir <= 0.0) return stop;
  }
}

}  // namespace

ExceedanceSignal random_lambda_exceedance(double omega, double lambda, std::uint64_t seed,
                                          const RandomSignalOptions& opt) {
  if (!(omega > 0.0) || !(lambda > 0.0)) throw DomainError("random_lambda_exceedance: omega, lambda must be positive");
  if (opt.breakpoints < 0 || !(opt.window > 0.0)) throw ConfigError("RandomSignalOptions: invalid values");

  Rng rng(seed);
  std::vector<double> edges;
  edges.reserve(static_cast<std::size_t>(opt.breakpoints) + 2);
  for (int i = 0; i < opt.breakpoints; ++i) edges.push_back(rng.uniform(-opt.window, opt.window));
  std::sort(edges.begin(), edges.end());
  edges.insert(edges.begin(), -opt.window);
  edges.push_back(opt.window);
  std::vector<double> levels(edges.size() - 1);
  for (double& c : levels) c = rng.uniform(-opt.level_bound, opt.level_bound);

  BandlimitedStep g(omega, std::move(edges), std::move(levels));
  const double lo = g.edges().front();
  const double hi = g.edges().back();

  // Distance beyond which the envelope certifies |g| < lambda.
  double d = 1.0 / omega;
  while (g.tail_envelope(d) >= lambda) d *= 2.0;
  double a = d / 2.0, b = d;
  if (g.tail_envelope(a) < lambda) a = 0.0;
  for (int i = 0; i < 60 && a > 0.0; ++i) {
    const double mid = 0.5 * (a + b);
    (g.tail_envelope(mid) < lambda ? b : a) = mid;
  }
  d = b;

  // Sup bound by a scan at step delta plus Bernstein's inequality |g'| <= omega ||g||.
  // The scan stops where the tail envelope falls below the peak already found.
  const double delta = 0.1 / omega;
  auto scan = [&](double a, double b) {
    double m = 0.0;
    const auto steps = static_cast<Index>(std::ceil((b - a) / delta));
    for (Index i = 0; i <= steps; ++i) m = std::max(m, std::abs(g(a + static_cast<double>(i) * delta)));
    return m;
  };
  double peak = scan(lo, hi);
  double reach = d;
  if (peak > 0.0) {
    double r = 1.0 / omega;
    while (r < d && g.tail_envelope(r) > peak) r *= 1.5;
    reach = std::min(r, d);
  }
  peak = std::max({peak, scan(lo - reach, lo), scan(hi, hi + reach)});
  const double sup_bound = std::max(peak / (1.0 - 0.5 * omega * delta), lambda);

  const double lipschitz = omega * sup_bound;
  const double right = walk_to_exceedance(g, lambda, lipschitz, hi + d, lo - d, g.total_jump());
  double rho = 0.0;
  if (right > lo - d) {
    const double left = walk_to_exceedance(g, lambda, lipschitz, lo - d, right, g.total_jump());
    rho = std::max(std::abs(right), std::abs(left));
  }
  return ExceedanceSignal{std::move(g), lambda, rho, peak, sup_bound};
}

}  // namespace mrt
