#pragma once

#include <cstdint>
#include <vector>

#include "mrt/core.hpp"

namespace mrt {

/// g = (piecewise constant c) * Phi_omega, evaluated in closed form through
/// the sine integral: g(t) = (1/pi) sum_j J_j Si(omega (t - e_j)) with jumps
/// J_j = c_j - c_{j-1}.
class BandlimitedStep {
 public:
  /// edges strictly increasing, levels.size() == edges.size() - 1.
  BandlimitedStep(double omega, std::vector<double> edges, std::vector<double> levels);

  double operator()(double t) const;
  double omega() const noexcept { return omega_; }
  const std::vector<double>& edges() const noexcept { return edges_; }
  const std::vector<double>& levels() const noexcept { return levels_; }

  /// Samples g(kT) for k in [first, last].
  SampleSeq sample(double T, Index first, Index last) const;

  /// Upper bound on |g(t)| for t outside [edges.front() - d, edges.back() + d], d > 0.
  double tail_envelope(double d) const;
  /// sum_j |J_j|.
  double total_jump() const noexcept { return total_jump_; }

 private:
  double omega_;
  std::vector<double> edges_;
  std::vector<double> levels_;
  std::vector<double> jumps_;
  double total_jump_ = 0.0;
};

struct RandomSignalOptions {
  int breakpoints = 20;       // interior breakpoints, uniform on the window
  double window = 1.0;        // pieces live on [-window, window]
  double level_bound = 1.0;   // levels uniform on [-level_bound, level_bound]
};

/// A realization with its certified exceedance radius and amplitude bound.
struct ExceedanceSignal {
  BandlimitedStep g;
  double lambda;
  double rho;        // |g(t)| < lambda for |t| > rho
  double peak;       // max |g| over a fine scan (a lower bound on the sup norm)
  double sup_bound;  // certified upper bound on the sup norm
};

ExceedanceSignal random_lambda_exceedance(double omega, double lambda, std::uint64_t seed,
                                          const RandomSignalOptions& opt = {});

}  // namespace mrt
