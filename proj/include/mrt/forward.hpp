#pragma once

#include <vector>

#include "mrt/core.hpp"
#include "mrt/phantom.hpp"

namespace mrt {

/// Every symbol of the sampling setup. Rows are sampled at t_k = k*T for
/// k in [-K_prime, K] and angles theta_m = m*pi/M. lambda, beta and rho may
/// be 0 while unknown (for example right after ingesting raw data).
struct SamplingParams {
  double omega = 0.0;
  double T = 0.0;
  double lambda = 0.0;
  Index K = 0;
  Index K_prime = 0;
  int M = 0;
  double beta = 0.0;
  double rho = 0.0;
  int N = 0;

  double theta(int m) const;
  std::size_t row_length() const { return static_cast<std::size_t>(K_prime + K + 1); }
  /// T * omega * e; recovery guarantees need this below 1.
  double oversampling_factor() const;

  /// Throws ConfigError on non-positive omega/T/K/M, negative lambda, or K_prime < K.
  void validate() const;
  /// T < 1/(omega e) and K_prime >= max(K, ceil(rho/T) + N).
  bool recovery_guaranteed() const;
  /// M >= omega and K >= 1/T.
  bool fbp_sampling_ok() const;

  friend bool operator==(const SamplingParams&, const SamplingParams&) = default;
};

struct Sinogram {
  SamplingParams params;
  std::vector<SampleSeq> rows;

  /// M rows, each on [-K_prime, K]. Throws SizeError otherwise.
  void validate() const;
  double max_abs() const;
  friend bool operator==(const Sinogram&, const Sinogram&) = default;
};

struct ModuloSinogram {
  SamplingParams params;
  std::vector<SampleSeq> rows;

  void validate() const;
  friend bool operator==(const ModuloSinogram&, const ModuloSinogram&) = default;
};

struct PrefilterOptions {
  int subdivisions = 16;       // quadrature step is T / subdivisions
  int max_subdivisions = 256;  // give up (NumericError) beyond this
  double tolerance = 1e-3;     // relative to max |R f|, checked at probe points
};

/// Samples of (R_theta f * Phi_omega)(kT) for k in [-K_prime, K], by the
/// trapezoidal rule on a grid of step T/q over the support [-1, 1].
SampleSeq prefilter_projection(const Phantom& p, double theta, const SamplingParams& params,
                               const PrefilterOptions& opt = {});

/// All M rows; the quadrature step is chosen once for the whole sinogram.
Sinogram make_sinogram(const Phantom& p, const SamplingParams& params, const PrefilterOptions& opt = {});

/// Low-pass filtering of already sampled rows: out[k] = T sum_j r[j] Phi((k - j) T)
/// for k in [-K_prime, K]. Input rows may cover any range; params.omega is
/// the target bandwidth.
Sinogram prefilter_samples(const Sinogram& raw, double omega, Index K_prime);

/// Elementwise centered fold with params.lambda (must be positive).
ModuloSinogram fold_sinogram(const Sinogram& s);
ModuloSinogram fold_sinogram(const Sinogram& s, Threshold thr);

/// Largest |t_k| over all rows with |p(t_k)| >= lambda, or 0 if none.
double exceedance_radius(const Sinogram& s, double lambda);

/// beta rounded up to the 2*lambda grid (smallest element of 2*lambda*Z that is >= beta).
double ceil_to_grid(double beta, Threshold thr);

}  // namespace mrt
