#pragma once

#include <complex>
#include <memory>
#include <span>
#include <vector>

#include "mrt/core.hpp"

namespace mrt {

/// Ideal low-pass kernel Phi(t) = sin(omega t) / (pi t), Phi(0) = omega / pi.
double ideal_lowpass(double omega, double t);

/// Discrete convolution with the ideal low-pass kernel, evaluated by FFT:
///
///   out[k] = step * sum_{j = src_first}^{src_last} src[j] * Phi((k * decimation - j) * step)
///
/// for k in [out_first, out_last]. Source samples sit at s_j = j * step and
/// outputs at t_k = k * decimation * step. Each output is a finite sum of
/// shifted kernels, so it is exactly band-limited to omega up to rounding.
///
/// Construction plans the transforms and is serialized internally; apply()
/// is safe to call concurrently.
class BandLimiter {
 public:
  BandLimiter(double omega, double step, int decimation, Index src_first, Index src_last,
              Index out_first, Index out_last);
  ~BandLimiter();
  BandLimiter(const BandLimiter&) = delete;
  BandLimiter& operator=(const BandLimiter&) = delete;

  std::vector<double> apply(std::span<const double> source) const;

  Index src_first() const noexcept { return src_first_; }
  Index src_last() const noexcept { return src_last_; }
  std::size_t fft_size() const noexcept { return fft_size_; }

 private:
  struct Plans;

  double step_;
  int decimation_;
  Index src_first_;
  Index src_last_;
  Index out_first_;
  Index out_last_;
  std::size_t fft_size_;
  std::vector<std::complex<double>> kernel_spectrum_;
  std::unique_ptr<Plans> plans_;
};

}  // namespace mrt
