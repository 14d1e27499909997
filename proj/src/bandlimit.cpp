#include "mrt/bandlimit.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <mutex>
#include <numbers>

namespace mrt {

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

// Smallest n >= target whose prime factors are 2, 3, 5 or 7.
std::size_t smooth_size(std::size_t target) {
  for (std::size_t n = std::max<std::size_t>(target, 1);; ++n) {
    std::size_t r = n;
    for (std::size_t p : {2u, 3u, 5u, 7u}) {
      while (r % p == 0) r /= p;
    }
    if (r == 1) return n;
  }
}

struct RealBuffer {
  explicit RealBuffer(std::size_t n) : data(fftw_alloc_real(n)) {
    if (data == nullptr) throw std::bad_alloc();
  }
  ~RealBuffer() { fftw_free(data); }
  RealBuffer(const RealBuffer&) = delete;
  RealBuffer& operator=(const RealBuffer&) = delete;
  double* data;
};

struct ComplexBuffer {
  explicit ComplexBuffer(std::size_t n) : data(fftw_alloc_complex(n)) {
    if (data == nullptr) throw std::bad_alloc();
  }
  ~ComplexBuffer() { fftw_free(data); }
  ComplexBuffer(const ComplexBuffer&) = delete;
  ComplexBuffer& operator=(const ComplexBuffer&) = delete;
  fftw_complex* data;
};

}  // namespace

double ideal_lowpass(double omega, double t) {
  if (t == 0.0) return omega / std::numbers::pi;
  return std::sin(omega * t) / (std::numbers::pi * t);
}

struct BandLimiter::Plans {
  fftw_plan forward = nullptr;
  fftw_plan inverse = nullptr;
  ~Plans() {
    std::lock_guard lock(planner_mutex());
    if (forward != nullptr) fftw_destroy_plan(forward);
    if (inverse != nullptr) fftw_destroy_plan(inverse);
  }
};

BandLimiter::BandLimiter(double omega, double step, int decimation, Index src_first,
                         Index src_last, Index out_first, Index out_last)
    : step_(step),
      decimation_(decimation),
      src_first_(src_first),
      src_last_(src_last),
      out_first_(out_first),
      out_last_(out_last),
      fft_size_(0),
      plans_(std::make_unique<Plans>()) {
  if (!(omega > 0.0) || !(step > 0.0) || decimation < 1) {
    throw DomainError("BandLimiter: omega, step and decimation must be positive");
  }
  if (src_first > src_last || out_first > out_last) {
    throw SizeError("BandLimiter: empty source or output range");
  }
  // Lags m = n - j span [n_first - src_last, n_last - src_first].
  const Index n_first = out_first * decimation;
  const Index n_last = out_last * decimation;
  const Index lag_first = n_first - src_last;
  const auto lag_count = static_cast<std::size_t>(n_last - src_first - lag_first + 1);
  fft_size_ = smooth_size(lag_count);

  const std::size_t bins = fft_size_ / 2 + 1;
  RealBuffer real(fft_size_);
  ComplexBuffer spec(bins);
  {
    std::lock_guard lock(planner_mutex());
    plans_->forward = fftw_plan_dft_r2c_1d(static_cast<int>(fft_size_), real.data, spec.data,
                                           FFTW_ESTIMATE);
    plans_->inverse = fftw_plan_dft_c2r_1d(static_cast<int>(fft_size_), spec.data, real.data,
                                           FFTW_ESTIMATE);
  }
  if (plans_->forward == nullptr || plans_->inverse == nullptr) {
    throw NumericError("BandLimiter: FFT planning failed");
  }
  for (std::size_t b = 0; b < fft_size_; ++b) {
    real.data[b] = b < lag_count
                       ? ideal_lowpass(omega, static_cast<double>(lag_first + static_cast<Index>(b)) * step)
                       : 0.0;
  }
  fftw_execute_dft_r2c(plans_->forward, real.data, spec.data);
  kernel_spectrum_.resize(bins);
  for (std::size_t b = 0; b < bins; ++b) kernel_spectrum_[b] = {spec.data[b][0], spec.data[b][1]};
}

BandLimiter::~BandLimiter() = default;

std::vector<double> BandLimiter::apply(std::span<const double> source) const {
  const auto src_count = static_cast<std::size_t>(src_last_ - src_first_ + 1);
  if (source.size() != src_count) {
    throw SizeError("BandLimiter::apply: expected " + std::to_string(src_count) + " source samples, got " +
                    std::to_string(source.size()));
  }
  const std::size_t bins = fft_size_ / 2 + 1;
  RealBuffer real(fft_size_);
  ComplexBuffer spec(bins);
  std::memcpy(real.data, source.data(), src_count * sizeof(double));
  std::fill(real.data + src_count, real.data + fft_size_, 0.0);
  fftw_execute_dft_r2c(plans_->forward, real.data, spec.data);
  for (std::size_t b = 0; b < bins; ++b) {
    const std::complex<double> v = std::complex<double>(spec.data[b][0], spec.data[b][1]) * kernel_spectrum_[b];
    spec.data[b][0] = v.real();
    spec.data[b][1] = v.imag();
  }
  fftw_execute_dft_c2r(plans_->inverse, spec.data, real.data);

  // Linear-convolution index of output n is n - n_first + (src_count - 1).
  const double scale = step_ / static_cast<double>(fft_size_);
  const Index n_first = out_first_ * decimation_;
  std::vector<double> out(static_cast<std::size_t>(out_last_ - out_first_ + 1));
  for (Index k = out_first_; k <= out_last_; ++k) {
    const Index n = k * decimation_;
    const auto i = static_cast<std::size_t>(n - n_first) + src_count - 1;
    out[static_cast<std::size_t>(k - out_first_)] = real.data[i] * scale;
  }
  return out;
}

}  // namespace mrt
