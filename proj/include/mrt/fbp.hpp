#pragma once

#include <vector>

#include "mrt/core.hpp"
#include "mrt/forward.hpp"
#include "mrt/image.hpp"

namespace mrt {

enum class WindowKind { ram_lak, cosine, tabulated };

/// Reconstruction filter with spectrum |S| W(S / omega). Tabulated windows are
/// equispaced samples of W on [-1, 1], linearly interpolated.
struct FilterSpec {
  double omega = 0.0;
  WindowKind window = WindowKind::ram_lak;
  std::vector<double> table;

  static FilterSpec ram_lak(double omega);
  static FilterSpec cosine(double omega);
  static FilterSpec tabulated(double omega, std::vector<double> samples);

  /// Throws ConfigError unless omega > 0 and a tabulated window is finite,
  /// even and has at least two samples.
  void validate() const;
  /// W(s); zero for |s| > 1.
  double window_value(double s) const;
};

/// F(t) = (1/pi) int_0^omega w W(w/omega) cos(w t) dw: closed forms for
/// Ram-Lak and cosine, trapezoidal quadrature for tabulated windows.
double filter_kernel(const FilterSpec& spec, double t);

struct FilteredProjections {
  double T = 0.0;
  std::vector<SampleSeq> rows;  // each on [-K, K]
};

/// h_m(t_i) = sum_{k=-K}^{K} F(t_i - t_k) p_m(t_k), i in [-K, K]. The spacing
/// factor T is left to back_project.
FilteredProjections filter_projections(const Sinogram& s, const FilterSpec& spec);

/// f(x) = T/(2M) sum_m I_1 h_m(x1 cos theta_m + x2 sin theta_m) at each pixel
/// center, linear interpolation, zero outside the detector grid.
ImageGrid back_project(const FilteredProjections& h, const SamplingParams& params, ImageGrid grid);

ImageGrid fbp_reconstruct(const Sinogram& s, const FilterSpec& spec, ImageGrid grid);

double rmse(const ImageGrid& a, const ImageGrid& b);

}  // namespace mrt
