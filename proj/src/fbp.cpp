#include "mrt/fbp.hpp"

#include <cmath>
#include <numbers>

#include "mrt/parallel.hpp"

namespace mrt {

namespace {

// g(x) = sin(x)/x + (cos(x) - 1)/x^2, the Ram-Lak profile: F = (omega^2/pi) g(omega t).
double ramp_profile(double x) {
  const double ax = std::abs(x);
  if (ax < 0.5) {
    // sum_n (-1)^n x^{2n} (2n+1)/(2n+2)!
    const double x2 = x * x;
    double term = 1.0;  // x^{2n}
    double fact = 2.0;  // (2n+2)!
    double sum = 0.0;
    for (int n = 0; n < 10; ++n) {
      sum += (n % 2 == 0 ? 1.0 : -1.0) * term * (2.0 * n + 1.0) / fact;
      term *= x2;
      fact *= (2.0 * n + 3.0) * (2.0 * n + 4.0);
    }
    return sum;
  }
  return std::sin(x) / x + (std::cos(x) - 1.0) / (x * x);
}

double tabulated_kernel(const FilterSpec& spec, double t) {
  constexpr int n = 8192;
  const double dw = spec.omega / n;
  double acc = 0.0;
  for (int i = 1; i <= n; ++i) {
    const double w = i * dw;
    const double f = w * spec.window_value(w / spec.omega) * std::cos(w * t);
    acc += i == n ? 0.5 * f : f;
  }
  return acc * dw / std::numbers::pi;
}

}  // namespace

FilterSpec FilterSpec::ram_lak(double omega) { return FilterSpec{omega, WindowKind::ram_lak, {}}; }

FilterSpec FilterSpec::cosine(double omega) { return FilterSpec{omega, WindowKind::cosine, {}}; }

FilterSpec FilterSpec::tabulated(double omega, std::vector<double> samples) {
  FilterSpec f{omega, WindowKind::tabulated, std::move(samples)};
  f.validate();
  return f;
}

void FilterSpec::validate() const {
  if (!(omega > 0.0) || !std::isfinite(omega)) throw ConfigError("FilterSpec: omega must be positive");
  if (window != WindowKind::tabulated) return;
  if (table.size() < 2) throw ConfigError("FilterSpec: tabulated window needs at least two samples");
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (!std::isfinite(table[i])) throw ConfigError("FilterSpec: window samples must be finite");
    const double mirror = table[table.size() - 1 - i];
    if (std::abs(table[i] - mirror) > 1e-12 * std::max(1.0, std::abs(mirror))) {
      throw ConfigError("FilterSpec: window samples must be even");
    }
  }
}

double FilterSpec::window_value(double s) const {
  const double a = std::abs(s);
  if (a > 1.0) return 0.0;
  switch (window) {
    case WindowKind::ram_lak:
      return 1.0;
    case WindowKind::cosine:
      return std::cos(0.5 * std::numbers::pi * a);
    case WindowKind::tabulated: {
      const double pos = (a + 1.0) * 0.5 * static_cast<double>(table.size() - 1);
      const auto i = std::min(static_cast<std::size_t>(pos), table.size() - 2);
      const double frac = pos - static_cast<double>(i);
      return table[i] + frac * (table[i + 1] - table[i]);
    }
  }
  return 0.0;
}

double filter_kernel(const FilterSpec& spec, double t) {
  const double w = spec.omega;
  switch (spec.window) {
    case WindowKind::ram_lak:
      return w * w / std::numbers::pi * ramp_profile(w * t);
    case WindowKind::cosine: {
      const double c = 0.5 * std::numbers::pi / w;
      return w * w / (2.0 * std::numbers::pi) * (ramp_profile(w * (t + c)) + ramp_profile(w * (t - c)));
    }
    case WindowKind::tabulated:
      return tabulated_kernel(spec, t);
  }
  return 0.0;
}

FilteredProjections filter_projections(const Sinogram& s, const FilterSpec& spec) {
  spec.validate();
  s.validate();
  const Index K = s.params.K;
  const double T = s.params.T;
  // tab[l + 2K] = F(l T), l in [-2K, 2K]; F is even so F((i - k) T) = tab[k - i + 2K].
  std::vector<double> tab(static_cast<std::size_t>(4 * K + 1));
  for (Index l = 0; l <= 2 * K; ++l) {
    const double v = filter_kernel(spec, static_cast<double>(l) * T);
    tab[static_cast<std::size_t>(2 * K + l)] = v;
    tab[static_cast<std::size_t>(2 * K - l)] = v;
  }
  FilteredProjections h{T, std::vector<SampleSeq>(s.rows.size(), SampleSeq(0, {0.0}))};
  const auto n = static_cast<std::size_t>(2 * K + 1);
  parallel_for(s.rows.size(), [&](std::size_t m) {
    const double* p = &s.rows[m].values()[static_cast<std::size_t>(s.params.K_prime - K)];
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double* f = &tab[2 * static_cast<std::size_t>(K) - i];
      double acc = 0.0;
      for (std::size_t k = 0; k < n; ++k) acc += f[k] * p[k];
      out[i] = acc;
    }
    h.rows[m] = SampleSeq(-K, std::move(out));
  });
  return h;
}

ImageGrid back_project(const FilteredProjections& h, const SamplingParams& params, ImageGrid grid) {
  if (grid.width() == 0 || grid.height() == 0) throw DomainError("back_project: empty grid");
  if (h.rows.size() != static_cast<std::size_t>(params.M) || h.rows.empty()) {
    throw SizeError("back_project: row count differs from M");
  }
  const Index first = h.rows.front().base();
  const Index last = h.rows.front().last();
  for (const auto& r : h.rows) {
    if (r.base() != first || r.last() != last) throw SizeError("back_project: rows differ in range");
  }
  const int M = params.M;
  std::vector<double> cs(static_cast<std::size_t>(M)), sn(static_cast<std::size_t>(M));
  for (int m = 0; m < M; ++m) {
    cs[static_cast<std::size_t>(m)] = std::cos(params.theta(m));
    sn[static_cast<std::size_t>(m)] = std::sin(params.theta(m));
  }
  const double inv_T = 1.0 / h.T;
  const double scale = h.T / (2.0 * M);
  parallel_for(grid.height(), [&](std::size_t row) {
    for (std::size_t col = 0; col < grid.width(); ++col) {
      const auto [x, y] = grid.center(row, col);
      double acc = 0.0;
      for (int m = 0; m < M; ++m) {
        const double u = (x * cs[static_cast<std::size_t>(m)] + y * sn[static_cast<std::size_t>(m)]) * inv_T;
        const double fl = std::floor(u);
        const auto i = static_cast<Index>(fl);
        if (i < first || i > last) continue;
        const SampleSeq& r = h.rows[static_cast<std::size_t>(m)];
        if (i == last) {
          if (u == fl) acc += r[i];
          continue;
        }
        const double frac = u - fl;
        acc += r[i] + frac * (r[i + 1] - r[i]);
      }
      grid.at(row, col) = scale * acc;
    }
  });
  return grid;
}

ImageGrid fbp_reconstruct(const Sinogram& s, const FilterSpec& spec, ImageGrid grid) {
  return back_project(filter_projections(s, spec), s.params, std::move(grid));
}

double rmse(const ImageGrid& a, const ImageGrid& b) {
  if (!a.same_shape(b)) throw SizeError("rmse: images differ in shape");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.pixels().size(); ++i) {
    const double d = a.pixels()[i] - b.pixels()[i];
    acc += d * d;
  }
  return std::sqrt(acc / static_cast<double>(a.pixels().size()));
}

}  // namespace mrt
