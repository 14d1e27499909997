#include "mrt/forward.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "mrt/bandlimit.hpp"
#include "mrt/parallel.hpp"

namespace mrt {

double SamplingParams::theta(int m) const { return static_cast<double>(m) * std::numbers::pi / M; }

double SamplingParams::oversampling_factor() const { return T * omega * std::numbers::e; }

void SamplingParams::validate() const {
  auto bad = [](const std::string& what) { throw ConfigError("SamplingParams: " + what); };
  if (!(omega > 0.0) || !std::isfinite(omega)) bad("omega must be positive");
  if (!(T > 0.0) || !std::isfinite(T)) bad("T must be positive");
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) bad("lambda must be non-negative");
  if (K < 1) bad("K must be at least 1");
  if (K_prime < K) bad("K_prime must be at least K");
  if (M < 1) bad("M must be at least 1");
  if (!(beta >= 0.0) || !(rho >= 0.0) || N < 0) bad("beta, rho and N must be non-negative");
}

bool SamplingParams::recovery_guaranteed() const {
  if (!(oversampling_factor() < 1.0)) return false;
  const double need = std::max(static_cast<double>(K), ceil_guarded(rho / T) + N);
  return static_cast<double>(K_prime) >= need;
}

bool SamplingParams::fbp_sampling_ok() const {
  return static_cast<double>(M) >= omega && static_cast<double>(K) * T >= 1.0;
}

namespace {

void check_rows(const SamplingParams& params, const std::vector<SampleSeq>& rows, const char* what) {
  if (rows.size() != static_cast<std::size_t>(params.M)) {
    throw SizeError(std::string(what) + ": expected " + std::to_string(params.M) + " rows, got " +
                    std::to_string(rows.size()));
  }
  for (std::size_t m = 0; m < rows.size(); ++m) {
    if (rows[m].base() != -params.K_prime || rows[m].last() != params.K) {
      throw SizeError(std::string(what) + ": row " + std::to_string(m) + " does not cover [-K', K]");
    }
  }
}

// Source grid s_j = j*h, j in [-J, J] with J*h >= 1.
Index support_half_width(double h) { return static_cast<Index>(std::ceil(1.0 / h)) + 1; }

std::vector<double> radon_on_grid(const Phantom& p, double theta, double h, Index J) {
  std::vector<double> r(static_cast<std::size_t>(2 * J + 1));
  for (Index j = -J; j <= J; ++j) r[static_cast<std::size_t>(j + J)] = radon_phantom(p, theta, static_cast<double>(j) * h);
  return r;
}

// Direct trapezoidal sum at one point; reference for the convergence probe.
double direct_prefilter(const Phantom& p, double theta, double t, double omega, double h) {
  const Index J = support_half_width(h);
  double acc = 0.0;
  for (Index j = -J; j <= J; ++j) {
    const double s = static_cast<double>(j) * h;
    const double r = radon_phantom(p, theta, s);
    if (r != 0.0) acc += r * ideal_lowpass(omega, t - s);
  }
  return h * acc;
}

// Smallest q = opt.subdivisions * 2^i whose probe values agree with 2q.
int choose_subdivisions(const Phantom& p, const std::vector<double>& thetas, const SamplingParams& params,
                        const PrefilterOptions& opt) {
  if (opt.subdivisions < 1 || opt.max_subdivisions < opt.subdivisions) {
    throw ConfigError("PrefilterOptions: invalid subdivision limits");
  }
  if (p.ellipses().empty() || opt.subdivisions == opt.max_subdivisions) return opt.subdivisions;
  const double T = params.T;
  const double probes[] = {0.0, std::round(0.37 / T) * T, std::round(-0.71 / T) * T};
  double scale = 0.0;
  for (double th : thetas) {
    for (int i = -400; i <= 400; ++i) scale = std::max(scale, std::abs(radon_phantom(p, th, i / 400.0)));
  }
  if (scale == 0.0) return opt.subdivisions;
  for (int q = opt.subdivisions; q < opt.max_subdivisions; q *= 2) {
    double worst = 0.0;
    for (double th : thetas) {
      for (double t : probes) {
        const double a = direct_prefilter(p, th, t, params.omega, T / q);
        const double b = direct_prefilter(p, th, t, params.omega, T / (2 * q));
        worst = std::max(worst, std::abs(a - b));
      }
    }
    if (worst <= opt.tolerance * scale) return q;
  }
  throw NumericError("prefilter quadrature did not converge within " + std::to_string(opt.max_subdivisions) +
                     " subdivisions");
}

class ProjectionFilter {
 public:
  ProjectionFilter(const SamplingParams& params, int q)
      : h_(params.T / q),
        J_(support_half_width(h_)),
        limiter_(params.omega, h_, q, -J_, J_, -params.K_prime, params.K),
        base_(-params.K_prime) {}

  SampleSeq row(const Phantom& p, double theta) const {
    return SampleSeq(base_, limiter_.apply(radon_on_grid(p, theta, h_, J_)));
  }

 private:
  double h_;
  Index J_;
  BandLimiter limiter_;
  Index base_;
};

}  // namespace

void Sinogram::validate() const { check_rows(params, rows, "Sinogram"); }

double Sinogram::max_abs() const {
  double m = 0.0;
  for (const auto& r : rows) m = std::max(m, mrt::max_abs(r.values()));
  return m;
}

void ModuloSinogram::validate() const { check_rows(params, rows, "ModuloSinogram"); }

SampleSeq prefilter_projection(const Phantom& p, double theta, const SamplingParams& params,
                               const PrefilterOptions& opt) {
  params.validate();
  const int q = choose_subdivisions(p, {theta}, params, opt);
  return ProjectionFilter(params, q).row(p, theta);
}

Sinogram make_sinogram(const Phantom& p, const SamplingParams& params, const PrefilterOptions& opt) {
  params.validate();
  std::vector<double> probe_angles;
  for (int m : {0, params.M / 3, (2 * params.M) / 3}) {
    const double th = params.theta(m);
    if (probe_angles.empty() || probe_angles.back() != th) probe_angles.push_back(th);
  }
  const int q = choose_subdivisions(p, probe_angles, params, opt);
  const ProjectionFilter filter(params, q);

  Sinogram s{params, std::vector<SampleSeq>(static_cast<std::size_t>(params.M), SampleSeq(0, {0.0}))};
  parallel_for(static_cast<std::size_t>(params.M),
               [&](std::size_t m) { s.rows[m] = filter.row(p, params.theta(static_cast<int>(m))); });
  return s;
}

Sinogram prefilter_samples(const Sinogram& raw, double omega, Index K_prime) {
  if (raw.rows.empty()) throw SizeError("prefilter_samples: no rows");
  SamplingParams params = raw.params;
  params.omega = omega;
  params.K_prime = K_prime;
  params.validate();
  const Index first = raw.rows.front().base();
  const Index last = raw.rows.front().last();
  for (const auto& r : raw.rows) {
    if (r.base() != first || r.last() != last) throw SizeError("prefilter_samples: rows differ in range");
  }
  const BandLimiter limiter(omega, params.T, 1, first, last, -K_prime, params.K);
  Sinogram s{params, std::vector<SampleSeq>(raw.rows.size(), SampleSeq(0, {0.0}))};
  parallel_for(raw.rows.size(), [&](std::size_t m) {
    s.rows[m] = SampleSeq(-K_prime, limiter.apply(raw.rows[m].values()));
  });
  return s;
}

ModuloSinogram fold_sinogram(const Sinogram& s, Threshold thr) {
  ModuloSinogram out{s.params, {}};
  out.params.lambda = thr.lambda();
  out.rows.reserve(s.rows.size());
  for (const auto& r : s.rows) out.rows.push_back(modulo_fold(r, thr));
  return out;
}

ModuloSinogram fold_sinogram(const Sinogram& s) {
  if (!(s.params.lambda > 0.0)) throw ConfigError("fold_sinogram: lambda is not set");
  return fold_sinogram(s, Threshold(s.params.lambda));
}

double exceedance_radius(const Sinogram& s, double lambda) {
  double rho = 0.0;
  for (const auto& r : s.rows) {
    for (Index k = r.base(); k <= r.last(); ++k) {
      if (std::abs(r[k]) >= lambda) rho = std::max(rho, std::abs(static_cast<double>(k)) * s.params.T);
    }
  }
  return rho;
}

double ceil_to_grid(double beta, Threshold thr) {
  return thr.period() * ceil_guarded(beta / thr.period());
}

}  // namespace mrt
