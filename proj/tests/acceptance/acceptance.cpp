// Acceptance checks: one PASS/FAIL line per criterion. Exit status is 0 when
// every check passes apart from those tagged as known deviations.

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <string>

#include "../oracles.hpp"
#include "mrt/core.hpp"
#include "mrt/experiment.hpp"
#include "mrt/rng.hpp"
#include "mrt/sinogram_io.hpp"

using namespace mrt;

namespace {

struct Tally {
  int pass = 0;
  int fail = 0;
  int known = 0;

  void check(const std::string& id, bool ok, const std::string& what, bool known_deviation = false) {
    std::string tag = ok ? "PASS" : "FAIL";
    std::string suffix = (!ok && known_deviation) ? " [known deviation]" : "";
    std::printf("%s %s %s%s\n", tag.c_str(), id.c_str(), what.c_str(), suffix.c_str());
    std::fflush(stdout);
    if (ok) {
      ++pass;
    } else if (known_deviation) {
      ++known;
    } else {
      ++fail;
    }
  }
  static void info(const std::string& id, const std::string& what) {
    std::printf("INFO %s %s\n", id.c_str(), what.c_str());
    std::fflush(stdout);
  }
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// 1. Exact recovery at the unlimited-sampling rate.
void exact_unfold_suite(Tally& tally, int trials) {
  const auto t0 = std::chrono::steady_clock::now();
  for (double lambda : {0.1, 0.05}) {
    for (int w : {10, 20, 30}) {
      const double omega = w * std::numbers::pi;
      const double T = (1.0 - 1e-6) / (omega * std::numbers::e);
      const int N = sweep_base_order(lambda);
      int ok = 0;
      double worst = 0.0;
      for (int i = 0; i < trials; ++i) {
        const ExceedanceSignal sig = random_lambda_exceedance(omega, lambda, derive_seed(2021, static_cast<std::uint64_t>(i)));
        const TrialOutcome o = recovery_trial(sig, T, N, 1e-9);
        ok += o.success ? 1 : 0;
        worst = std::max(worst, o.max_error);
      }
      const double rate = static_cast<double>(ok) / trials;
      tally.check(fmt("1[lambda=%g,omega=%dpi]", lambda, w), rate == 1.0,
                  fmt("success rate %.3f over %d trials (N=%d, max error %.3g)", rate, trials, N, worst));
    }
  }
  Tally::info("1", fmt("runtime %.1f s", seconds_since(t0)));
}

// Largest |R f| over the sampling grid itself, without the low-pass filter.
double raw_grid_max(const Phantom& p, const SamplingParams& params) {
  double m = 0.0;
  for (int a = 0; a < params.M; ++a) {
    for (Index k = -params.K; k <= params.K; ++k) {
      m = std::max(m, std::abs(radon_phantom(p, params.theta(a), static_cast<double>(k) * params.T)));
    }
  }
  return m;
}

// 2. Shepp-Logan parity and sample costs.
void shepp_logan_suite(Tally& tally) {
  const double omega = 300.0;
  const Phantom sl = shepp_logan();
  struct Case {
    double lambda;
    Index K_prime_expected;
    bool known;
  };
  for (const Case& c : {Case{0.025, 1631, false}, Case{0.00025, 3793, true}}) {
    const auto t0 = std::chrono::steady_clock::now();
    PlanOptions o;
    o.omega = omega;
    o.T = 1.0 / (2.0 * omega * std::numbers::e);
    o.K = 1631;
    o.M = 300;
    o.lambda = c.lambda;
    const Plan plan = plan_phantom(sl, o);
    const PipelineResult r = run_pipeline(plan, FilterSpec::cosine(omega), 256, sl);
    const SamplingParams& p = plan.params;
    const std::string id = fmt("2[lambda=%g]", c.lambda);
    tally.check(id + "(a)", r.rows_ok && r.max_unfold_error <= 1e-9,
                fmt("max |unfolded - clean| = %.3g over %d rows", r.max_unfold_error, p.M));
    tally.check(id + "(b)", r.images_identical,
                fmt("US-FBP vs FBP max pixel difference %.3g; RMSE %.6f vs %.6f", r.parity_delta, *r.rmse_fbp,
                    *r.rmse_usfbp));
    tally.check(id + "(c)", p.K_prime == c.K_prime_expected,
                fmt("K' = %lld (expected %lld); N = %d, beta = %.5f, rho = %.6f (rho/T = %.1f)",
                    static_cast<long long>(p.K_prime), static_cast<long long>(c.K_prime_expected), p.N, p.beta,
                    p.rho, p.rho / p.T),
                c.known);
    double lo = 0.0, hi = 0.0;
    for (const auto& row : plan.clean.rows) {
      for (double v : row.values()) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
    }
    Tally::info(id, fmt("dynamic range compression (max - min) / (2 lambda) = %.2f; runtime %.1f s",
                        (hi - lo) / (2.0 * c.lambda), seconds_since(t0)));
    if (c.lambda != 0.00025) continue;

    // Counterpart cost of the general algorithm.
    const Threshold thr(c.lambda);
    const double raw_max = raw_grid_max(sl, p);
    const UnfoldConfig raw_cfg{c.lambda, ceil_to_grid(raw_max, thr), omega, p.T, UnfoldMode::general, {}, {}};
    const Index J = general_window(raw_cfg);
    const int N = select_order(raw_cfg);
    Tally::info(id + "(d)", fmt("margin rule: beta_f = %.5f, J = %lld, N = %d (extra %lld)", plan.beta_general,
                                static_cast<long long>(plan.J_general), plan.N_general,
                                static_cast<long long>(plan.samples_general - (2 * p.K + 1))));
    tally.check(id + "(d)", J == 13320 && N == 12,
                fmt("grid-maximum rule: max |Rf| on the sampling grid %.6f -> beta_f = %.4f, J = %lld, N = %d",
                    raw_max, raw_cfg.beta, static_cast<long long>(J), N));
    const Index extra = sample_count_general(p.K, J, N) - (2 * p.K + 1);
    tally.check(id + "(d)", extra == 10071,
                fmt("general algorithm needs %lld extra samples per angle (expected 10071)",
                    static_cast<long long>(extra)),
                true);
    const double ratio = static_cast<double>(extra) / 2162.0;
    tally.check(id + "(d)", std::abs(ratio - 4.66) < 0.005, fmt("ratio vs 2162 = %.3f (expected 4.66)", ratio));
    const Index extra_compact = p.K_prime - p.K;
    Tally::info(id + "(d)", fmt("own compact margin %lld extra samples, ratio %.3f",
                                static_cast<long long>(extra_compact),
                                static_cast<double>(extra) / static_cast<double>(extra_compact)));
  }
}

// 3. Difference bound on band-limited samples.
void difference_bound_suite(Tally& tally) {
  const double omega = 10.0 * std::numbers::pi;
  double worst_ratio = 0.0;
  bool ok = true;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const ExceedanceSignal sig = random_lambda_exceedance(omega, 0.1, derive_seed(33, seed));
    const double x = 0.2 + 0.7 * static_cast<double>(seed % 8) / 7.0;
    const double T = x / (omega * std::numbers::e);
    const SampleSeq g = sig.g.sample(T, -static_cast<Index>(std::ceil(2.0 / T)), static_cast<Index>(std::ceil(2.0 / T)));
    for (int N = 1; N <= 6; ++N) {
      const double d = max_abs(forward_diff(g, N).values());
      const double bound = std::pow(x, N) * sig.sup_bound;
      ok = ok && d <= bound + 1e-9;
      worst_ratio = std::max(worst_ratio, d / bound);
    }
  }
  tally.check("3", ok, fmt("200 signals, N=1..6: max ||D^N g|| / ((T omega e)^N ||g||) = %.4f", worst_ratio));
}

// 4. Modulo decomposition.
void modulo_suite(Tally& tally) {
  Rng rng(4);
  bool ok = true;
  double worst = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double lambda = std::pow(10.0, rng.uniform(-4.0, 1.0));
    const double t = rng.uniform(-1.0, 1.0) * std::pow(10.0, rng.uniform(-3.0, 3.0));
    const Threshold thr(lambda);
    const double y = modulo_fold(t, thr);
    const double units = (t - y) / thr.period();
    const double dev = std::abs(t - y - thr.period() * std::nearbyint(units));
    worst = std::max(worst, dev / std::max(1.0, std::abs(t)));
    ok = ok && dev <= 1e-12 * std::max(1.0, std::abs(t)) && y >= -lambda && y < lambda;
  }
  tally.check("4", ok, fmt("1e5 random (t, lambda): worst relative grid deviation %.3g", worst));
}

// 5. Closed-form chords against line integration.
void oracle_suite(Tally& tally) {
  Rng rng(5);
  double worst = 0.0;
  int n = 0;
  while (n < 100) {
    const Ellipse e{rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5), rng.uniform(0.05, 0.5), rng.uniform(0.05, 0.5),
                    rng.uniform(0.0, std::numbers::pi), rng.uniform(-2.0, 2.0)};
    try {
      validate(e);
    } catch (const DomainError&) {
      continue;
    }
    const double th = rng.uniform(0.0, std::numbers::pi);
    const double t = rng.uniform(-0.9, 0.9);
    worst = std::max(worst, std::abs(radon_ellipse(e, th, t) - oracle::line_integral(e, th, t)));
    ++n;
  }
  tally.check("5", worst <= 1e-8, fmt("100 random triples: max |closed form - line integral| = %.3g", worst));
}

// 6. Success-rate sweep properties.
void sweep_suite(Tally& tally, int trials, int steps) {
  const auto t0 = std::chrono::steady_clock::now();
  for (double lambda : {0.1, 0.05}) {
    for (int w : {10, 20, 30}) {
      SweepOptions o;
      o.lambda = lambda;
      o.omega = w * std::numbers::pi;
      o.trials = trials;
      o.steps = steps;
      o.seed = 2021;
      const SweepResult r = run_success_sweep(o);
      const std::string id = fmt("6[lambda=%g,omega=%dpi]", lambda, w);

      bool a = true, b = true, c = true;
      double first_zero = -1.0;
      for (int j : o.multiples) {
        const int N = j * r.base_order;
        for (const SweepRow& row : r.rows) {
          if (row.N != N) continue;
          if (row.T <= r.T_us) a = a && row.success_rate == 1.0;
          if (j == 1 && row.t_ratio >= 0.5) b = b && row.success_rate == 0.0;
          if (j == 1 && first_zero < 0.0 && row.success_rate == 0.0) first_zero = row.t_ratio;
        }
      }
      for (std::size_t j = 1; j < o.multiples.size(); ++j) {
        const auto lo = r.rates(o.multiples[j - 1] * r.base_order);
        const auto hi = r.rates(o.multiples[j] * r.base_order);
        for (std::size_t i = 0; i < lo.size(); ++i) c = c && hi[i] >= lo[i];
      }
      tally.check(id + "(a)", a, "success rate 1.0 at T <= T_US for every N");
      tally.check(id + "(b)", b, fmt("base order N=%d: success rate 0 for T >= 0.5 T_Shannon (first zero at T/T_Shannon = %.3f)",
                                     r.base_order, first_zero));
      tally.check(id + "(c)", c, "higher-order curves dominate pointwise");
    }
  }
  Tally::info("6", fmt("%d trials x %d steps per cell, runtime %.1f s", trials, steps, seconds_since(t0)));
}

// 7. Externally sampled data through ingest, planning and the pipeline.
void walnut_suite(Tally& tally) {
  const auto t0 = std::chrono::steady_clock::now();
  const double omega = 300.0;
  const Index K = 1128;
  const int M = 600;
  std::string path;
  std::string source;
  if (const char* env = std::getenv("MRT_WALNUT_CSV"); env != nullptr && std::filesystem::exists(env)) {
    path = env;
    source = "dataset " + path;
  } else {
    const auto dir = std::filesystem::temp_directory_path() / "mrt_acceptance";
    std::filesystem::create_directories(dir);
    path = (dir / "walnut_standin.csv").string();
    const Phantom w = walnut_standin();
    std::ofstream out(path);
    out << "# walnut stand-in line integrals, M=600 angles, t_k = k/1128\n";
    for (int m = 0; m < M; ++m) {
      const double th = m * std::numbers::pi / M;
      for (Index k = -K; k <= K; ++k) {
        out << format_double(radon_phantom(w, th, static_cast<double>(k) / static_cast<double>(K)))
            << (k == K ? '\n' : ',');
      }
    }
    source = "synthetic stand-in";
  }
  IngestOptions io;
  io.omega = omega;
  io.T = 1.0 / static_cast<double>(K);
  const Sinogram raw = ingest_sinogram(path, io);
  PlanOptions po;
  po.omega = omega;
  po.lambda = 0.025;
  const Plan plan = plan_samples(raw, po);
  const PipelineResult r = run_pipeline(plan, FilterSpec::cosine(omega), 256);
  tally.check("7", r.rows_ok && r.parity_delta < 1e-9,
              fmt("%s: M=%d, K=%lld, K'=%lld, N=%d, parity delta %.3g, max unfold error %.3g (%.1f s)",
                  source.c_str(), plan.params.M, static_cast<long long>(plan.params.K),
                  static_cast<long long>(plan.params.K_prime), plan.params.N, r.parity_delta, r.max_unfold_error,
                  seconds_since(t0)));
}

// 8. First order fails at half rate, second order recovers.
void downsample_suite(Tally& tally) {
  const DownsampleResult r = run_downsample_demo(DownsampleOptions{});
  const DownsampleCase& full = r.cases.at(0);
  const DownsampleCase& half1 = r.cases.at(1);
  const DownsampleCase& half2 = r.cases.at(2);
  tally.check("8", full.report.success && !half1.report.success && half1.max_error > 0.0 && half2.report.success &&
                       half2.max_error <= 1e-9,
              fmt("seed %llu: full rate N=1 error %.3g; half rate N=1 flagged=%d error %.3g; half rate N=2 error %.3g",
                  static_cast<unsigned long long>(r.seed), full.max_error, half1.report.success ? 0 : 1,
                  half1.max_error, half2.max_error));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance checks"};
  bool full = false;
  app.add_flag("--full", full, "1000 trials per cell and 100 sweep steps");
  CLI11_PARSE(app, argc, argv);
  const int trials = full ? 1000 : 100;
  const int steps = full ? 100 : 25;

  Tally tally;
  try {
    modulo_suite(tally);
    oracle_suite(tally);
    difference_bound_suite(tally);
    exact_unfold_suite(tally, trials);
    downsample_suite(tally);
    sweep_suite(tally, trials, steps);
    walnut_suite(tally);
    shepp_logan_suite(tally);
  } catch (const std::exception& e) {
    std::printf("FAIL error: %s\n", e.what());
    return 1;
  }
  std::printf("SUMMARY %d passed, %d failed, %d known deviations\n", tally.pass, tally.fail, tally.known);
  return tally.fail == 0 ? 0 : 1;
}
