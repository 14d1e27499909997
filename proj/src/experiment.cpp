#include "mrt/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "mrt/parallel.hpp"
#include "mrt/rng.hpp"
#include "mrt/sinogram_io.hpp"

namespace mrt {

// ---------------------------------------------------------------- planning

namespace {

Sinogram slice_rows(const Sinogram& s, const SamplingParams& params) {
  Sinogram out{params, {}};
  out.rows.reserve(s.rows.size());
  for (const auto& r : s.rows) out.rows.push_back(r.slice(-params.K_prime, params.K));
  return out;
}

}  // namespace

Plan plan_sinogram(const std::function<Sinogram(Index)>& rows, const PlanOptions& opt) {
  if (!(opt.lambda > 0.0)) throw ConfigError("plan: lambda must be positive");
  if (opt.K < 1 || opt.M < 1 || !(opt.T > 0.0) || !(opt.omega > 0.0)) throw ConfigError("plan: invalid grid");
  if (opt.K_prime && *opt.K_prime < opt.K) throw ConfigError("plan: K' must be at least K");
  const Threshold thr(opt.lambda);
  constexpr Index kScanLimit = Index{1} << 24;

  Index Kw = std::max(2 * opt.K, opt.K + 16);
  for (;;) {
    if (Kw > kScanLimit) throw NumericError("plan: exceedance radius does not fit a finite scan window");
    const Sinogram wide = rows(Kw);
    const double max_abs = wide.max_abs();
    const double rho = exceedance_radius(wide, opt.lambda);
    if (rho > static_cast<double>(Kw - 2) * opt.T) {
      Kw *= 2;
      continue;
    }
    const double beta = max_abs > 0.0 ? opt.beta_margin * max_abs : opt.lambda;
    UnfoldConfig cfg{opt.lambda, beta, opt.omega, opt.T, UnfoldMode::compact_exceedance, opt.order_override, rho};
    const int N = select_order(cfg);
    const Index K_prime = opt.K_prime.value_or(required_margin(rho, opt.T, N, opt.K));
    if (K_prime > Kw) {
      Kw = std::max(2 * Kw, K_prime);
      continue;
    }

    Plan plan;
    plan.params = SamplingParams{opt.omega, opt.T, opt.lambda, opt.K, K_prime, opt.M, beta, rho, N};
    plan.clean = slice_rows(wide, plan.params);
    plan.max_abs = max_abs;
    plan.scan_K = Kw;
    plan.beta_general = max_abs > 0.0 ? ceil_to_grid(opt.beta_margin * max_abs, thr) : thr.period();
    UnfoldConfig general{opt.lambda, plan.beta_general, opt.omega, opt.T, UnfoldMode::general, opt.order_override, {}};
    plan.N_general = select_order(general);
    plan.J_general = general_window(general);
    plan.samples_general = sample_count_general(opt.K, plan.J_general, plan.N_general);
    plan.samples_compact = sample_count_compact(rho, opt.T, opt.K, N);
    return plan;
  }
}

Plan plan_phantom(const Phantom& p, const PlanOptions& opt) {
  return plan_sinogram(
      [&](Index Kw) {
        SamplingParams wide{opt.omega, opt.T, opt.lambda, Kw, Kw, opt.M, 0.0, 0.0, 0};
        return make_sinogram(p, wide, opt.prefilter);
      },
      opt);
}

Plan plan_samples(const Sinogram& raw, PlanOptions opt) {
  if (raw.rows.empty()) throw SizeError("plan_samples: no rows");
  opt.T = raw.params.T;
  opt.K = raw.params.K;
  opt.M = static_cast<int>(raw.rows.size());
  return plan_sinogram(
      [&](Index Kw) {
        Sinogram src = raw;
        src.params.K = Kw;
        src.params.K_prime = Kw;
        return prefilter_samples(src, opt.omega, Kw);
      },
      opt);
}

// ---------------------------------------------------------------- pipeline

std::string PipelineResult::metrics_header() {
  return "label,lambda,omega,T,K,K_prime,M,N,beta,rho,max_abs,compression,max_unfold_error,rows_ok,"
         "rmse_fbp,rmse_usfbp,parity_delta,images_identical,J_general,N_general,extra_general,extra_compact";
}

std::string PipelineResult::metrics_line(const std::string& label) const {
  const SamplingParams& p = plan.params;
  double lo = 0.0, hi = 0.0;
  for (const auto& r : reference.rows) {
    for (double v : r.values()) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  const Index base = 2 * p.K + 1;
  std::ostringstream os;
  os << label << ',' << format_double(p.lambda) << ',' << format_double(p.omega) << ',' << format_double(p.T) << ','
     << p.K << ',' << p.K_prime << ',' << p.M << ',' << p.N << ',' << format_double(p.beta) << ','
     << format_double(p.rho) << ',' << format_double(plan.max_abs) << ',' << format_double((hi - lo) / (2 * p.lambda))
     << ',' << format_double(max_unfold_error) << ',' << (rows_ok ? 1 : 0) << ','
     << (rmse_fbp ? format_double(*rmse_fbp) : "") << ',' << (rmse_usfbp ? format_double(*rmse_usfbp) : "") << ','
     << format_double(parity_delta) << ',' << (images_identical ? 1 : 0) << ',' << plan.J_general << ','
     << plan.N_general << ',' << plan.samples_general - base << ',' << plan.samples_compact - base;
  return os.str();
}

PipelineResult run_pipeline(const Plan& plan, const FilterSpec& filter, std::size_t grid_size,
                            const std::optional<Phantom>& truth) {
  const SamplingParams& p = plan.params;
  PipelineResult r;
  r.plan = plan;
  r.folded = fold_sinogram(plan.clean, Threshold(p.lambda));
  const UnfoldConfig cfg{p.lambda, p.beta, p.omega, p.T, UnfoldMode::compact_exceedance, p.N, p.rho};
  r.unfolded = unfold_sinogram(r.folded, cfg, &r.reports);

  SamplingParams ref_params = p;
  ref_params.K_prime = p.K;
  r.reference = slice_rows(plan.clean, ref_params);
  for (std::size_t m = 0; m < r.reference.rows.size(); ++m) {
    const auto a = r.reference.rows[m].values();
    const auto b = r.unfolded.rows[m].values();
    for (std::size_t i = 0; i < a.size(); ++i) r.max_unfold_error = std::max(r.max_unfold_error, std::abs(a[i] - b[i]));
  }
  r.rows_ok = true;
  for (const auto& rep : r.reports) r.rows_ok = r.rows_ok && rep.success;

  r.fbp = fbp_reconstruct(r.reference, filter, ImageGrid(grid_size, grid_size));
  r.usfbp = fbp_reconstruct(r.unfolded, filter, ImageGrid(grid_size, grid_size));
  for (std::size_t i = 0; i < r.fbp.pixels().size(); ++i) {
    r.parity_delta = std::max(r.parity_delta, std::abs(r.fbp.pixels()[i] - r.usfbp.pixels()[i]));
  }
  r.images_identical = r.fbp == r.usfbp;
  if (truth) {
    r.truth = rasterize(*truth, ImageGrid(grid_size, grid_size));
    r.rmse_fbp = rmse(r.fbp, *r.truth);
    r.rmse_usfbp = rmse(r.usfbp, *r.truth);
  }
  return r;
}

// ---------------------------------------------------------------- ingest

IngestFormat parse_ingest_format(const std::string& name) {
  if (name == "auto") return IngestFormat::auto_detect;
  if (name == "csv") return IngestFormat::csv_matrix;
  if (name == "mrts") return IngestFormat::mrts;
  if (name == "mrts-csv") return IngestFormat::mrts_csv;
  throw ConfigError("unknown input format '" + name + "' (auto, csv, mrts, mrts-csv)");
}

Sinogram ingest_sinogram(const std::string& path, const IngestOptions& opt) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  IngestFormat fmt = opt.format;
  if (fmt == IngestFormat::auto_detect) {
    char head[10] = {};
    in.read(head, sizeof head);
    const auto got = static_cast<std::size_t>(in.gcount());
    in.clear();
    in.seekg(0);
    if (got >= 4 && std::memcmp(head, "MRTS", 4) == 0) {
      fmt = IngestFormat::mrts;
    } else if (got >= 10 && std::memcmp(head, "# MRTS-CSV", 10) == 0) {
      fmt = IngestFormat::mrts_csv;
    } else {
      fmt = IngestFormat::csv_matrix;
    }
  }

  Sinogram s;
  if (fmt == IngestFormat::mrts || fmt == IngestFormat::mrts_csv) {
    SinogramFile f = fmt == IngestFormat::mrts ? read_sinogram_binary(in) : read_sinogram_csv(in);
    s = Sinogram{f.params, std::move(f.rows)};
  } else {
    auto matrix = read_csv_matrix(in);
    const std::size_t cols = matrix.front().size();
    if (cols % 2 == 0) {
      throw ParseError("row 1: " + std::to_string(cols) + " columns; expected an odd count 2K+1");
    }
    const auto K = static_cast<Index>(cols / 2);
    if (K < 1) throw ParseError("row 1: need at least 3 columns");
    s.params.omega = opt.omega;
    s.params.T = opt.T.value_or(1.0 / static_cast<double>(K));
    s.params.K = K;
    s.params.K_prime = K;
    s.params.M = static_cast<int>(matrix.size());
    for (auto& row : matrix) s.rows.emplace_back(-K, std::move(row));
  }
  s.params.validate();
  s.validate();
  if (opt.normalize) {
    const double peak = s.max_abs();
    if (!(peak > 0.0)) throw NumericError("ingest: cannot normalize an all-zero sinogram");
    for (auto& r : s.rows) {
      for (double& v : r.values()) v /= peak;
    }
  }
  return s;
}

// ---------------------------------------------------------------- success sweep

int sweep_base_order(double lambda) {
  if (!(lambda > 0.0) || lambda >= 1.0) throw DomainError("sweep_base_order: lambda must lie in (0, 1)");
  return static_cast<int>(ceil_guarded(std::log(lambda) / std::log(0.5)));
}

namespace {

TrialOutcome trial_on_samples(const ExceedanceSignal& sig, const SampleSeq& truth, double T, int N, Index K,
                              double tolerance) {
  TrialOutcome out;
  out.K_prime = required_margin(sig.rho, T, N, K);
  const SampleSeq gamma = truth.slice(-out.K_prime, K);
  const Threshold thr(sig.lambda);
  const UnfoldConfig cfg{sig.lambda, sig.sup_bound, sig.g.omega(), T, UnfoldMode::compact_exceedance, N, {}};
  const Unfolded u = unfold_compact(modulo_fold(gamma, thr), cfg, K);
  for (Index k = -K; k <= K; ++k) out.max_error = std::max(out.max_error, std::abs(u.samples[k] - gamma[k]));
  out.success = out.max_error < tolerance;
  return out;
}

}  // namespace

TrialOutcome recovery_trial(const ExceedanceSignal& sig, double T, int N, double tolerance) {
  const auto K = static_cast<Index>(ceil_guarded(1.0 / T));
  const Index K_prime = required_margin(sig.rho, T, N, K);
  return trial_on_samples(sig, sig.g.sample(T, -K_prime, K), T, N, K, tolerance);
}

std::vector<double> SweepResult::rates(int N, bool smoothed) const {
  std::vector<double> out;
  for (const auto& r : rows) {
    if (r.N == N) out.push_back(smoothed ? r.smoothed : r.success_rate);
  }
  return out;
}

SweepResult run_success_sweep(const SweepOptions& opt) {
  if (opt.trials < 1 || opt.steps < 2 || opt.multiples.empty()) throw ConfigError("sweep: invalid sizes");
  SweepResult res;
  res.options = opt;
  res.base_order = sweep_base_order(opt.lambda);
  res.T_us = 1.0 / (opt.omega * std::numbers::e);
  res.T_shannon = std::numbers::pi / opt.omega;

  std::vector<double> Ts(static_cast<std::size_t>(opt.steps));
  for (int i = 0; i < opt.steps; ++i) {
    Ts[static_cast<std::size_t>(i)] = res.T_us + (res.T_shannon - res.T_us) * i / (opt.steps - 1);
  }
  std::vector<int> Ns;
  for (int j : opt.multiples) Ns.push_back(j * res.base_order);
  const int N_max = *std::max_element(Ns.begin(), Ns.end());

  // success[trial][t][n]
  const std::size_t cells = Ts.size() * Ns.size();
  std::vector<unsigned char> success(static_cast<std::size_t>(opt.trials) * cells, 0);
  parallel_for(static_cast<std::size_t>(opt.trials), [&](std::size_t trial) {
    const ExceedanceSignal sig =
        random_lambda_exceedance(opt.omega, opt.lambda, derive_seed(opt.seed, trial), opt.signal);
    for (std::size_t t = 0; t < Ts.size(); ++t) {
      const double T = Ts[t];
      const auto K = static_cast<Index>(ceil_guarded(1.0 / T));
      const SampleSeq truth = sig.g.sample(T, -required_margin(sig.rho, T, N_max, K), K);
      for (std::size_t n = 0; n < Ns.size(); ++n) {
        const TrialOutcome o = trial_on_samples(sig, truth, T, Ns[n], K, 1e-6);
        success[trial * cells + t * Ns.size() + n] = o.success ? 1 : 0;
      }
    }
  });

  for (std::size_t n = 0; n < Ns.size(); ++n) {
    std::vector<double> rate(Ts.size());
    for (std::size_t t = 0; t < Ts.size(); ++t) {
      int count = 0;
      for (int trial = 0; trial < opt.trials; ++trial) {
        count += success[static_cast<std::size_t>(trial) * cells + t * Ns.size() + n];
      }
      rate[t] = static_cast<double>(count) / opt.trials;
    }
    for (std::size_t t = 0; t < Ts.size(); ++t) {
      const std::size_t a = t == 0 ? 0 : t - 1;
      const std::size_t b = std::min(t + 1, Ts.size() - 1);
      double acc = 0.0;
      for (std::size_t i = a; i <= b; ++i) acc += rate[i];
      res.rows.push_back(SweepRow{Ts[t] / res.T_shannon, Ts[t], Ns[n], rate[t], acc / static_cast<double>(b - a + 1)});
    }
  }
  return res;
}

void write_sweep_csv(std::ostream& out, const SweepResult& r) {
  out << "t_ratio,T,N,success_rate,smoothed\n";
  for (const auto& row : r.rows) {
    out << format_double(row.t_ratio) << ',' << format_double(row.T) << ',' << row.N << ','
        << format_double(row.success_rate) << ',' << format_double(row.smoothed) << '\n';
  }
}

// ---------------------------------------------------------------- downsample demo

std::string DownsampleResult::csv_header() {
  return "case,T,N,success_flag,tail_consistent,residual_grid_deviation,max_error,mse";
}

void DownsampleResult::write_csv(std::ostream& out) const {
  out << csv_header() << '\n';
  for (const auto& c : cases) {
    out << c.label << ',' << format_double(c.T) << ',' << c.N << ',' << (c.report.success ? 1 : 0) << ','
        << (c.report.tail_consistent ? 1 : 0) << ',' << format_double(c.report.residual_grid_deviation) << ','
        << format_double(c.max_error) << ',' << format_double(c.mse) << '\n';
  }
}

namespace {

// Unfolds truth (symmetric around 0) from its folded samples with order N;
// rho enables the tail check.
DownsampleCase demo_case(const std::string& label, const SampleSeq& truth, double T, int N, double lambda,
                         double omega, double beta, double rho) {
  const Index K = truth.last();
  const UnfoldConfig cfg{lambda, beta, omega, T, UnfoldMode::compact_exceedance, N, rho};
  const Unfolded u = unfold_compact(modulo_fold(truth, Threshold(lambda)), cfg, K);
  DownsampleCase c{label, T, N, u.report, 0.0, 0.0};
  for (Index k = -K; k <= K; ++k) {
    const double d = u.samples[k] - truth[k];
    c.max_error = std::max(c.max_error, std::abs(d));
    c.mse += d * d;
  }
  c.mse /= static_cast<double>(2 * K + 1);
  return c;
}

SampleSeq every_other(const SampleSeq& s) {
  const Index first = -((-s.base()) / 2);  // smallest j with 2j >= base (base <= 0)
  const Index last = s.last() / 2;
  std::vector<double> v;
  for (Index j = first; j <= last; ++j) v.push_back(s[2 * j]);
  return SampleSeq(first, std::move(v));
}

DownsampleResult demo_from_truth(const SampleSeq& truth, double T, const DownsampleOptions& opt, double beta,
                                 double rho) {
  DownsampleResult r;
  r.cases.push_back(demo_case("full_rate", truth, T, 1, opt.lambda, opt.omega, beta, rho));
  const SampleSeq half = every_other(truth);
  const Index K2 = std::min(-half.base(), half.last());
  const SampleSeq sym = half.slice(-K2, K2);
  r.cases.push_back(demo_case("half_rate", sym, 2 * T, 1, opt.lambda, opt.omega, beta, rho));
  r.cases.push_back(demo_case("half_rate", sym, 2 * T, 2, opt.lambda, opt.omega, beta, rho));
  return r;
}

}  // namespace

DownsampleResult run_downsample_demo(const DownsampleOptions& opt) {
  if (!(opt.lambda > 0.0) || !(opt.omega > 0.0) || !(opt.T_omega > 0.0)) throw ConfigError("demo: invalid parameters");
  const double T = opt.T_omega / opt.omega;

  if (opt.samples) {
    const auto n = static_cast<Index>(opt.samples->size());
    if (n < 9) throw SizeError("demo: need at least 9 samples");
    const Index K = (n - 1) / 2;
    SampleSeq truth(-K, std::vector<double>(opt.samples->begin(), opt.samples->begin() + 2 * K + 1));
    double rho = 0.0;
    for (Index k = -K; k <= K; ++k) {
      if (std::abs(truth[k]) >= opt.lambda) rho = std::max(rho, std::abs(static_cast<double>(k)) * T);
    }
    return demo_from_truth(truth, T, opt, 1.05 * max_abs(truth.values()), rho);
  }

  // Look for a realization where full-rate N=1 works, half-rate N=1 fails
  // and is flagged, and half-rate N=2 is exact.
  for (int i = 0; i < opt.seed_search; ++i) {
    const std::uint64_t seed = opt.seed + static_cast<std::uint64_t>(i);
    const ExceedanceSignal sig = random_lambda_exceedance(opt.omega, opt.lambda, seed);
    // Window reaching past rho on both sides so the tail check has room at half rate.
    const Index K = 2 * (static_cast<Index>(std::ceil(sig.rho / (2 * T))) + 16);
    const SampleSeq truth = sig.g.sample(T, -K, K);
    DownsampleResult r = demo_from_truth(truth, T, opt, sig.sup_bound, sig.rho);
    r.seed = seed;
    const auto& full = r.cases[0];
    const auto& half1 = r.cases[1];
    const auto& half2 = r.cases[2];
    if (full.report.success && full.max_error == 0.0 && !half1.report.success && half1.max_error > 0.0 &&
        half2.report.success && half2.max_error <= 1e-9) {
      return r;
    }
  }
  throw NumericError("demo: no demonstrating realization among " + std::to_string(opt.seed_search) + " seeds");
}

}  // namespace mrt
