// Command-line front end: forward model, unfolding, reconstruction and the
// experiment harness.

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include "mrt/experiment.hpp"
#include "mrt/fbp.hpp"
#include "mrt/image_io.hpp"
#include "mrt/phantom.hpp"
#include "mrt/sinogram_io.hpp"
#include "mrt/unfold.hpp"

namespace fs = std::filesystem;
using namespace mrt;

namespace {

struct GridFlags {
  double omega = 300.0;
  double T = 0.0;
  double t_fraction = 0.5;  // T = t_fraction / (omega e) when T is not given
  long long K = 0;          // 0: ceil(1/T)
  int M = 0;                // 0: ceil(omega)
  double lambda = 0.025;
  std::string K_prime = "auto";
  std::optional<int> N;

  double resolved_T() const { return T > 0.0 ? T : t_fraction / (omega * std::numbers::e); }
  Index resolved_K() const { return K > 0 ? K : static_cast<Index>(ceil_guarded(1.0 / resolved_T())); }
  int resolved_M() const { return M > 0 ? M : static_cast<int>(std::ceil(omega)); }
  std::optional<Index> resolved_K_prime() const {
    if (K_prime == "auto") return std::nullopt;
    try {
      return std::stoll(K_prime);
    } catch (const std::exception&) {
      throw ConfigError("--K-prime must be 'auto' or an integer, got '" + K_prime + "'");
    }
  }
  PlanOptions plan() const {
    PlanOptions p;
    p.omega = omega;
    p.T = resolved_T();
    p.lambda = lambda;
    p.K = resolved_K();
    p.M = resolved_M();
    p.K_prime = resolved_K_prime();
    p.order_override = N;
    return p;
  }
};

void add_grid_flags(CLI::App* app, GridFlags& g, bool with_lambda = true) {
  app->add_option("--omega", g.omega, "Bandwidth")->capture_default_str();
  app->add_option("--T", g.T, "Radial spacing (overrides --t-fraction)");
  app->add_option("--t-fraction", g.t_fraction, "T as a fraction of 1/(omega e)")->capture_default_str();
  app->add_option("--K", g.K, "Radial index bound (default ceil(1/T))");
  app->add_option("--M", g.M, "Number of angles (default ceil(omega))");
  if (with_lambda) {
    app->add_option("--lambda", g.lambda, "Modulo threshold")->capture_default_str();
    app->add_option("--K-prime", g.K_prime, "Left margin: 'auto' or an integer")->capture_default_str();
    app->add_option("--N", g.N, "Difference order override");
  }
}

Phantom load_phantom(const std::string& name) {
  if (name == "shepp-logan") return shepp_logan();
  if (name == "walnut") return walnut_standin();
  std::ifstream in(name);
  if (!in) throw Error("unknown phantom '" + name + "' (shepp-logan, walnut, or a table file)");
  return read_phantom_table(in);
}

FilterSpec make_filter(const std::string& kind, double omega) {
  if (kind == "ram-lak") return FilterSpec::ram_lak(omega);
  if (kind == "cosine") return FilterSpec::cosine(omega);
  throw ConfigError("unknown filter '" + kind + "' (ram-lak, cosine)");
}

SinogramFormat parse_format(const std::string& f) {
  if (f == "binary" || f == "mrts") return SinogramFormat::binary;
  if (f == "csv" || f == "mrts-csv") return SinogramFormat::csv;
  throw ConfigError("unknown sinogram format '" + f + "' (binary, csv)");
}

void write_image(const std::string& stem, const ImageGrid& img) {
  write_pgm16(stem + ".pgm", img);
  write_raw(stem + ".raw", img);
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_double(item, "list item"));
  if (out.empty()) throw ConfigError("empty list");
  return out;
}

// ------------------------------------------------------------------ commands

struct PhantomCmd {
  std::string phantom = "shepp-logan";
  std::size_t grid = 256;
  std::string out = "phantom";
  std::string table;
  void run() const {
    const Phantom p = load_phantom(phantom);
    write_image(out, rasterize(p, ImageGrid(grid, grid)));
    if (!table.empty()) {
      std::ofstream t(table);
      write_phantom_table(t, p);
    }
  }
};

struct ForwardCmd {
  std::string phantom = "shepp-logan";
  GridFlags g;
  std::string out = "sinogram.mrts";
  std::string format = "binary";
  void run() const {
    const Plan plan = plan_phantom(load_phantom(phantom), g.plan());
    save_sinogram(out, plan.clean.params, plan.clean.rows, parse_format(format));
    std::cerr << "K'=" << plan.params.K_prime << " N=" << plan.params.N << " beta=" << format_double(plan.params.beta)
              << " rho=" << format_double(plan.params.rho) << '\n';
  }
};

struct FoldCmd {
  std::string in, out = "modulo.mrts", format = "binary";
  double lambda = 0.025;
  void run() const {
    SinogramFile f = load_sinogram(in);
    const ModuloSinogram m = fold_sinogram(Sinogram{f.params, std::move(f.rows)}, Threshold(lambda));
    save_sinogram(out, m.params, m.rows, parse_format(format));
  }
};

struct UnfoldCmd {
  std::string in, out = "unfolded.mrts", format = "binary", mode = "compact", report;
  double beta = 0.0;
  std::optional<double> rho;
  std::optional<int> N;
  bool run() const {
    SinogramFile f = load_sinogram(in);
    if (!(f.params.lambda > 0.0)) throw ConfigError("input has no lambda; is it a modulo sinogram?");
    UnfoldConfig cfg{f.params.lambda, beta, f.params.omega, f.params.T, UnfoldMode::compact_exceedance, N, rho};
    if (mode == "general") {
      cfg.mode = UnfoldMode::general;
    } else if (mode != "compact") {
      throw ConfigError("unknown mode '" + mode + "' (compact, general)");
    }
    std::vector<UnfoldReport> reps;
    Sinogram s = unfold_sinogram(ModuloSinogram{f.params, std::move(f.rows)}, cfg, &reps);
    s.params.lambda = 0.0;
    save_sinogram(out, s.params, s.rows, parse_format(format));
    bool ok = true;
    for (const auto& r : reps) ok = ok && r.success;
    if (!report.empty()) {
      std::ofstream rf(report);
      rf << "row," << UnfoldReport::csv_header() << '\n';
      for (std::size_t m = 0; m < reps.size(); ++m) rf << m << ',' << reps[m].csv_line() << '\n';
    }
    if (!ok) std::cerr << "warning: some rows failed the consistency checks\n";
    return ok;
  }
};

struct FbpCmd {
  std::string in, out = "fbp", filter = "cosine";
  std::size_t grid = 256;
  void run() const {
    SinogramFile f = load_sinogram(in);
    const Sinogram s{f.params, std::move(f.rows)};
    write_image(out, fbp_reconstruct(s, make_filter(filter, s.params.omega), ImageGrid(grid, grid)));
  }
};

struct PipelineCmd {
  std::string phantom = "shepp-logan";
  std::string input;  // already sampled sinogram instead of a phantom
  GridFlags g;
  std::string filter = "cosine";
  std::size_t grid = 256;
  std::string out_dir = "pipeline_out";
  std::string label;
  std::string format = "binary";
  bool run() const {
    fs::create_directories(out_dir);
    Plan plan;
    std::optional<Phantom> truth;
    if (!input.empty()) {
      IngestOptions io;
      io.omega = g.omega;
      plan = plan_samples(ingest_sinogram(input, io), g.plan());
    } else {
      truth = load_phantom(phantom);
      plan = plan_phantom(*truth, g.plan());
    }
    const PipelineResult r = run_pipeline(plan, make_filter(filter, g.omega), grid, truth);
    const auto fmt = parse_format(format);
    const std::string ext = fmt == SinogramFormat::binary ? ".mrts" : ".csv";
    const fs::path dir(out_dir);
    save_sinogram((dir / ("sinogram" + ext)).string(), plan.clean.params, plan.clean.rows, fmt);
    save_sinogram((dir / ("modulo" + ext)).string(), r.folded.params, r.folded.rows, fmt);
    SamplingParams up = r.unfolded.params;
    up.lambda = 0.0;
    save_sinogram((dir / ("unfolded" + ext)).string(), up, r.unfolded.rows, fmt);
    write_image((dir / "fbp").string(), r.fbp);
    write_image((dir / "usfbp").string(), r.usfbp);
    if (r.truth) write_image((dir / "truth").string(), *r.truth);
    std::ofstream metrics(dir / "metrics.csv");
    metrics << PipelineResult::metrics_header() << '\n'
            << r.metrics_line(label.empty() ? (input.empty() ? phantom : input) : label) << '\n';
    std::cout << PipelineResult::metrics_header() << '\n' << r.metrics_line(label.empty() ? "run" : label) << '\n';
    return r.rows_ok && r.images_identical && r.max_unfold_error <= 1e-9;
  }
};

struct IngestCmd {
  std::string in, out = "ingested.mrts", format = "auto", out_format = "binary";
  double omega = 300.0;
  double T = 0.0;
  bool no_normalize = false;
  void run() const {
    IngestOptions io;
    io.format = parse_ingest_format(format);
    io.omega = omega;
    if (T > 0.0) io.T = T;
    io.normalize = !no_normalize;
    const Sinogram s = ingest_sinogram(in, io);
    save_sinogram(out, s.params, s.rows, parse_format(out_format));
  }
};

struct SweepCmd {
  std::string lambdas = "0.1,0.05";
  std::string omegas_pi = "10";
  int trials = 100;
  int steps = 25;
  std::uint64_t seed = 2021;
  bool full = false;
  std::string out_dir = "sweep_out";
  void run() const {
    fs::create_directories(out_dir);
    std::vector<double> ls = parse_list(lambdas);
    std::vector<double> ws = parse_list(omegas_pi);
    int n_trials = trials, n_steps = steps;
    if (full) {
      ls = {0.1, 0.05};
      ws = {10, 20, 30};
      n_trials = 1000;
      n_steps = 100;
    }
    for (double l : ls) {
      for (double w : ws) {
        SweepOptions o;
        o.lambda = l;
        o.omega = w * std::numbers::pi;
        o.trials = n_trials;
        o.steps = n_steps;
        o.seed = seed;
        const SweepResult r = run_success_sweep(o);
        const std::string name = "success_lambda" + format_double(l) + "_omega" + format_double(w) + "pi.csv";
        std::ofstream out(fs::path(out_dir) / name);
        write_sweep_csv(out, r);
        std::cerr << name << ": base order " << r.base_order << '\n';
      }
    }
  }
};

struct DemoCmd {
  DownsampleOptions o;
  std::string input;
  std::string out;
  bool run() {
    if (!input.empty()) {
      std::ifstream in(input);
      if (!in) throw Error("cannot open '" + input + "'");
      std::vector<double> v;
      for (const auto& row : read_csv_matrix(in)) v.insert(v.end(), row.begin(), row.end());
      o.samples = std::move(v);
    }
    const DownsampleResult r = run_downsample_demo(o);
    if (out.empty()) {
      r.write_csv(std::cout);
    } else {
      std::ofstream f(out);
      r.write_csv(f);
    }
    if (!o.samples) std::cerr << "realization seed " << r.seed << '\n';
    return true;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Modulo Radon transform toolkit: simulate folded sinograms, unfold them and reconstruct"};
  app.require_subcommand(1);

  PhantomCmd phantom;
  auto* c_ph = app.add_subcommand("phantom", "Rasterize a phantom");
  c_ph->add_option("--phantom", phantom.phantom, "shepp-logan, walnut or a table file")->capture_default_str();
  c_ph->add_option("--grid", phantom.grid, "Image size in pixels")->capture_default_str();
  c_ph->add_option("--out", phantom.out, "Output stem (.pgm and .raw)")->capture_default_str();
  c_ph->add_option("--table", phantom.table, "Also write the ellipse table here");

  ForwardCmd forward;
  auto* c_fw = app.add_subcommand("forward", "Band-limited sinogram of a phantom");
  c_fw->add_option("--phantom", forward.phantom)->capture_default_str();
  add_grid_flags(c_fw, forward.g);
  c_fw->add_option("--out", forward.out)->capture_default_str();
  c_fw->add_option("--format", forward.format, "binary or csv")->capture_default_str();

  FoldCmd fold;
  auto* c_fo = app.add_subcommand("fold", "Apply the centered modulo to a sinogram");
  c_fo->add_option("--in", fold.in)->required();
  c_fo->add_option("--lambda", fold.lambda)->capture_default_str();
  c_fo->add_option("--out", fold.out)->capture_default_str();
  c_fo->add_option("--format", fold.format)->capture_default_str();

  UnfoldCmd unfold;
  auto* c_un = app.add_subcommand("unfold", "Recover a sinogram from modulo samples");
  c_un->add_option("--in", unfold.in)->required();
  c_un->add_option("--beta", unfold.beta, "Amplitude bound")->required();
  c_un->add_option("--rho", unfold.rho, "Exceedance radius (enables margin and tail checks)");
  c_un->add_option("--mode", unfold.mode, "compact or general")->capture_default_str();
  c_un->add_option("--N", unfold.N, "Difference order override");
  c_un->add_option("--out", unfold.out)->capture_default_str();
  c_un->add_option("--format", unfold.format)->capture_default_str();
  c_un->add_option("--report", unfold.report, "Per-row CSV report");

  FbpCmd fbp;
  auto* c_fb = app.add_subcommand("fbp", "Filtered back projection of a sinogram");
  c_fb->add_option("--in", fbp.in)->required();
  c_fb->add_option("--filter", fbp.filter, "ram-lak or cosine")->capture_default_str();
  c_fb->add_option("--grid", fbp.grid)->capture_default_str();
  c_fb->add_option("--out", fbp.out, "Output stem")->capture_default_str();

  PipelineCmd pipeline;
  auto* c_pi = app.add_subcommand("pipeline", "Forward model, fold, unfold, FBP and US-FBP in one go");
  c_pi->add_option("--phantom", pipeline.phantom)->capture_default_str();
  c_pi->add_option("--input", pipeline.input, "Sampled sinogram to use instead of a phantom");
  add_grid_flags(c_pi, pipeline.g);
  c_pi->add_option("--filter", pipeline.filter)->capture_default_str();
  c_pi->add_option("--grid", pipeline.grid)->capture_default_str();
  c_pi->add_option("--out-dir", pipeline.out_dir)->capture_default_str();
  c_pi->add_option("--label", pipeline.label);
  c_pi->add_option("--format", pipeline.format)->capture_default_str();

  IngestCmd ingest;
  auto* c_in = app.add_subcommand("ingest", "Import an external sinogram");
  c_in->add_option("--in", ingest.in)->required();
  c_in->add_option("--format", ingest.format, "auto, csv, mrts or mrts-csv")->capture_default_str();
  c_in->add_option("--omega", ingest.omega)->capture_default_str();
  c_in->add_option("--T", ingest.T, "Radial spacing for headerless input (default 1/K)");
  c_in->add_flag("--no-normalize", ingest.no_normalize);
  c_in->add_option("--out", ingest.out)->capture_default_str();
  c_in->add_option("--out-format", ingest.out_format)->capture_default_str();

  SweepCmd sweep;
  auto* c_sw = app.add_subcommand("sweep-success", "Success rate over T and N for random signals");
  c_sw->add_option("--lambda", sweep.lambdas, "Comma-separated thresholds")->capture_default_str();
  c_sw->add_option("--omega-pi", sweep.omegas_pi, "Comma-separated bandwidths in units of pi")->capture_default_str();
  c_sw->add_option("--trials", sweep.trials)->capture_default_str();
  c_sw->add_option("--steps", sweep.steps)->capture_default_str();
  c_sw->add_option("--seed", sweep.seed)->capture_default_str();
  c_sw->add_flag("--full", sweep.full, "1000 trials, 100 steps, all six (lambda, omega) cells");
  c_sw->add_option("--out-dir", sweep.out_dir)->capture_default_str();

  DemoCmd demo;
  auto* c_de = app.add_subcommand("downsample-demo", "Order 1 vs order 2 after halving the sampling rate");
  c_de->add_option("--lambda", demo.o.lambda)->capture_default_str();
  c_de->add_option("--omega", demo.o.omega)->capture_default_str();
  c_de->add_option("--t-omega", demo.o.T_omega, "T * omega at full rate")->capture_default_str();
  c_de->add_option("--seed", demo.o.seed)->capture_default_str();
  c_de->add_option("--input", demo.input, "Ground-truth samples at spacing T, centered on index 0");
  c_de->add_option("--out", demo.out, "CSV output (default stdout)");

  for (auto* sub : app.get_subcommands({})) sub->set_config("--config", "", "key=value file; flags take precedence");

  CLI11_PARSE(app, argc, argv);
  try {
    bool ok = true;
    if (*c_ph) phantom.run();
    if (*c_fw) forward.run();
    if (*c_fo) fold.run();
    if (*c_un) ok = unfold.run();
    if (*c_fb) fbp.run();
    if (*c_pi) ok = pipeline.run();
    if (*c_in) ingest.run();
    if (*c_sw) sweep.run();
    if (*c_de) ok = demo.run();
    return ok ? 0 : 3;
  } catch (const MarginError& e) {
    std::cerr << "error: " << e.what() << " (required K' = " << e.required() << ")\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
