#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mrt/fbp.hpp"
#include "mrt/forward.hpp"
#include "mrt/phantom.hpp"
#include "mrt/random_signal.hpp"
#include "mrt/unfold.hpp"

namespace mrt {

// ---------------------------------------------------------------- planning

struct PlanOptions {
  double omega = 300.0;
  double T = 0.0;
  double lambda = 0.025;
  Index K = 0;
  int M = 0;
  std::optional<Index> K_prime;  // nullopt: smallest margin that guarantees recovery
  std::optional<int> order_override;
  double beta_margin = 1.05;
  PrefilterOptions prefilter;
};

/// A clean sinogram on [-K', K] with every sampling symbol resolved, plus
/// the cost of the general algorithm for the same data.
struct Plan {
  SamplingParams params;
  Sinogram clean;
  double max_abs = 0.0;  // measured sup norm over the scanned window
  Index scan_K = 0;      // half-width of the window used to measure rho
  double beta_general = 0.0;
  Index J_general = 0;
  int N_general = 0;
  Index samples_general = 0;
  Index samples_compact = 0;
};

/// Computes rows on [-Kw, Kw] (growing Kw until the exceedance radius and
/// the margin fit), measures beta and rho, selects N and K', and slices.
/// `rows(Kw)` must return a sinogram covering [-Kw, Kw].
Plan plan_sinogram(const std::function<Sinogram(Index)>& rows, const PlanOptions& opt);

Plan plan_phantom(const Phantom& p, const PlanOptions& opt);

/// Same planning for already sampled rows; they are low-pass filtered to
/// opt.omega on the extended grid. opt.T, opt.K and opt.M are taken from raw.
Plan plan_samples(const Sinogram& raw, PlanOptions opt);

// ---------------------------------------------------------------- pipeline

struct PipelineResult {
  Plan plan;
  ModuloSinogram folded;
  Sinogram unfolded;  // on [-K, K]
  Sinogram reference; // clean rows on [-K, K]
  std::vector<UnfoldReport> reports;
  ImageGrid fbp{1, 1};
  ImageGrid usfbp{1, 1};
  std::optional<ImageGrid> truth;
  double max_unfold_error = 0.0;
  double parity_delta = 0.0;  // max pixel difference between FBP and US-FBP
  bool images_identical = false;
  bool rows_ok = false;       // every row's report succeeded
  std::optional<double> rmse_fbp;
  std::optional<double> rmse_usfbp;

  static std::string metrics_header();
  std::string metrics_line(const std::string& label) const;
};

PipelineResult run_pipeline(const Plan& plan, const FilterSpec& filter, std::size_t grid_size,
                            const std::optional<Phantom>& truth = std::nullopt);

// ---------------------------------------------------------------- ingest

enum class IngestFormat { auto_detect, csv_matrix, mrts, mrts_csv };

struct IngestOptions {
  IngestFormat format = IngestFormat::auto_detect;
  // Used for headerless matrices, which carry no parameters. K is derived
  // from the column count (2K+1) and M from the row count.
  double omega = 300.0;
  std::optional<double> T;  // default 1/K
  bool normalize = true;
};

/// Loads a sinogram. Headerless rows are placed on [-K, K]. With
/// normalization the result has max |value| = 1.
Sinogram ingest_sinogram(const std::string& path, const IngestOptions& opt);
IngestFormat parse_ingest_format(const std::string& name);

// ---------------------------------------------------------------- success sweep

struct SweepOptions {
  double lambda = 0.1;
  double omega = 10.0 * 3.141592653589793;
  int trials = 100;
  int steps = 25;
  std::vector<int> multiples{1, 2, 3};
  std::uint64_t seed = 1;
  RandomSignalOptions signal;
};

struct SweepRow {
  double t_ratio = 0.0;  // T / T_Shannon
  double T = 0.0;
  int N = 0;
  double success_rate = 0.0;
  double smoothed = 0.0;  // 3-point moving average along T
};

struct SweepResult {
  SweepOptions options;
  int base_order = 0;
  double T_us = 0.0;
  double T_shannon = 0.0;
  std::vector<SweepRow> rows;  // ordered by N, then T

  /// Rates for one N, ordered by T.
  std::vector<double> rates(int N, bool smoothed = false) const;
};

/// ceil(log(lambda) / log(0.5 T_US omega e)) = ceil(log(lambda) / log(0.5)).
int sweep_base_order(double lambda);

/// Outcome of one recovery attempt on a random compact-exceedance signal.
struct TrialOutcome {
  bool success = false;
  double max_error = 0.0;
  Index K_prime = 0;
};

/// Samples g on [-K', K] with K = ceil(1/T) and K' = required_margin, folds,
/// unfolds with order N and compares with the truth on [-K, K].
TrialOutcome recovery_trial(const ExceedanceSignal& sig, double T, int N, double tolerance);

SweepResult run_success_sweep(const SweepOptions& opt);
void write_sweep_csv(std::ostream& out, const SweepResult& r);

// ---------------------------------------------------------------- downsample demo

struct DownsampleOptions {
  double lambda = 0.1;
  double omega = 10.0 * 3.141592653589793;
  double T_omega = 0.08;          // T = T_omega / omega
  std::uint64_t seed = 7;
  int seed_search = 1000;         // candidates tried when looking for a demonstrating realization
  std::optional<std::vector<double>> samples;  // external ground-truth samples at spacing T
};

struct DownsampleCase {
  std::string label;
  double T = 0.0;
  int N = 0;
  UnfoldReport report;
  double max_error = 0.0;
  double mse = 0.0;
};

struct DownsampleResult {
  std::uint64_t seed = 0;  // realization used (synthetic input only)
  std::vector<DownsampleCase> cases;  // full rate N=1, half rate N=1, half rate N=2

  static std::string csv_header();
  void write_csv(std::ostream& out) const;
};

DownsampleResult run_downsample_demo(const DownsampleOptions& opt);

}  // namespace mrt
