#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mrt/core.hpp"
#include "mrt/forward.hpp"

namespace mrt {

enum class UnfoldMode { general, compact_exceedance };

struct UnfoldConfig {
  double lambda = 0.0;
  double beta = 0.0;  // amplitude bound; on the 2*lambda grid in general mode
  double omega = 0.0;
  double T = 0.0;
  UnfoldMode mode = UnfoldMode::compact_exceedance;
  std::optional<int> order_override;
  // Compact mode only: when set, K' is checked against required_margin and
  // recovered fold counts must vanish wherever |kT| > rho.
  std::optional<double> rho;
};

struct UnfoldReport {
  int N_used = 0;
  std::optional<Index> J_used;
  // Largest distance of M(d) - d from the 2*lambda grid, d the N-th differences.
  double residual_grid_deviation = 0.0;
  // General mode: the last max(8, N) accumulated values agree.
  // Compact mode with rho: fold counts vanish outside [-rho, rho].
  bool tail_consistent = true;
  bool success = true;

  static std::string csv_header();
  std::string csv_line() const;
};

struct Unfolded {
  SampleSeq samples;
  UnfoldReport report;
};

/// Difference order: the override if present, else
/// ceil((log lambda - log beta) / log(T omega e)), at least 1 in general
/// mode and at least 0 in compact mode (0 when beta <= lambda).
int select_order(const UnfoldConfig& cfg);

/// J = 6 beta / lambda for the general algorithm.
Index general_window(const UnfoldConfig& cfg);

/// ceil(max(K, rho/T + N)).
Index required_margin(double rho, double T, int N, Index K);

/// Samples per angle: max(2K+1, J+N) for the general algorithm and
/// max(2K+1, ceil(rho/T)+K+1+N) for the compact one.
Index sample_count_general(Index K, Index J, int N);
Index sample_count_compact(double rho, double T, Index K, int N);

/// General algorithm. Requires y to cover index 0 and, for N >= 2, every
/// index up to J+N-1. Output covers the same range as y.
Unfolded unfold_general(const SampleSeq& y, const UnfoldConfig& cfg);

/// Compact-exceedance algorithm on y over [-K', K]; output covers [-K, K].
Unfolded unfold_compact(const SampleSeq& y, const UnfoldConfig& cfg, Index K);

/// Row-wise unfolding. Compact mode returns rows on [-K, K] (K_prime = K);
/// general mode keeps the input range. Rows are processed in parallel.
Sinogram unfold_sinogram(const ModuloSinogram& s, const UnfoldConfig& cfg,
                         std::vector<UnfoldReport>* reports = nullptr);

}  // namespace mrt
