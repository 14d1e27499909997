#include "mrt/unfold.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "mrt/parallel.hpp"
#include "mrt/sinogram_io.hpp"

namespace mrt {

namespace {

void check_config(const UnfoldConfig& cfg) {
  if (!(cfg.lambda > 0.0) || !(cfg.beta > 0.0) || !(cfg.omega > 0.0) || !(cfg.T > 0.0)) {
    throw ConfigError("UnfoldConfig: lambda, beta, omega and T must be positive");
  }
  if (cfg.order_override && *cfg.order_override < 0) throw ConfigError("UnfoldConfig: negative order");
}

// s_(0) in units of 2*lambda: (M(d) - d) / (2*lambda), rounded to integers.
// Returns the largest pre-rounding deviation, in signal units.
double initial_counts(const SampleSeq& y, int N, Threshold thr, SampleSeq& out) {
  const SampleSeq d = forward_diff(y, N);
  std::vector<double> units(d.size());
  double worst = 0.0;
  for (Index k = d.base(); k <= d.last(); ++k) {
    const double u = (modulo_fold(d[k], thr) - d[k]) / thr.period();
    const double r = std::nearbyint(u);
    worst = std::max(worst, std::abs(u - r) * thr.period());
    units[static_cast<std::size_t>(k - d.base())] = r;
  }
  out = SampleSeq(d.base(), std::move(units));
  return worst;
}

// y + 2*lambda*counts on [first, last]. The product and sum are the same
// operations the fold used, so exact counts give back the input bit for bit.
SampleSeq apply_counts(const SampleSeq& y, const SampleSeq& counts, Threshold thr, Index first, Index last) {
  std::vector<double> v(static_cast<std::size_t>(last - first + 1));
  for (Index k = first; k <= last; ++k) v[static_cast<std::size_t>(k - first)] = y[k] + thr.period() * counts[k];
  return SampleSeq(first, std::move(v));
}

bool finite_all(const SampleSeq& a) {
  for (double v : a.values()) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

}  // namespace

std::string UnfoldReport::csv_header() { return "N_used,J_used,residual_grid_deviation,tail_consistent,success"; }

std::string UnfoldReport::csv_line() const {
  std::ostringstream os;
  os << N_used << ',' << (J_used ? std::to_string(*J_used) : std::string()) << ','
     << format_double(residual_grid_deviation) << ',' << (tail_consistent ? 1 : 0) << ',' << (success ? 1 : 0);
  return os.str();
}

int select_order(const UnfoldConfig& cfg) {
  check_config(cfg);
  if (cfg.order_override) return *cfg.order_override;
  const double x = cfg.T * cfg.omega * std::numbers::e;
  if (!(x < 1.0)) {
    throw ConditionError("T*omega*e = " + format_double(x) + " >= 1; supply an explicit order");
  }
  const bool compact = cfg.mode == UnfoldMode::compact_exceedance;
  if (compact && cfg.beta <= cfg.lambda) return 0;
  const double n = ceil_guarded((std::log(cfg.lambda) - std::log(cfg.beta)) / std::log(x));
  return static_cast<int>(std::max(n, compact ? 0.0 : 1.0));
}

Index general_window(const UnfoldConfig& cfg) {
  check_config(cfg);
  return std::llround(6.0 * cfg.beta / cfg.lambda);
}

Index required_margin(double rho, double T, int N, Index K) {
  if (!(T > 0.0) || rho < 0.0 || N < 0) throw DomainError("required_margin: invalid arguments");
  return static_cast<Index>(ceil_guarded(std::max(static_cast<double>(K), rho / T + N)));
}

Index sample_count_general(Index K, Index J, int N) { return std::max(2 * K + 1, J + N); }

Index sample_count_compact(double rho, double T, Index K, int N) {
  if (!(T > 0.0) || rho < 0.0) throw DomainError("sample_count_compact: invalid arguments");
  return std::max(2 * K + 1, static_cast<Index>(ceil_guarded(rho / T)) + K + 1 + N);
}

Unfolded unfold_general(const SampleSeq& y, const UnfoldConfig& cfg) {
  check_config(cfg);
  const Threshold thr(cfg.lambda);
  if (grid_distance(cfg.beta, thr) > 1e-9 * cfg.lambda) {
    throw ConfigError("general unfolding needs beta on the 2*lambda grid, got " + format_double(cfg.beta));
  }
  const int N = select_order(cfg);
  if (N < 1) throw ConfigError("general unfolding needs order >= 1");
  const Index J = general_window(cfg);
  if (!y.covers(0)) throw SizeError("general unfolding needs index 0 in range");
  if (N >= 2 && y.last() < J + N - 1) {
    throw SizeError("general unfolding needs samples up to index " + std::to_string(J + N - 1) + ", have " +
                    std::to_string(y.last()));
  }
  if (y.size() <= static_cast<std::size_t>(N)) throw SizeError("general unfolding: sequence shorter than order");

  UnfoldReport rep;
  rep.N_used = N;
  rep.J_used = J;
  SampleSeq s(0, {0.0});
  rep.residual_grid_deviation = initial_counts(y, N, thr, s);

  for (int n = 0; n + 2 <= N; ++n) {
    // Counts are exact integers, so the grid rounding of S s_(n) is the identity.
    SampleSeq next = anti_diff_bilateral(s);
    const SampleSeq acc = anti_diff_bilateral(next);
    const double kappa = floor_guarded((acc[1] - acc[J + 1]) * thr.period() / (12.0 * cfg.beta) + 0.5);
    for (double& v : next.values()) v += kappa;
    s = std::move(next);
  }
  SampleSeq counts = anti_diff_bilateral(s);
  const double tail = counts[counts.last()];
  const Index plateau = std::max<Index>(8, N);
  for (Index k = std::max(counts.base(), counts.last() - plateau + 1); k <= counts.last(); ++k) {
    if (counts[k] != tail) rep.tail_consistent = false;
  }
  for (double& v : counts.values()) v -= tail;
  SampleSeq out = apply_counts(y, counts, thr, y.base(), y.last());
  rep.success = rep.tail_consistent && rep.residual_grid_deviation <= 1e-9 * cfg.lambda && finite_all(out);
  return {std::move(out), rep};
}

Unfolded unfold_compact(const SampleSeq& y, const UnfoldConfig& cfg, Index K) {
  check_config(cfg);
  const Threshold thr(cfg.lambda);
  const Index K_prime = -y.base();
  if (K < 0 || y.last() != K || K_prime < K) {
    throw SizeError("compact unfolding expects samples on [-K', K] with K' >= K");
  }
  const int N = select_order(cfg);
  UnfoldReport rep;
  rep.N_used = N;
  if (cfg.rho) {
    const Index need = required_margin(*cfg.rho, cfg.T, N, K);
    if (K_prime < need) {
      throw MarginError("K' = " + std::to_string(K_prime) + " is below the required margin " + std::to_string(need),
                        need);
    }
  }
  if (N == 0) return {y.slice(-K, K), rep};
  if (y.size() <= static_cast<std::size_t>(N)) throw SizeError("compact unfolding: sequence shorter than order");

  SampleSeq s(0, {0.0});
  rep.residual_grid_deviation = initial_counts(y, N, thr, s);
  for (int n = 0; n + 2 <= N; ++n) s = anti_diff(s);  // exact integers: grid rounding is the identity
  const SampleSeq counts = anti_diff(s);

  if (cfg.rho) {
    for (Index k = counts.base(); k <= counts.last(); ++k) {
      if (std::abs(static_cast<double>(k)) * cfg.T > *cfg.rho && counts[k] != 0.0) {
        rep.tail_consistent = false;
        break;
      }
    }
  }
  SampleSeq out = apply_counts(y, counts, thr, -K, K);
  rep.success = rep.tail_consistent && rep.residual_grid_deviation <= 1e-9 * cfg.lambda && finite_all(out);
  return {std::move(out), rep};
}

Sinogram unfold_sinogram(const ModuloSinogram& s, const UnfoldConfig& cfg, std::vector<UnfoldReport>* reports) {
  s.validate();
  const std::size_t M = s.rows.size();
  std::vector<SampleSeq> rows(M, SampleSeq(0, {0.0}));
  std::vector<UnfoldReport> reps(M);
  parallel_for(M, [&](std::size_t m) {
    Unfolded u = cfg.mode == UnfoldMode::general ? unfold_general(s.rows[m], cfg)
                                                  : unfold_compact(s.rows[m], cfg, s.params.K);
    rows[m] = std::move(u.samples);
    reps[m] = u.report;
  });
  Sinogram out{s.params, std::move(rows)};
  if (cfg.mode == UnfoldMode::compact_exceedance) out.params.K_prime = s.params.K;
  out.params.beta = cfg.beta;
  out.params.N = reps.empty() ? 0 : reps.front().N_used;
  if (cfg.rho) out.params.rho = *cfg.rho;
  if (reports != nullptr) *reports = std::move(reps);
  return out;
}

}  // namespace mrt
