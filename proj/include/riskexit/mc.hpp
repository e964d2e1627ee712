#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "riskexit/exit.hpp"
#include "riskexit/model.hpp"
#include "riskexit/rng.hpp"

namespace riskexit {

// Paths are simulated in fixed-size chunks; chunk k uses the stream seeded by
// child_seed(seed, k), so estimates are independent of how chunks are
// scheduled and partial runs merge deterministically.
inline constexpr std::uint64_t kMcChunkPaths = 1u << 16;

enum class ExitSide { upper, lower, censored };

struct ExitSample {
  double tau;
  ExitSide side;
  double overshoot;  // position - x on upper exit, else 0
  double position;   // xi at exit (or at t_max when censored)
  std::uint64_t jumps;
};

struct Estimate {
  double mean;
  double std_error;
  std::uint64_t n;
};

// Simulates xi jump by jump until it leaves (x - T, x) or t exceeds t_max.
// The path is piecewise constant, so this is exact.
ExitSample simulate_exit(const ModelParams& params, double x, double T, Rng& rng,
                         double t_max);

// Censoring horizon: 50/|m| for drifting models, else the diffusive scale
// 50 T^2 lambda / sigma1^2.
double default_t_max(const ModelParams& params, double T);

struct MgfEstimates {
  Estimate upper;
  Estimate lower;
  Estimate total;  // total.mean == upper.mean + lower.mean on the same paths
  double censored_frac;
};

// Sample means of e^{-s tau} 1{side}. Censored paths contribute 0; for s = 0
// the censored fraction must stay below 1e-4 or a censoring-excess error is
// thrown.
MgfEstimates estimate_exit_mgf(const ModelParams& params, const ExitQuery& query,
                               std::uint64_t n_paths, std::uint64_t seed,
                               std::optional<double> t_max = std::nullopt);

struct Histogram {
  double lo = 0;
  double hi = 0;
  std::vector<std::uint64_t> counts;
  std::uint64_t n_paths = 0;

  double width() const { return counts.empty() ? 0 : (hi - lo) / counts.size(); }
  double center(std::size_t i) const { return lo + (i + 0.5) * width(); }
  // Per-path frequency density and its binomial standard error.
  double density(std::size_t i) const;
  double density_std_error(std::size_t i) const;
};

struct KilledObservables {
  Estimate non_exit;   // P{tau(x,T) > theta_s}
  Estimate atom_freq;  // P{xi(theta_s) = 0} (no jump before theta_s)
  Histogram position_hist;  // xi(theta_s) on {tau > theta_s, at least one jump}
  std::map<double, Estimate> sup_tail_at;  // P{xi^+(theta_s) > level}
  std::map<double, Estimate> inf_cdf_at;   // P{xi^-(theta_s) < level}
};

// Draws theta_s ~ Exp(s) per path and simulates to theta_s, recording the
// exit indicator, xi(theta_s), the zero atom, and the running extrema.
KilledObservables estimate_killed_observables(const ModelParams& params,
                                              const ExitQuery& query,
                                              std::uint64_t n_paths, std::uint64_t seed,
                                              std::size_t bins = 0,
                                              std::span<const double> sup_levels = {},
                                              std::span<const double> inf_levels = {});

// Mean first-passage time below `level` (< 0). m < 0 simulates xi directly;
// m = 0 simulates the auxiliary decreasing process (rate lambda_0, Exp(b)
// downward jumps; exponential claims only). m > 0 is a regime error.
Estimate estimate_mean_passage(const ModelParams& params, double level,
                               std::uint64_t n_paths, std::uint64_t seed,
                               std::optional<double> t_max = std::nullopt);

struct OvershootMoments {
  Estimate mean;           // conditional on upper exit
  Estimate second_moment;  // conditional on upper exit
  std::uint64_t n_upper;
};

OvershootMoments estimate_overshoot(const ModelParams& params, const ExitQuery& query,
                                    std::uint64_t n_paths, std::uint64_t seed,
                                    std::optional<double> t_max = std::nullopt);

// P{tau <= t} for each t in `times` (empirical CDF of the exit time).
std::vector<Estimate> estimate_tau_cdf(const ModelParams& params, double x, double T,
                                       std::span<const double> times,
                                       std::uint64_t n_paths, std::uint64_t seed,
                                       std::optional<double> t_max = std::nullopt);

// Weighted undershoot CDF: E[e^{-s tau} 1{xi(tau) < z, lower exit}].
Estimate estimate_undershoot(const ModelParams& params, const ExitQuery& query, double z,
                             std::uint64_t n_paths, std::uint64_t seed,
                             std::optional<double> t_max = std::nullopt);

}  // namespace riskexit
