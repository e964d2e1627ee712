#include "riskexit/mc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "riskexit/wiener_hopf.hpp"

namespace riskexit {

namespace {

struct Accumulator {
  double sum = 0;
  double sum_sq = 0;

  void add(double w) {
    sum += w;
    sum_sq += w * w;
  }
  void merge(const Accumulator& other) {
    sum += other.sum;
    sum_sq += other.sum_sq;
  }
  Estimate done(std::uint64_t n) const {
    const double mean = sum / n;
    double var = (sum_sq - sum * sum / n) / (n - 1);
    if (var < 0) var = 0;
    return {mean, std::sqrt(var / n), n};
  }
};

// Runs `body(chunk_rng, n_in_chunk)` over the fixed chunk partition of
// n_paths; every estimator goes through here so that results do not depend
// on how the chunks would be scheduled.
template <typename Body>
void for_each_chunk(std::uint64_t n_paths, std::uint64_t seed, Body&& body) {
  const std::uint64_t n_chunks = (n_paths + kMcChunkPaths - 1) / kMcChunkPaths;
  for (std::uint64_t chunk = 0; chunk < n_chunks; ++chunk) {
    const std::uint64_t lo = chunk * kMcChunkPaths;
    const std::uint64_t n = std::min(kMcChunkPaths, n_paths - lo);
    Rng rng(child_seed(seed, chunk));
    body(rng, n);
  }
}

void require_paths(std::uint64_t n_paths) {
  if (n_paths < 1000)
    throw std::invalid_argument("estimator: need at least 1000 paths");
}

// Horizon guaranteeing the truncation error bound e^{-s t_max} < 1e-12.
double mgf_horizon(const ModelParams& params, const ExitQuery& query) {
  const double base = default_t_max(params, query.T);
  if (query.s <= 0) return base;
  return std::max(base, std::log(1e12) / query.s);
}

}  // namespace

double Histogram::density(std::size_t i) const {
  return static_cast<double>(counts[i]) / n_paths / width();
}

double Histogram::density_std_error(std::size_t i) const {
  const double f = static_cast<double>(counts[i]) / n_paths;
  return std::sqrt(f * (1 - f) / n_paths) / width();
}

ExitSample simulate_exit(const ModelParams& params, double x, double T, Rng& rng,
                         double t_max) {
  double t = 0, pos = 0;
  std::uint64_t jumps = 0;
  while (true) {
    const double dt = rng.exponential(params.lambda);
    if (t + dt > t_max) return {t_max, ExitSide::censored, 0, pos, jumps};
    t += dt;
    pos += rng.uniform() < params.p ? rng.exponential(params.c)
                                    : -params.claims.sample(rng);
    ++jumps;
    if (pos >= x) return {t, ExitSide::upper, pos - x, pos, jumps};
    if (pos <= x - T) return {t, ExitSide::lower, 0, pos, jumps};
  }
}

double default_t_max(const ModelParams& params, double T) {
  const Moments mom = moments(params);
  if (regime(params) != Regime::zero) return 50.0 / std::fabs(mom.m);
  return 50.0 * T * T * params.lambda / mom.sigma1_sq;
}

MgfEstimates estimate_exit_mgf(const ModelParams& params, const ExitQuery& query,
                               std::uint64_t n_paths, std::uint64_t seed,
                               std::optional<double> t_max) {
  validate(query);
  require_paths(n_paths);
  const double horizon = t_max.value_or(mgf_horizon(params, query));
  Accumulator upper, lower;
  std::uint64_t censored = 0;
  for_each_chunk(n_paths, seed, [&](Rng& rng, std::uint64_t n) {
    Accumulator up, low;
    for (std::uint64_t i = 0; i < n; ++i) {
      const ExitSample sample = simulate_exit(params, query.x, query.T, rng, horizon);
      const double w = query.s == 0 ? 1.0 : std::exp(-query.s * sample.tau);
      switch (sample.side) {
        case ExitSide::upper:
          up.add(w);
          break;
        case ExitSide::lower:
          low.add(w);
          break;
        case ExitSide::censored:
          ++censored;
          break;
      }
    }
    upper.merge(up);
    lower.merge(low);
  });
  const double censored_frac = static_cast<double>(censored) / n_paths;
  if (query.s == 0 && censored_frac >= 1e-4)
    throw std::runtime_error("estimate_exit_mgf: censored fraction exceeds 1e-4 at s=0");
  Accumulator total_acc = upper;
  total_acc.merge(lower);
  const Estimate up = upper.done(n_paths), low = lower.done(n_paths);
  Estimate total = total_acc.done(n_paths);
  total.mean = up.mean + low.mean;
  return {up, low, total, censored_frac};
}

KilledObservables estimate_killed_observables(const ModelParams& params,
                                              const ExitQuery& query,
                                              std::uint64_t n_paths, std::uint64_t seed,
                                              std::size_t bins,
                                              std::span<const double> sup_levels,
                                              std::span<const double> inf_levels) {
  validate(query);
  if (!(query.s > 0))
    throw std::domain_error("estimate_killed_observables: need s > 0");
  require_paths(n_paths);
  const double lo = query.x - query.T, hi = query.x;
  Accumulator non_exit, atom;
  std::vector<Accumulator> sup_acc(sup_levels.size()), inf_acc(inf_levels.size());
  Histogram hist{lo, hi, std::vector<std::uint64_t>(bins, 0), n_paths};
  for_each_chunk(n_paths, seed, [&](Rng& rng, std::uint64_t n) {
    for (std::uint64_t i = 0; i < n; ++i) {
      const double theta = rng.exponential(query.s);
      double t = 0, pos = 0, sup = 0, inf = 0;
      std::uint64_t jumps = 0;
      bool exited = false;
      while (true) {
        const double dt = rng.exponential(params.lambda);
        if (t + dt > theta) break;
        t += dt;
        pos += rng.uniform() < params.p ? rng.exponential(params.c)
                                        : -params.claims.sample(rng);
        ++jumps;
        sup = std::max(sup, pos);
        inf = std::min(inf, pos);
        if (!exited && (pos >= hi || pos <= lo)) exited = true;
      }
      non_exit.add(exited ? 0.0 : 1.0);
      atom.add(jumps == 0 ? 1.0 : 0.0);
      if (!exited && jumps > 0 && bins > 0) {
        const auto bin = static_cast<std::size_t>((pos - lo) / (hi - lo) * bins);
        ++hist.counts[std::min(bin, bins - 1)];
      }
      for (std::size_t k = 0; k < sup_acc.size(); ++k)
        sup_acc[k].add(sup > sup_levels[k] ? 1.0 : 0.0);
      for (std::size_t k = 0; k < inf_acc.size(); ++k)
        inf_acc[k].add(inf < inf_levels[k] ? 1.0 : 0.0);
    }
  });
  KilledObservables out{non_exit.done(n_paths), atom.done(n_paths), std::move(hist), {}, {}};
  for (std::size_t k = 0; k < sup_acc.size(); ++k)
    out.sup_tail_at[sup_levels[k]] = sup_acc[k].done(n_paths);
  for (std::size_t k = 0; k < inf_acc.size(); ++k)
    out.inf_cdf_at[inf_levels[k]] = inf_acc[k].done(n_paths);
  return out;
}

Estimate estimate_mean_passage(const ModelParams& params, double level,
                               std::uint64_t n_paths, std::uint64_t seed,
                               std::optional<double> t_max) {
  if (!(level < 0)) throw std::domain_error("estimate_mean_passage: need level < 0");
  require_paths(n_paths);
  const Regime reg = regime(params);
  if (reg == Regime::positive)
    throw RegimeError("estimate_mean_passage requires m <= 0");

  double rate, down_rate, up_prob = 0, up_rate = 0;
  if (reg == Regime::negative) {
    rate = params.lambda;
    up_prob = params.p;
    up_rate = params.c;
    down_rate = 0;  // claims sampled from the model law
  } else {
    // Auxiliary decreasing process: rate lambda_0, Exp(b) downward jumps.
    rate = lambda_zero(params);
    down_rate = params.claims.exp_rate();
  }
  const double horizon = t_max.value_or(
      reg == Regime::negative ? 50.0 / std::fabs(drift(params))
                              : 50.0 * (1.0 - down_rate * level) / rate);

  Accumulator acc;
  std::uint64_t censored = 0;
  for_each_chunk(n_paths, seed, [&](Rng& rng, std::uint64_t n) {
    Accumulator chunk;
    for (std::uint64_t i = 0; i < n; ++i) {
      double t = 0, pos = 0;
      while (pos >= level) {
        t += rng.exponential(rate);
        if (t > horizon) {
          t = horizon;
          ++censored;
          break;
        }
        if (reg == Regime::negative)
          pos += rng.uniform() < up_prob ? rng.exponential(up_rate)
                                         : -params.claims.sample(rng);
        else
          pos -= rng.exponential(down_rate);
      }
      chunk.add(t);
    }
    acc.merge(chunk);
  });
  if (static_cast<double>(censored) / n_paths > 1e-3)
    throw std::runtime_error("estimate_mean_passage: censored fraction exceeds 0.1%");
  return acc.done(n_paths);
}

OvershootMoments estimate_overshoot(const ModelParams& params, const ExitQuery& query,
                                    std::uint64_t n_paths, std::uint64_t seed,
                                    std::optional<double> t_max) {
  validate(query);
  require_paths(n_paths);
  const double horizon = t_max.value_or(default_t_max(params, query.T));
  Accumulator first, second;
  std::uint64_t n_upper = 0;
  for_each_chunk(n_paths, seed, [&](Rng& rng, std::uint64_t n) {
    for (std::uint64_t i = 0; i < n; ++i) {
      const ExitSample sample = simulate_exit(params, query.x, query.T, rng, horizon);
      if (sample.side != ExitSide::upper) continue;
      ++n_upper;
      first.add(sample.overshoot);
      second.add(sample.overshoot * sample.overshoot);
    }
  });
  if (n_upper < 2) throw std::runtime_error("estimate_overshoot: too few upper exits");
  return {first.done(n_upper), second.done(n_upper), n_upper};
}

std::vector<Estimate> estimate_tau_cdf(const ModelParams& params, double x, double T,
                                       std::span<const double> times,
                                       std::uint64_t n_paths, std::uint64_t seed,
                                       std::optional<double> t_max) {
  validate(ExitQuery{x, T, 0});
  require_paths(n_paths);
  const double horizon = t_max.value_or(default_t_max(params, T));
  for (double t : times)
    if (!(t > 0 && t < horizon))
      throw std::domain_error("estimate_tau_cdf: times must lie in (0, t_max)");
  std::vector<Accumulator> acc(times.size());
  for_each_chunk(n_paths, seed, [&](Rng& rng, std::uint64_t n) {
    for (std::uint64_t i = 0; i < n; ++i) {
      const ExitSample sample = simulate_exit(params, x, T, rng, horizon);
      const double tau =
          sample.side == ExitSide::censored ? std::numeric_limits<double>::infinity()
                                            : sample.tau;
      for (std::size_t k = 0; k < times.size(); ++k)
        acc[k].add(tau <= times[k] ? 1.0 : 0.0);
    }
  });
  std::vector<Estimate> out;
  out.reserve(times.size());
  for (const auto& a : acc) out.push_back(a.done(n_paths));
  return out;
}

Estimate estimate_undershoot(const ModelParams& params, const ExitQuery& query, double z,
                             std::uint64_t n_paths, std::uint64_t seed,
                             std::optional<double> t_max) {
  validate(query);
  require_paths(n_paths);
  const double horizon = t_max.value_or(mgf_horizon(params, query));
  Accumulator acc;
  for_each_chunk(n_paths, seed, [&](Rng& rng, std::uint64_t n) {
    for (std::uint64_t i = 0; i < n; ++i) {
      const ExitSample sample = simulate_exit(params, query.x, query.T, rng, horizon);
      const bool hit = sample.side == ExitSide::lower && sample.position < z;
      acc.add(hit ? std::exp(-query.s * sample.tau) : 0.0);
    }
  });
  return acc.done(n_paths);
}

}  // namespace riskexit
