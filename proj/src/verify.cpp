#include "riskexit/verify.hpp"

#include <cmath>
#include <functional>
#include <set>
#include <stdexcept>

#include "riskexit/exit.hpp"
#include "riskexit/mc.hpp"
#include "riskexit/model.hpp"
#include "riskexit/quadrature.hpp"
#include "riskexit/wiener_hopf.hpp"

namespace riskexit {

namespace {

struct NamedModel {
  const char* name;
  ModelParams params;
  double x, T;  // reference exit query
};

std::vector<NamedModel> test_models() {
  return {
      {"sym", make_model(1, 0.5, 1, ClaimDistribution::exponential(1)), 1, 3},
      {"m_plus", make_model(1, 0.6, 1, ClaimDistribution::exponential(2)), 1, 2},
      {"m_zero", make_model(1, 1.0 / 3, 1, ClaimDistribution::exponential(2)), 1, 2},
      {"m_minus", make_model(1, 0.4, 2, ClaimDistribution::exponential(1)), 1, 2},
  };
}

class Harness {
 public:
  explicit Harness(const VerifyOptions& opts) : opts_(opts) {}

  void check(const std::string& suite, const std::string& name, double got,
             double target, double tol) {
    const double scaled = tol * opts_.tol_scale;
    results_.push_back(
        {suite, name, target, got, scaled, std::fabs(got - target) <= scaled});
  }

  // MC agreement at 3 standard errors (the 3 is scaled with the tolerances).
  void check_mc(const std::string& suite, const std::string& name,
                const Estimate& est, double target) {
    check(suite, name, est.mean, target, 3.0 * est.std_error);
  }

  const VerifyOptions& opts() const { return opts_; }
  std::vector<CheckResult> take() { return std::move(results_); }

 private:
  VerifyOptions opts_;
  std::vector<CheckResult> results_;
};

void roots_suite(Harness& h) {
  const auto models = test_models();
  const auto& sym = models[0].params;
  for (double s : {0.1, 1.0, 3.0, 10.0}) {
    const double expected = std::sqrt(s / (s + 1.0));
    const Factorization f = solve_factorization(sym, s);
    h.check("roots", "sym rho_plus closed form s=" + std::to_string(s), f.rho_plus,
            expected, 1e-10);
  }
  for (const auto& m : models) {
    for (double s : {0.1, 1.0, 3.0, 10.0}) {
      const Factorization f = solve_factorization(m.params, s);
      h.check("roots", std::string(m.name) + " p+p- identity s=" + std::to_string(s),
              f.p_plus * f.minus->p_minus, s / (s + m.params.lambda), 1e-10);
    }
    double prev = 0;
    bool increasing = true;
    double max_residual = 0;
    for (double s = 1e-6; s <= 100.0; s *= 10) {
      const Factorization f = solve_factorization(m.params, s);
      increasing = increasing && f.rho_plus > prev;
      prev = f.rho_plus;
      max_residual = std::max(
          max_residual, std::fabs(cumulant_real(m.params, f.rho_plus) - s) /
                            std::max(1.0, s));
    }
    h.check("roots", std::string(m.name) + " lundberg residual (log grid)",
            max_residual, 0.0, 1e-10);
    h.check("roots", std::string(m.name) + " rho_plus increasing in s",
            increasing ? 1.0 : 0.0, 1.0, 0.5);
  }
}

void factorization_suite(Harness& h) {
  for (const auto& m : test_models()) {
    for (double s : {0.5, 1.0}) {
      const Factorization f = solve_factorization(m.params, s);
      double max_err = 0, max_mod = 0, max_conj = 0;
      for (int i = 0; i < 100; ++i) {
        const double alpha = -25.0 + 50.0 * i / 99.0;
        const auto lhs = phi_plus(f, alpha) * phi_minus(f, alpha);
        const auto rhs = charfn_killed(m.params, s, alpha);
        max_err = std::max(max_err, std::abs(lhs - rhs));
        max_mod = std::max(max_mod, std::abs(rhs));
        max_conj = std::max(max_conj, std::abs(std::conj(rhs) -
                                               charfn_killed(m.params, s, -alpha)));
      }
      const std::string tag = std::string(m.name) + " s=" + std::to_string(s);
      h.check("factorization", "phi+ phi- = phi (" + tag + ")", max_err, 0.0, 1e-9);
      h.check("factorization", "|phi| <= 1 (" + tag + ")", std::max(max_mod, 1.0), 1.0,
              1e-12);
      h.check("factorization", "conjugate symmetry (" + tag + ")", max_conj, 0.0,
              1e-12);
    }
  }
}

void exit_suite(Harness& h) {
  const auto models = test_models();
  const auto& sym = models[0].params;

  h.check("exit", "sym ruin(1,3)", ruin_prob(sym, 1, 3), 0.6, 1e-12);
  h.check("exit", "sym lower ruin(1,3)", 1.0 - ruin_prob(sym, 1, 3), 0.4, 1e-12);
  h.check("exit", "m_plus ruin(1,2)", ruin_prob(models[1].params, 1, 2),
          0.78310465595025329, 1e-10);
  h.check("exit", "m_zero ruin(1,2)", ruin_prob(models[2].params, 1, 2), 3.0 / 7.0,
          1e-10);
  h.check("exit", "m_minus ruin(1,2)", ruin_prob(models[3].params, 1, 2),
          0.21689534404974671, 1e-10);

  for (const auto& m : models) {
    const ExitQuery query{m.x, m.T, 1.0};
    const ExitTransforms tr = exit_transforms(m.params, query);
    h.check("exit", std::string(m.name) + " identity sum",
            tr.q_upper + tr.q_lower + tr.non_exit, 1.0, 1e-12);
    const Factorization f = solve_factorization(m.params, 1.0);
    const double t_inf = 100.0 / f.minus->rho_minus;
    h.check("exit", std::string(m.name) + " T->inf limit",
            q_upper(m.params, {m.x, t_inf, 1.0}), sup_tail(f, m.x), 1e-10);
    h.check("exit", std::string(m.name) + " s->0 -> ruin",
            q_upper(m.params, {m.x, m.T, 1e-8}), ruin_prob(m.params, m.x, m.T), 1e-4);

    double prev = 2.0;
    bool dec_x = true;
    for (double x = 0.2; x < m.T; x += 0.2) {
      const double v = q_upper(m.params, {x, m.T, 1.0});
      dec_x = dec_x && v < prev;
      prev = v;
    }
    h.check("exit", std::string(m.name) + " q_upper decreasing in x", dec_x ? 1 : 0, 1,
            0.5);
    prev = 2.0;
    bool dec_s = true;
    for (double s = 0.25; s <= 8; s *= 2) {
      const double v = q_upper(m.params, {m.x, m.T, s});
      dec_s = dec_s && v < prev;
      prev = v;
    }
    h.check("exit", std::string(m.name) + " q_upper decreasing in s", dec_s ? 1 : 0, 1,
            0.5);
  }

  // MC agreement.
  std::uint64_t seed = h.opts().seed;
  for (const auto& m : models) {
    const ExitQuery query{m.x, m.T, 1.0};
    const ExitTransforms tr = exit_transforms(m.params, query);
    const MgfEstimates mgf =
        estimate_exit_mgf(m.params, query, h.opts().n_paths, seed++);
    h.check_mc("exit", std::string(m.name) + " MC q_upper", mgf.upper, tr.q_upper);
    h.check_mc("exit", std::string(m.name) + " MC q_lower", mgf.lower, tr.q_lower);
    const MgfEstimates freq =
        estimate_exit_mgf(m.params, {m.x, m.T, 0.0}, h.opts().n_paths, seed++);
    h.check_mc("exit", std::string(m.name) + " MC ruin", freq.upper,
               ruin_prob(m.params, m.x, m.T));
  }

  // Extrema laws at theta_s.
  const NamedModel& sm = models[0];
  const Factorization f = solve_factorization(sm.params, 1.0);
  const std::vector<double> sup_levels{1.0};
  const std::vector<double> inf_levels{-1.0};
  const KilledObservables obs = estimate_killed_observables(
      sm.params, {sm.x, sm.T, 1.0}, h.opts().n_paths, seed++, 0, sup_levels,
      inf_levels);
  h.check_mc("exit", "sym MC sup tail at x=1", obs.sup_tail_at.at(1.0),
             sup_tail(f, 1.0));
  h.check_mc("exit", "sym MC inf cdf at x=-1", obs.inf_cdf_at.at(-1.0),
             inf_distribution(f, -1.0));

  // Overshoot moments (Exp(c)) and mean passage times.
  const OvershootMoments ov =
      estimate_overshoot(sm.params, {sm.x, sm.T, 0.0}, h.opts().n_paths, seed++);
  h.check_mc("exit", "sym MC overshoot mean", ov.mean, 1.0 / sm.params.c);
  h.check_mc("exit", "sym MC overshoot second moment", ov.second_moment,
             2.0 / (sm.params.c * sm.params.c));

  const auto& mm = models[3].params;
  h.check_mc("exit", "m_minus MC mean passage at -1",
             estimate_mean_passage(mm, -1.0, h.opts().n_paths / 10, seed++),
             mean_passage_below(mm, -1.0));
  h.check_mc("exit", "sym MC auxiliary mean passage at -1",
             estimate_mean_passage(sm.params, -1.0, h.opts().n_paths / 10, seed++),
             mean_passage_below_zero_drift(sm.params, -1.0));
}

void densities_suite(Harness& h) {
  const auto models = test_models();
  std::uint64_t seed = h.opts().seed + 100;
  for (const auto& m : models) {
    const ExitQuery query{m.x, m.T, 1.0};
    const ExitTransforms tr = exit_transforms(m.params, query);

    double min_density = 1.0;
    for (int i = 1; i < 60; ++i) {
      const double z = m.x - m.T + (m.T * i) / 60.0;
      if (z == 0) continue;
      min_density = std::min(min_density, pre_exit_density(m.params, query, z));
    }
    h.check("densities", std::string(m.name) + " h_s >= 0 (grid min)",
            std::min(min_density, 0.0), 0.0, 1e-15);

    const auto dens = [&](double z) { return pre_exit_density(m.params, query, z); };
    const double eps = 1e-10;
    const double mass = adaptive_simpson(dens, m.x - m.T + eps, -eps, 1e-11) +
                        adaptive_simpson(dens, eps, m.x - eps, 1e-11);
    h.check("densities", std::string(m.name) + " normalization",
            mass + pre_exit_atom(m.params, 1.0), tr.non_exit, 1e-8);

    h.check("densities", std::string(m.name) + " undershoot boundary",
            undershoot_transform(m.params, query, m.x - m.T), query.s * tr.q_lower,
            1e-10);

    // s^-1 h_s -> h'_0 at s = 1e-6 (relative, via scaled absolute tolerance).
    for (double z : {-0.5, 0.5}) {
      const double limit = limit_pre_exit_density(m.params, m.x, m.T, z);
      const double small_s = pre_exit_density(m.params, {m.x, m.T, 1e-6}, z) / 1e-6;
      h.check("densities", std::string(m.name) + " h'_0 consistency z=" +
                                std::to_string(z),
              small_s, limit, 1e-3 * std::fabs(limit));
    }

    // Limit law total mass: s=0 undershoot at z = x-T is the lower-exit probability.
    h.check("densities", std::string(m.name) + " limit undershoot mass",
            undershoot_transform(m.params, {m.x, m.T, 0.0}, m.x - m.T),
            1.0 - ruin_prob(m.params, m.x, m.T), 1e-8);
  }

  // MC: atom frequency, histogram of xi(theta_s), weighted undershoot CDF.
  const auto& sym = models[0];
  const ExitQuery query{sym.x, sym.T, 1.0};
  const KilledObservables obs = estimate_killed_observables(
      sym.params, query, h.opts().n_paths, seed++, 16, {}, {});
  h.check_mc("densities", "sym MC atom", obs.atom_freq,
             pre_exit_atom(sym.params, 1.0));
  h.check_mc("densities", "sym MC non_exit", obs.non_exit,
             exit_transforms(sym.params, query).non_exit);
  double worst_ratio = 0;
  for (std::size_t i = 0; i < obs.position_hist.counts.size(); ++i) {
    const double z = obs.position_hist.center(i);
    const double expected = pre_exit_density(sym.params, query, z);
    const double err = std::fabs(obs.position_hist.density(i) - expected);
    worst_ratio =
        std::max(worst_ratio, err / (3.0 * obs.position_hist.density_std_error(i)));
  }
  // Every bin within 3 standard errors of h_s at the bin center.
  h.check("densities", "sym MC histogram vs h_s (worst bin, err/3se)", worst_ratio, 0.0,
          1.0);

  for (double z : {-2.5, -3.0}) {
    const Estimate u =
        estimate_undershoot(sym.params, query, z, h.opts().n_paths, seed++);
    h.check_mc("densities", "sym MC undershoot z=" + std::to_string(z), u,
               undershoot_transform(sym.params, query, z) / query.s);
  }
}

void limits_suite(Harness& h) {
  const auto models = test_models();
  const double s = 1e-8;
  {
    const auto& m = models[1].params;  // m > 0
    const double rho = solve_factorization(m, s).rho_plus;
    h.check("limits", "m>0: rho_plus(s)*m/s -> 1", rho / s * drift(m), 1.0, 1e-3);
  }
  for (std::size_t i : {std::size_t{0}, std::size_t{2}}) {  // sym, m_zero
    const auto& m = models[i].params;
    const double rho = solve_factorization(m, s).rho_plus;
    const double expected = std::sqrt(2.0 * s) / std::sqrt(variance(m));
    h.check("limits",
            std::string(models[i].name) + " m=0: rho_plus(s)/sqrt(s) limit",
            rho / expected, 1.0, 1e-3);
  }
  {
    const auto& m = models[3].params;  // m < 0
    const double rho = solve_factorization(m, s).rho_plus;
    h.check("limits", "m<0: rho_plus(s) -> rho_plus(0)", rho, lundberg_root_zero(m),
            1e-3 * lundberg_root_zero(m));
  }
  const auto& sym = models[0];
  const Factorization f = solve_factorization(sym.params, 1.0);
  h.check("limits", "sym q_upper at T=100/rho_minus",
          q_upper(sym.params, {1.0, 100.0 / f.minus->rho_minus, 1.0}), sup_tail(f, 1.0),
          1e-10);
}

void mirror_suite(Harness& h) {
  for (const auto& m : test_models()) {
    for (double s : {0.5, 1.0, 3.0}) {
      const ExitQuery query{m.x, m.T, s};
      const double mirror = q_lower_mirror(m.params, query);
      h.check("mirror", std::string(m.name) + " vs q_lower s=" + std::to_string(s),
              mirror, exit_transforms(m.params, query).q_lower, 1e-10);
      const ModelParams reflected = make_model(
          m.params.lambda, m.params.q, m.params.claims.exp_rate(),
          ClaimDistribution::exponential(m.params.c));
      h.check("mirror",
              std::string(m.name) + " vs reflected q_upper s=" + std::to_string(s),
              mirror, q_upper(reflected, {m.T - m.x, m.T, s}), 1e-10);
    }
  }
  const auto sym = test_models()[0];
  for (double x : {0.5, 1.0, 2.0}) {
    h.check("mirror", "sym q_lower_mirror(x) = q_upper(T-x), x=" + std::to_string(x),
            q_lower_mirror(sym.params, {x, sym.T, 1.0}),
            q_upper(sym.params, {sym.T - x, sym.T, 1.0}), 1e-12);
  }
}

}  // namespace

std::vector<CheckResult> run_verify(const std::string& suite, const VerifyOptions& opts) {
  static const std::set<std::string> known{"roots",  "factorization", "exit",
                                           "densities", "limits",     "mirror",
                                           "all"};
  if (!known.count(suite))
    throw std::invalid_argument("unknown verification suite '" + suite + "'");
  Harness h(opts);
  const bool all = suite == "all";
  if (all || suite == "roots") roots_suite(h);
  if (all || suite == "factorization") factorization_suite(h);
  if (all || suite == "exit") exit_suite(h);
  if (all || suite == "densities") densities_suite(h);
  if (all || suite == "limits") limits_suite(h);
  if (all || suite == "mirror") mirror_suite(h);
  return h.take();
}

}  // namespace riskexit
