// riskexit: evaluate the closed-form exit functionals, run the exact Monte
// Carlo simulator, run the verification harness, and invert transforms.
//
// Exit codes: 0 success, 1 failed verification checks, 2 invalid input,
// 3 analytic quantity requested with a non-exponential claim law.

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "riskexit/exit.hpp"
#include "riskexit/laplace.hpp"
#include "riskexit/mc.hpp"
#include "riskexit/model_json.hpp"
#include "riskexit/verify.hpp"
#include "riskexit/wiener_hopf.hpp"

namespace {

using riskexit::ExitQuery;
using riskexit::ModelParams;

// Shortest round-trip decimal form; '.' decimal separator regardless of locale.
std::string fmt(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string fmt(std::uint64_t v) { return std::to_string(v); }

void emit_row(const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) std::cout << ',';
    std::cout << fields[i];
  }
  std::cout << '\n';
}

// "a" or "a:b:step", inclusive of both endpoints.
std::vector<double> parse_range(const std::string& text) {
  std::vector<double> parts;
  std::size_t begin = 0;
  while (true) {
    const std::size_t colon = text.find(':', begin);
    const std::string tok = text.substr(begin, colon - begin);
    try {
      std::size_t used = 0;
      parts.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw std::invalid_argument("invalid number '" + tok + "' in range '" + text +
                                  "'");
    }
    if (colon == std::string::npos) break;
    begin = colon + 1;
  }
  if (parts.size() == 1) return parts;
  if (parts.size() != 3)
    throw std::invalid_argument("range must be 'value' or 'lo:hi:step': " + text);
  const double lo = parts[0], hi = parts[1], step = parts[2];
  if (!(step > 0) || hi < lo)
    throw std::invalid_argument("range must satisfy lo <= hi, step > 0: " + text);
  std::vector<double> out;
  for (int i = 0;; ++i) {
    const double v = lo + i * step;
    if (v > hi + 1e-12 * step) break;
    out.push_back(std::min(v, hi));
  }
  return out;
}

struct Scenario {
  std::optional<ModelParams> model;
  std::vector<double> xs{1.0};
  std::vector<double> Ts{3.0};
  std::vector<double> ss{1.0};
  std::uint64_t n_paths = 1000000;
  std::uint64_t seed = 1;
  std::optional<double> t_max;
};

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open scenario file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("scenario parse error: ") + e.what());
  }
  Scenario sc;
  if (j.contains("model")) sc.model = riskexit::model_from_json(j.at("model"));
  if (j.contains("query")) {
    const auto& q = j.at("query");
    if (q.contains("x")) sc.xs = {q.at("x").get<double>()};
    if (q.contains("T")) sc.Ts = {q.at("T").get<double>()};
    if (q.contains("s")) sc.ss = {q.at("s").get<double>()};
    if (q.contains("s_list")) sc.ss = q.at("s_list").get<std::vector<double>>();
  }
  if (j.contains("run")) {
    const auto& r = j.at("run");
    if (r.contains("n_paths")) sc.n_paths = r.at("n_paths").get<std::uint64_t>();
    if (r.contains("seed")) sc.seed = r.at("seed").get<std::uint64_t>();
    if (r.contains("t_max")) sc.t_max = r.at("t_max").get<double>();
  }
  return sc;
}

struct CommonArgs {
  std::string model_file, scenario_file;
  std::string x_range, t_range, s_range;
  std::string quantity;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool need_quantity) {
  cmd->add_option("--model", args.model_file, "model JSON file");
  cmd->add_option("--scenario", args.scenario_file,
                  "scenario JSON file {model, query, run}");
  cmd->add_option("--x", args.x_range, "upper barrier x (value or lo:hi:step)");
  cmd->add_option("--T", args.t_range, "interval width T (value or lo:hi:step)");
  cmd->add_option("--s", args.s_range, "transform argument s (value or lo:hi:step)");
  if (need_quantity)
    cmd->add_option("--quantity", args.quantity,
                    "q_upper|q_lower|q_total|non_exit|ruin|density|overshoot|roots|"
                    "undershoot|mean_passage")
        ->required();
}

Scenario resolve(const CommonArgs& args) {
  Scenario sc;
  if (!args.scenario_file.empty()) sc = load_scenario(args.scenario_file);
  if (!args.model_file.empty())
    sc.model = riskexit::model_from_json_file(args.model_file);
  if (!sc.model) throw std::invalid_argument("no model given (--model or --scenario)");
  if (!args.x_range.empty()) sc.xs = parse_range(args.x_range);
  if (!args.t_range.empty()) sc.Ts = parse_range(args.t_range);
  if (!args.s_range.empty()) sc.ss = parse_range(args.s_range);
  return sc;
}

// Rows are collected before printing so an invalid combination anywhere in a
// sweep fails the whole command with exit code 2 and no partial table.
int run_eval(const CommonArgs& args, const std::string& z_range,
             const std::string& alpha_range, const std::string& level_range) {
  const Scenario sc = resolve(args);
  const ModelParams& model = *sc.model;
  const std::string& q = args.quantity;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  if (q == "roots") {
    header = {"x", "T", "s", "rho_plus", "p_plus", "q_plus", "rho_minus", "p_minus",
              "q_minus"};
    for (double x : sc.xs)
      for (double T : sc.Ts)
        for (double s : sc.ss) {
          const auto f = riskexit::solve_factorization(model, s);
          std::vector<std::string> row{fmt(x),          fmt(T),        fmt(s),
                                       fmt(f.rho_plus), fmt(f.p_plus), fmt(f.q_plus)};
          if (f.minus) {
            row.push_back(fmt(f.minus->rho_minus));
            row.push_back(fmt(f.minus->p_minus));
            row.push_back(fmt(f.minus->q_minus));
          } else {
            row.insert(row.end(), {"", "", ""});
          }
          rows.push_back(std::move(row));
        }
  } else if (q == "mean_passage") {
    header = {"x", "T", "s", "level", "mean_passage"};
    for (double level : parse_range(level_range.empty() ? "-1" : level_range)) {
      const double v = riskexit::regime(model) == riskexit::Regime::zero
                           ? riskexit::mean_passage_below_zero_drift(model, level)
                           : riskexit::mean_passage_below(model, level);
      rows.push_back({fmt(sc.xs[0]), fmt(sc.Ts[0]), fmt(sc.ss[0]), fmt(level), fmt(v)});
    }
  } else if (q == "density") {
    if (z_range.empty()) throw std::invalid_argument("density requires --z");
    header = {"x", "T", "s", "z", "density"};
    for (double x : sc.xs)
      for (double T : sc.Ts)
        for (double s : sc.ss)
          for (double z : parse_range(z_range)) {
            if (z == 0) {  // atom of the pre-exit law; the density excludes it
              std::cerr << "note: skipping z=0 (atom s/(s+lambda), no density)\n";
              continue;
            }
            const double v = s == 0
                                 ? riskexit::limit_pre_exit_density(model, x, T, z)
                                 : riskexit::pre_exit_density(model, {x, T, s}, z);
            rows.push_back({fmt(x), fmt(T), fmt(s), fmt(z), fmt(v)});
          }
  } else if (q == "undershoot") {
    if (z_range.empty()) throw std::invalid_argument("undershoot requires --z");
    header = {"x", "T", "s", "z", "undershoot"};
    for (double x : sc.xs)
      for (double T : sc.Ts)
        for (double s : sc.ss)
          for (double z : parse_range(z_range))
            rows.push_back({fmt(x), fmt(T), fmt(s), fmt(z),
                            fmt(riskexit::undershoot_transform(model, {x, T, s}, z))});
  } else if (q == "overshoot") {
    header = {"x", "T", "s", "alpha", "re_v_plus", "im_v_plus", "re_v_position",
              "im_v_position"};
    for (double x : sc.xs)
      for (double T : sc.Ts)
        for (double s : sc.ss)
          for (double alpha : parse_range(alpha_range.empty() ? "0" : alpha_range)) {
            const auto v = riskexit::overshoot_transform(model, {x, T, s}, alpha);
            rows.push_back({fmt(x), fmt(T), fmt(s), fmt(alpha), fmt(v.v_plus.real()),
                            fmt(v.v_plus.imag()), fmt(v.v_position.real()),
                            fmt(v.v_position.imag())});
          }
  } else {
    const std::set<std::string> transforms{"q_upper", "q_lower", "q_total", "non_exit",
                                           "ruin"};
    if (!transforms.count(q))
      throw std::invalid_argument("unknown eval quantity '" + q + "'");
    header = {"x", "T", "s", q};
    for (double x : sc.xs)
      for (double T : sc.Ts)
        for (double s : sc.ss) {
          double v = 0;
          if (q == "ruin") {
            s = 0;
            v = riskexit::ruin_prob(model, x, T);
          } else if (q == "q_upper") {
            v = riskexit::q_upper(model, {x, T, s});
          } else {
            const auto tr = riskexit::exit_transforms(model, {x, T, s});
            v = q == "q_lower" ? tr.q_lower : q == "q_total" ? tr.q_total : tr.non_exit;
          }
          rows.push_back({fmt(x), fmt(T), fmt(s), fmt(v)});
        }
  }

  emit_row(header);
  for (const auto& row : rows) emit_row(row);
  return 0;
}

int run_simulate(const CommonArgs& args, const std::string& z_range,
                 const std::string& level_range, std::uint64_t paths_flag,
                 std::uint64_t seed_flag, double tmax_flag, std::size_t bins) {
  Scenario sc = resolve(args);
  if (paths_flag) sc.n_paths = paths_flag;
  if (seed_flag) sc.seed = seed_flag;
  if (tmax_flag > 0) sc.t_max = tmax_flag;
  const ModelParams& model = *sc.model;
  const std::string& q = args.quantity;

  // Validate every query combination before any expensive run starts.
  if (q != "mean_passage") {
    for (double x : sc.xs)
      for (double T : sc.Ts)
        for (double s : sc.ss)
          riskexit::validate(riskexit::ExitQuery{x, T, q == "ruin" ? 0 : s});
  }

  const auto emit = [&](double x, double T, double s,
                        const std::vector<std::string>& extra,
                        const riskexit::Estimate& est, double censored) {
    std::vector<std::string> row{fmt(x), fmt(T), fmt(s)};
    row.insert(row.end(), extra.begin(), extra.end());
    row.insert(row.end(),
               {fmt(est.mean), fmt(est.std_error), fmt(est.n), fmt(censored)});
    emit_row(row);
  };

  if (q == "mean_passage") {
    emit_row({"x", "T", "s", "level", "mean", "stderr", "n", "censored_frac"});
    for (double level : parse_range(level_range.empty() ? "-1" : level_range)) {
      const auto est = riskexit::estimate_mean_passage(model, level, sc.n_paths,
                                                       sc.seed, sc.t_max);
      emit(sc.xs[0], sc.Ts[0], 0, {fmt(level)}, est, 0);
    }
    return 0;
  }

  if (q == "density") {
    emit_row({"x", "T", "s", "z", "mean", "stderr", "n", "censored_frac"});
    for (double x : sc.xs)
      for (double T : sc.Ts)
        for (double s : sc.ss) {
          const auto obs = riskexit::estimate_killed_observables(model, {x, T, s},
                                                                 sc.n_paths, sc.seed,
                                                                 bins);
          for (std::size_t i = 0; i < obs.position_hist.counts.size(); ++i) {
            emit(x, T, s, {fmt(obs.position_hist.center(i))},
                 {obs.position_hist.density(i), obs.position_hist.density_std_error(i),
                  sc.n_paths},
                 0);
          }
        }
    return 0;
  }

  if (q == "undershoot") {
    if (z_range.empty()) throw std::invalid_argument("undershoot requires --z");
    emit_row({"x", "T", "s", "z", "mean", "stderr", "n", "censored_frac"});
    for (double x : sc.xs)
      for (double T : sc.Ts)
        for (double s : sc.ss)
          for (double z : parse_range(z_range))
            emit(x, T, s, {fmt(z)},
                 riskexit::estimate_undershoot(model, {x, T, s}, z, sc.n_paths, sc.seed,
                                               sc.t_max),
                 0);
    return 0;
  }

  if (q == "overshoot") {
    emit_row({"x", "T", "s", "mean", "stderr", "n", "censored_frac"});
    for (double x : sc.xs)
      for (double T : sc.Ts)
        for (double s : sc.ss) {
          const auto ov = riskexit::estimate_overshoot(model, {x, T, s}, sc.n_paths,
                                                       sc.seed, sc.t_max);
          emit(x, T, s, {}, ov.mean, 0);
        }
    return 0;
  }

  if (q == "non_exit") {
    emit_row({"x", "T", "s", "mean", "stderr", "n", "censored_frac"});
    for (double x : sc.xs)
      for (double T : sc.Ts)
        for (double s : sc.ss) {
          const auto obs = riskexit::estimate_killed_observables(model, {x, T, s},
                                                                 sc.n_paths, sc.seed);
          emit(x, T, s, {}, obs.non_exit, 0);
        }
    return 0;
  }

  const std::set<std::string> mgf{"q_upper", "q_lower", "q_total", "ruin"};
  if (!mgf.count(q)) throw std::invalid_argument("unknown simulate quantity '" + q + "'");
  emit_row({"x", "T", "s", "mean", "stderr", "n", "censored_frac"});
  for (double x : sc.xs)
    for (double T : sc.Ts)
      for (double s : sc.ss) {
        if (q == "ruin") s = 0;
        const auto est =
            riskexit::estimate_exit_mgf(model, {x, T, s}, sc.n_paths, sc.seed, sc.t_max);
        const riskexit::Estimate& e = (q == "q_lower")   ? est.lower
                                      : (q == "q_total") ? est.total
                                                         : est.upper;
        emit(x, T, s, {}, e, est.censored_frac);
      }
  return 0;
}

int run_verify_cmd(const std::string& suite, bool as_json, std::uint64_t paths,
                   std::uint64_t seed) {
  riskexit::VerifyOptions opts;
  if (paths) opts.n_paths = paths;
  if (seed) opts.seed = seed;
  if (const char* tol = std::getenv("RISKEXIT_TOL")) {
    try {
      opts.tol_scale = std::stod(tol);
    } catch (const std::exception&) {
      throw std::invalid_argument("RISKEXIT_TOL must be a number");
    }
  }
  const auto results = riskexit::run_verify(suite, opts);
  std::size_t failed = 0;
  if (as_json) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& r : results) {
      out.push_back({{"suite", r.suite},
                     {"name", r.name},
                     {"target", r.target},
                     {"got", r.got},
                     {"tol", r.tol},
                     {"pass", r.pass}});
      failed += !r.pass;
    }
    std::cout << out.dump(2) << '\n';
  } else {
    for (const auto& r : results) {
      failed += !r.pass;
      std::cout << (r.pass ? "PASS" : "FAIL") << "  [" << r.suite << "] " << r.name
                << "  got=" << fmt(r.got) << " target=" << fmt(r.target)
                << " tol=" << fmt(r.tol) << '\n';
    }
    std::cout << results.size() - failed << "/" << results.size() << " checks passed\n";
  }
  return failed == 0 ? 0 : 1;
}

int run_invert(const CommonArgs& args, const std::string& t_range, int terms) {
  const Scenario sc = resolve(args);
  const ModelParams& model = *sc.model;
  const riskexit::InversionSpec spec{terms};
  emit_row({"x", "T", "t", "cdf"});
  for (double x : sc.xs)
    for (double T : sc.Ts)
      for (double t : parse_range(t_range)) {
        const auto transform = [&](double s) {
          return riskexit::exit_transforms(model, {x, T, s}).q_total;
        };
        const auto checked = riskexit::invert_checked(
            [&](double s) { return transform(s) / s; }, spec, t);
        if (!checked.stable)
          std::cerr << "warning: inversion unstable at t=" << fmt(t)
                    << " (terms " << terms << " vs " << terms - 2 << ": "
                    << fmt(checked.value) << " vs " << fmt(checked.alt_value) << ")\n";
        emit_row({fmt(x), fmt(T), fmt(t), fmt(checked.value)});
      }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-sided exit functionals for risk processes with stochastic premiums"};
  app.require_subcommand(1);

  CommonArgs eval_args, sim_args, inv_args;
  std::string eval_z, eval_alpha, eval_level;
  std::string sim_z, sim_level;
  std::uint64_t sim_paths = 0, sim_seed = 0;
  double sim_tmax = 0;
  std::size_t sim_bins = 20;

  CLI::App* eval = app.add_subcommand("eval", "evaluate closed-form quantities (CSV)");
  add_common(eval, eval_args, true);
  eval->add_option("--z", eval_z, "evaluation point(s) for density/undershoot");
  eval->add_option("--alpha", eval_alpha, "frequency argument(s) for overshoot");
  eval->add_option("--level", eval_level, "passage level(s) for mean_passage");

  CLI::App* sim = app.add_subcommand("simulate", "Monte Carlo estimates (CSV)");
  add_common(sim, sim_args, true);
  sim->add_option("--z", sim_z, "evaluation point(s) for undershoot");
  sim->add_option("--level", sim_level, "passage level(s) for mean_passage");
  sim->add_option("--paths", sim_paths, "number of paths");
  sim->add_option("--seed", sim_seed, "RNG seed");
  sim->add_option("--tmax", sim_tmax, "censoring horizon");
  sim->add_option("--bins", sim_bins, "histogram bins for density");

  std::string suite = "all";
  bool verify_json = false;
  std::uint64_t verify_paths = 0, verify_seed = 0;
  CLI::App* ver = app.add_subcommand("verify", "run the verification harness");
  ver->add_option("suite", suite, "roots|factorization|exit|densities|limits|mirror|all");
  ver->add_flag("--json", verify_json, "machine-readable JSON output");
  ver->add_option("--paths", verify_paths, "paths per MC check");
  ver->add_option("--seed", verify_seed, "RNG seed");

  std::string inv_t = "1";
  int inv_terms = 14;
  CLI::App* inv = app.add_subcommand("invert", "invert P{tau <= t} by Gaver-Stehfest");
  add_common(inv, inv_args, false);
  inv->add_option("--t", inv_t, "time grid (value or lo:hi:step)");
  inv->add_option("--terms", inv_terms, "Stehfest terms (even, 8..20)");

  try {
    app.parse(argc, argv);
    if (eval->parsed()) return run_eval(eval_args, eval_z, eval_alpha, eval_level);
    if (sim->parsed())
      return run_simulate(sim_args, sim_z, sim_level, sim_paths, sim_seed, sim_tmax,
                          sim_bins);
    if (ver->parsed()) return run_verify_cmd(suite, verify_json, verify_paths,
                                             verify_seed);
    if (inv->parsed()) return run_invert(inv_args, inv_t, inv_terms);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  } catch (const riskexit::UnsupportedClaimLawError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
