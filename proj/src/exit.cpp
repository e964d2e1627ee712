#include "riskexit/exit.hpp"

#include <cmath>
#include <string>

#include "riskexit/quadrature.hpp"
#include "riskexit/wiener_hopf.hpp"

namespace riskexit {

namespace {

// Both Lundberg roots and the atom masses of the extrema laws at a fixed s.
struct Parts {
  double s, c, b;
  double rp, pp, qp;  // plus side
  double rm, pm, qm;  // minus side
};

Parts parts(const ModelParams& params, double s) {
  const Factorization fact = solve_factorization(params, s);
  if (!fact.minus)
    throw UnsupportedClaimLawError("exit formulas require exponential claims");
  const auto& m = *fact.minus;
  return {s,           fact.c,      m.b,      fact.rho_plus, fact.p_plus,
          fact.q_plus, m.rho_minus, m.p_minus, m.q_minus};
}

// int_a^0 e^{rp y} dP_-(s, y) over [a, 0], atom of P_- at 0 included.
double plus_weighted_minus_mass(const Parts& f, double a) {
  const double k = f.rp + f.rm;
  return f.pm + f.qm * f.rm * (-std::expm1(k * a)) / k;
}

// int_{-inf}^{-T} e^{c (T + y)} dP_-(s, y).
double below_minus_t_mass(const Parts& f, double T) {
  return f.qm * f.rm * std::exp(-f.rm * T) / (f.c + f.rm);
}

double q_upper_value(const Parts& f, double x, double T) {
  const double num = f.qp * std::exp(-f.rp * x) * plus_weighted_minus_mass(f, x - T);
  const double den =
      std::exp(-f.rp * T) * below_minus_t_mass(f, T) + plus_weighted_minus_mass(f, -T);
  return num / den;
}

double non_exit_value(const Parts& f, double x, double T) {
  const double q = q_upper_value(f, x, T);
  return 1.0 - f.qm * std::exp(f.rm * (x - T)) -
         q * (below_minus_t_mass(f, T) + 1.0 - f.qm * std::exp(-f.rm * T));
}

// h_s(T,x,z) as a sum of exponentials: the first pair lives on z < 0 only.
struct HsCoeffs {
  double rp, rm;
  double neg_rm, neg_rp;  // coefficients of e^{rm z}, e^{-rp z} for z < 0
  double all_rm, all_rp;  // coefficients valid on the whole interval
  double q_up;
};

HsCoeffs hs_coeffs(const Parts& f, double x, double T) {
  const double q = q_upper_value(f, x, T);
  const double d0 = f.qm * f.rm / (f.rp + f.rm);
  const double w = f.pm + d0;
  return {f.rp,
          f.rm,
          f.pp * f.qm * f.rm + f.qp * f.rp * d0,
          -f.qp * f.rp * w,
          -f.rp * q * d0 * std::exp(-f.rm * x),
          f.rp * q * w * std::exp(f.rp * x),
          q};
}

double hs_value(const HsCoeffs& h, double z) {
  double v = h.all_rm * std::exp(h.rm * z) + h.all_rp * std::exp(-h.rp * z);
  if (z < 0) v += h.neg_rm * std::exp(h.rm * z) + h.neg_rp * std::exp(-h.rp * z);
  return v;
}

// int_a^b e^{k y} dy, stable for small |k|.
double exp_integral(double k, double a, double b) {
  const double d = b - a;
  if (k == 0) return d;
  return std::exp(k * a) * std::expm1(k * d) / k;
}

void require_interior(const ExitQuery& query, double z, const char* what) {
  if (!(z > query.x - query.T && z < query.x) || z == 0)
    throw std::domain_error(std::string(what) +
                            ": z must lie in (x-T, x) and differ from 0");
}

}  // namespace

void validate(const ExitQuery& query) {
  if (!(std::isfinite(query.x) && std::isfinite(query.T) && query.x > 0 &&
        query.x < query.T))
    throw std::domain_error("exit query: need 0 < x < T");
  if (!(query.s >= 0)) throw std::domain_error("exit query: need s >= 0");
}

double q_upper(const ModelParams& params, const ExitQuery& query) {
  validate(query);
  if (query.s == 0) return ruin_prob(params, query.x, query.T);
  return q_upper_value(parts(params, query.s), query.x, query.T);
}

double ruin_prob(const ModelParams& params, double x, double T) {
  validate(ExitQuery{x, T, 0});
  const double b = params.claims.exp_rate();
  const double c = params.c;
  switch (regime(params)) {
    case Regime::positive: {
      const InfLimitLaw law = limit_inf_law(params);
      return (1.0 - law.q_minus * std::exp(law.rho_minus * (x - T))) /
             (1.0 - law.q_minus * c / (c + law.rho_minus) * std::exp(-law.rho_minus * T));
    }
    case Regime::negative: {
      const double rp = lundberg_root_zero(params);
      const double qp = 1.0 - rp / c;
      return qp * std::exp(-rp * x) * (1.0 - b / (rp + b) * std::exp(rp * (x - T))) /
             (1.0 - b / (rp + b) * qp * std::exp(-rp * T));
    }
    case Regime::zero:
      return c * (1.0 + b * (T - x)) / (b + c + b * c * T);
  }
  throw std::logic_error("unreachable");
}

ExitTransforms exit_transforms(const ModelParams& params, const ExitQuery& query) {
  validate(query);
  if (!(query.s > 0)) throw std::domain_error("exit_transforms: need s > 0");
  const Parts f = parts(params, query.s);
  const double up = q_upper_value(f, query.x, query.T);
  const double ne = non_exit_value(f, query.x, query.T);
  const double total = 1.0 - ne;
  const double low = total - up;
  if (!(up >= 0 && up <= 1) || !(ne >= 0 && ne <= 1) || low < -1e-12 || low > 1)
    throw std::runtime_error("exit_transforms: components out of [0,1]");
  return {up, low, total, ne};
}

OvershootTransform overshoot_transform(const ModelParams& params, const ExitQuery& query,
                                       double alpha) {
  const double q = q_upper(params, query);
  const std::complex<double> v =
      params.c / std::complex<double>(params.c, -alpha) * q;
  return {v, std::exp(std::complex<double>(0, alpha * query.x)) * v};
}

double pre_exit_atom(const ModelParams& params, double s) {
  if (!(s > 0)) throw std::domain_error("pre_exit_atom: need s > 0");
  return s / (s + params.lambda);
}

double pre_exit_density(const ModelParams& params, const ExitQuery& query, double z) {
  validate(query);
  if (!(query.s > 0)) throw std::domain_error("pre_exit_density: need s > 0");
  require_interior(query, z, "pre_exit_density");
  return hs_value(hs_coeffs(parts(params, query.s), query.x, query.T), z);
}

double limit_pre_exit_density(const ModelParams& params, double x, double T, double z) {
  const ExitQuery query{x, T, 0};
  validate(query);
  require_interior(query, z, "limit_pre_exit_density");
  const double lam = params.lambda;
  const double b = params.claims.exp_rate();
  const double c = params.c;
  const double q = ruin_prob(params, x, T);
  switch (regime(params)) {
    case Regime::positive: {
      const double m = drift(params);
      const InfLimitLaw law = limit_inf_law(params);
      double v = q / m * (1.0 - law.q_minus * std::exp(law.rho_minus * (z - x)));
      if (z < 0)
        v += (law.q_minus * law.rho_minus / c * std::exp(law.rho_minus * z) -
              (1.0 - law.q_minus * std::exp(law.rho_minus * z))) /
             m;
      return v;
    }
    case Regime::negative: {
      const double rp = lundberg_root_zero(params);
      const double pp = rp / c;
      const double lp = lam * pp;
      // int_a^0 e^{rp (y - a)} dE tau^-(y); E tau^- jumps to 0 at y = 0.
      const auto weighted_dmean = [&](double a) {
        return -std::exp(-rp * a) / lp - b / lp * std::expm1(-rp * a) / rp;
      };
      double v = -q * rp * weighted_dmean(z - x);
      if (z < 0) v += b / lam + (1.0 - pp) * rp * weighted_dmean(z);
      return v;
    }
    case Regime::zero: {
      const double lam0 = lambda_zero(params);
      double v = c * q * (1.0 / lam - b * (z - x) / lam0);
      if (z < 0) v += b / lam0 - c / lam + c * b * z / lam0;
      return v;
    }
  }
  throw std::logic_error("unreachable");
}

double undershoot_transform(const ModelParams& params, const ExitQuery& query, double z) {
  validate(query);
  const double b = params.claims.exp_rate();
  const double xmT = query.x - query.T;
  if (z > xmT) throw std::domain_error("undershoot_transform: need z <= x - T");
  const double lam = params.lambda;
  if (query.s == 0) {
    // P{xi(tau^-) < z, A_-}: the jump-measure term plus the h'_0 convolution.
    // h'_0 lives on the open interval, so the panels are inset by eps.
    const auto weighted = [&](double y) {
      return std::exp(-b * y) * limit_pre_exit_density(params, query.x, query.T, y);
    };
    const double eps = 1e-10 * query.T;
    const double integral = adaptive_simpson(weighted, xmT + eps, -eps, 1e-11) +
                            adaptive_simpson(weighted, eps, query.x - eps, 1e-11);
    return params.q * std::exp(b * z) * (1.0 + lam * integral);
  }
  const Parts f = parts(params, query.s);
  const HsCoeffs h = hs_coeffs(f, query.x, query.T);
  const double weighted_mass =
      (h.neg_rm + h.all_rm) * exp_integral(h.rm - b, xmT, 0) +
      (h.neg_rp + h.all_rp) * exp_integral(-h.rp - b, xmT, 0) +
      h.all_rm * exp_integral(h.rm - b, 0, query.x) +
      h.all_rp * exp_integral(-h.rp - b, 0, query.x);
  return lam * params.q * std::exp(b * z) *
         (weighted_mass + query.s / (query.s + lam));
}

double q_lower_mirror(const ModelParams& params, const ExitQuery& query) {
  validate(query);
  if (!(query.s > 0)) throw std::domain_error("q_lower_mirror: need s > 0");
  const Parts f = parts(params, query.s);
  const double k = f.rp + f.rm;
  // int_0^a e^{rm (a - y)} dP_+(s, y) = e^{rm a} * plus_mass(a), atom included.
  const auto plus_mass = [&](double a) {
    return f.pp + f.qp * f.rp * (-std::expm1(-k * a)) / k;
  };
  const double tail_mass = f.qp * f.rp * std::exp(-f.rp * query.T) / (f.b + f.rp);
  return f.qm * std::exp(f.rm * (query.x - query.T)) * plus_mass(query.x) /
         (std::exp(-f.rm * query.T) * tail_mass + plus_mass(query.T));
}

}  // namespace riskexit
