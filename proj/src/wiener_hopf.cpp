#include "riskexit/wiener_hopf.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

namespace riskexit {

namespace {

// Brent's zeroin on a sign-changing bracket, run to machine precision.
double brent(const std::function<double(double)>& f, double a, double b, double fa,
             double fb) {
  const double eps = std::numeric_limits<double>::epsilon();
  double c = a, fc = fa;
  double d = b - a, e = d;
  for (int iter = 0; iter < 200; ++iter) {
    if ((fb > 0) == (fc > 0)) {
      c = a;
      fc = fa;
      d = e = b - a;
    }
    if (std::fabs(fc) < std::fabs(fb)) {
      a = b;
      b = c;
      c = a;
      fa = fb;
      fb = fc;
      fc = fa;
    }
    const double tol1 = 2 * eps * std::fabs(b);
    const double xm = 0.5 * (c - b);
    if (std::fabs(xm) <= tol1 || fb == 0.0) return b;
    if (std::fabs(e) >= tol1 && std::fabs(fa) > std::fabs(fb)) {
      double p, q;
      const double s = fb / fa;
      if (a == c) {
        p = 2 * xm * s;
        q = 1 - s;
      } else {
        q = fa / fc;
        const double r = fb / fc;
        p = s * (2 * xm * q * (q - r) - (b - a) * (r - 1));
        q = (q - 1) * (r - 1) * (s - 1);
      }
      if (p > 0) q = -q;
      p = std::fabs(p);
      if (2 * p < std::min(3 * xm * q - std::fabs(tol1 * q), std::fabs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = xm;
        e = d;
      }
    } else {
      d = xm;
      e = d;
    }
    a = b;
    fa = fb;
    b += std::fabs(d) > tol1 ? d : (xm > 0 ? tol1 : -tol1);
    fb = f(b);
  }
  return b;
}

[[noreturn]] void bracket_failure(const char* what, double lo, double hi, double flo,
                                  double fhi) {
  std::ostringstream os;
  os << what << ": no sign change on bracket [" << lo << ", " << hi << "], f(lo)=" << flo
     << ", f(hi)=" << fhi;
  throw std::runtime_error(os.str());
}

// Root of f in (0, limit): f(0) = 0, f -> +inf at limit^-, and the target
// level sits strictly between f near 0 and f near the pole.
double bracketed_root(const std::function<double(double)>& f, double limit,
                      const char* what) {
  double lo = 1e-12 * limit;
  const double hi = limit * (1.0 - 1e-12);
  const double fhi = f(hi);
  double flo = f(lo);
  for (int k = 0; k < 40 && flo >= 0; ++k) {
    lo *= 1e-3;
    flo = f(lo);
  }
  if (!(flo < 0 && fhi > 0)) bracket_failure(what, lo, hi, flo, fhi);
  return brent(f, lo, hi, flo, fhi);
}

}  // namespace

Factorization solve_factorization(const ModelParams& params, double s) {
  if (!(s > 0)) throw std::invalid_argument("solve_factorization: s must be positive");
  const double c = params.c;
  const double rho_plus = bracketed_root(
      [&](double r) { return cumulant_real(params, r) - s; }, c, "lundberg rho_plus");
  Factorization fact{s, c, rho_plus, rho_plus / c, 1.0 - rho_plus / c, std::nullopt};
  if (params.claims.is_exponential()) {
    const double b = params.claims.exp_rate();
    const double rho_minus = bracketed_root(
        [&](double r) { return cumulant_real(params, -r) - s; }, b, "lundberg rho_minus");
    fact.minus =
        Factorization::MinusSide{b, rho_minus, rho_minus / b, 1.0 - rho_minus / b};
  }
  return fact;
}

double sup_tail(const Factorization& fact, double x) {
  if (!(x > 0)) throw std::domain_error("sup_tail: x must be positive");
  return fact.q_plus * std::exp(-fact.rho_plus * x);
}

double inf_distribution(const Factorization& fact, double x) {
  if (!fact.minus)
    throw UnsupportedClaimLawError("inf_distribution requires exponential claims");
  if (!(x < 0)) throw std::domain_error("inf_distribution: x must be negative");
  return fact.minus->q_minus * std::exp(fact.minus->rho_minus * x);
}

std::complex<double> phi_plus(const Factorization& fact, double alpha) {
  return fact.p_plus * std::complex<double>(fact.c, -alpha) /
         std::complex<double>(fact.rho_plus, -alpha);
}

std::complex<double> phi_minus(const Factorization& fact, double alpha) {
  if (!fact.minus)
    throw UnsupportedClaimLawError("phi_minus requires exponential claims");
  return fact.minus->p_minus * std::complex<double>(fact.minus->b, alpha) /
         std::complex<double>(fact.minus->rho_minus, alpha);
}

double lundberg_root_zero(const ModelParams& params) {
  if (regime(params) != Regime::negative)
    throw RegimeError("lundberg_root_zero requires m < 0");
  return bracketed_root([&](double r) { return cumulant_real(params, r); }, params.c,
                        "lundberg rho_plus at s=0");
}

InfLimitLaw limit_inf_law(const ModelParams& params) {
  if (regime(params) != Regime::positive)
    throw RegimeError("limit_inf_law requires m > 0");
  const double b = params.claims.exp_rate();
  const double rho = bracketed_root([&](double r) { return cumulant_real(params, -r); },
                                    b, "lundberg rho_minus at s=0");
  return {rho, rho / b, 1.0 - rho / b};
}

double lambda_zero(const ModelParams& params) {
  const double b = params.claims.exp_rate();
  return params.lambda * params.q * (params.c + b) / b;
}

double mean_passage_below(const ModelParams& params, double x) {
  if (regime(params) != Regime::negative)
    throw RegimeError("mean_passage_below requires m < 0");
  const double b = params.claims.exp_rate();
  if (!(x < 0)) throw std::domain_error("mean_passage_below: x must be negative");
  const double p_plus = lundberg_root_zero(params) / params.c;
  return (1.0 - b * x) / (params.lambda * p_plus);
}

double mean_passage_below_zero_drift(const ModelParams& params, double x) {
  if (regime(params) != Regime::zero)
    throw RegimeError("mean_passage_below_zero_drift requires m = 0");
  const double b = params.claims.exp_rate();
  if (!(x < 0))
    throw std::domain_error("mean_passage_below_zero_drift: x must be negative");
  return (1.0 - b * x) / lambda_zero(params);
}

}  // namespace riskexit
