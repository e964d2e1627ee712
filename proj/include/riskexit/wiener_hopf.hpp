#pragma once

#include <complex>
#include <optional>

#include "riskexit/model.hpp"

namespace riskexit {

// Wiener-Hopf data at a fixed transform argument s > 0.
//
// rho_plus = c p_plus is the positive root of the Lundberg equation
// psi(-ir) = s; the running supremum xi^+(theta_s) has atom p_plus at 0 and
// tail q_plus e^{-rho_plus x}. The minus side exists only for exponential
// claims, where -rho_minus = -b p_minus is the negative root.
struct Factorization {
  double s;
  double c;
  double rho_plus;
  double p_plus;
  double q_plus;

  struct MinusSide {
    double b;
    double rho_minus;
    double p_minus;
    double q_minus;
  };
  std::optional<MinusSide> minus;
};

// Solves the Lundberg equation by bracketed Brent iteration on (0, c)
// (and on (-b, 0) for exponential claims).
Factorization solve_factorization(const ModelParams& params, double s);

// P{xi^+(theta_s) > x}, x > 0.
double sup_tail(const Factorization& fact, double x);

// P{xi^-(theta_s) < x}, x < 0. Exponential claims only.
double inf_distribution(const Factorization& fact, double x);

// phi_+(s,alpha) = p_+ (c - i alpha) / (rho_+ - i alpha).
std::complex<double> phi_plus(const Factorization& fact, double alpha);
// phi_-(s,alpha) = p_- (b + i alpha) / (rho_- + i alpha). Exponential claims only.
std::complex<double> phi_minus(const Factorization& fact, double alpha);

// ---- s -> 0 limit quantities, computed from the s = 0 Lundberg equation ----

// m < 0: the positive root of psi(-ir) = 0.
double lundberg_root_zero(const ModelParams& params);

// m > 0, exponential claims: law of the all-time infimum,
// P{xi^- < x} = q_minus e^{rho_minus x} (x < 0) with atom p_minus at 0.
struct InfLimitLaw {
  double rho_minus;
  double p_minus;
  double q_minus;
};
InfLimitLaw limit_inf_law(const ModelParams& params);

// Jump rate of the auxiliary decreasing process for m = 0:
// lambda_0 = lambda q (c + b) / b. Exponential claims only.
double lambda_zero(const ModelParams& params);

// E tau^-(x) = (1 - b x) / (lambda p_plus), m < 0, x < 0, exponential claims;
// p_plus is the s -> 0 limit lundberg_root_zero / c.
double mean_passage_below(const ModelParams& params, double x);

// E tau_0(x) = (1 - b x) / lambda_0 for the auxiliary process, m = 0, x < 0.
double mean_passage_below_zero_drift(const ModelParams& params, double x);

}  // namespace riskexit
