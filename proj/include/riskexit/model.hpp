#pragma once

#include <complex>
#include <stdexcept>
#include <variant>
#include <vector>

namespace riskexit {

class Rng;

// Requested analytic quantity needs exponential claims but the model carries
// a generic (table) claim law.
class UnsupportedClaimLawError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// An s->0 limit quantity was requested in the wrong drift regime.
class RegimeError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Law of the positive claim sizes xi'_k. Exponential(b) enables every closed
// form; a piecewise-linear inverse-CDF table supports MC and diagnostics only.
class ClaimDistribution {
 public:
  static ClaimDistribution exponential(double b);
  // u: probability grid, strictly increasing from 0 to 1.
  // x: claim sizes at u, nondecreasing, strictly positive.
  static ClaimDistribution table(std::vector<double> u, std::vector<double> x);
  static ClaimDistribution from_samples(std::vector<double> samples);

  bool is_exponential() const { return std::holds_alternative<Exp>(law_); }
  double exp_rate() const;  // b; throws UnsupportedClaimLawError for tables

  double mean() const;
  double second_moment() const;

  // E[e^{-r xi'}]. Exponential: r > -b. Table: r >= 0 (trapezoid quadrature
  // over the inverse CDF, 4096 intervals).
  double mgf_neg(double r) const;
  // E[e^{-i alpha xi'}], i.e. the ch.f. of the negative jump -xi'.
  std::complex<double> charfn_neg(double alpha) const;

  double sample(Rng& rng) const;

 private:
  struct Exp {
    double b;
  };
  struct Table {
    std::vector<double> u, x;
    double mean, second_moment;
  };
  std::variant<Exp, Table> law_;

  explicit ClaimDistribution(Exp e) : law_(e) {}
  explicit ClaimDistribution(Table t) : law_(std::move(t)) {}
  const Table& as_table() const { return std::get<Table>(law_); }
};

// Process xi(t) = C(t) - S(t): premium jumps +Exp(c) with probability p,
// claim jumps -xi' with probability q, arriving at Poisson rate lambda.
struct ModelParams {
  double lambda;
  double p;
  double q;
  double c;
  ClaimDistribution claims;
};

// Builds a model with q = 1 - p and validates all invariants.
ModelParams make_model(double lambda, double p, double c, ClaimDistribution claims);
void validate(const ModelParams& params);

struct Moments {
  double m;          // drift E xi(1) = lambda (p/c - q E[xi'])
  double sigma1_sq;  // Var xi(1)   = lambda (2p/c^2 + q E[xi'^2])
};

Moments moments(const ModelParams& params);
double drift(const ModelParams& params);
double variance(const ModelParams& params);

enum class Regime { negative, zero, positive };

// Sign of the drift, with |m| <= 1e-12 * lambda(p/c + q E[xi']) read as zero
// so that models specified with rounded parameters land in the intended regime.
Regime regime(const ModelParams& params);

// psi(-ir) = lambda p r/(c-r) + lambda q (E[e^{-r xi'}] - 1).
// Domain: r in (-b, c) for exponential claims, [0, c) for tables.
double cumulant_real(const ModelParams& params, double r);

// psi(alpha) on the real axis.
std::complex<double> cumulant(const ModelParams& params, double alpha);

// E e^{i alpha xi(theta_s)} = s / (s - psi(alpha)), s > 0.
std::complex<double> charfn_killed(const ModelParams& params, double s, double alpha);

}  // namespace riskexit
