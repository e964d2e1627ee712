#include "riskexit/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "riskexit/rng.hpp"

namespace riskexit {

namespace {

constexpr int kTableQuadIntervals = 4096;

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

}  // namespace

ClaimDistribution ClaimDistribution::exponential(double b) {
  require(std::isfinite(b) && b > 0, "claim rate b must be positive");
  return ClaimDistribution(Exp{b});
}

ClaimDistribution ClaimDistribution::table(std::vector<double> u, std::vector<double> x) {
  require(u.size() == x.size(), "claim table: u and x must have equal length");
  require(u.size() >= 2, "claim table: need at least two nodes");
  require(u.front() == 0.0 && u.back() == 1.0, "claim table: u must run from 0 to 1");
  for (std::size_t i = 1; i < u.size(); ++i)
    require(u[i] > u[i - 1], "claim table: u must be strictly increasing");
  for (std::size_t i = 0; i < x.size(); ++i) {
    require(std::isfinite(x[i]) && x[i] > 0, "claim table: sizes must be positive");
    if (i > 0) require(x[i] >= x[i - 1], "claim table: sizes must be nondecreasing");
  }
  // Piecewise-linear inverse CDF: segment moments are exact.
  double mean = 0, m2 = 0;
  for (std::size_t i = 0; i + 1 < u.size(); ++i) {
    const double du = u[i + 1] - u[i], a = x[i], b = x[i + 1];
    mean += du * (a + b) / 2;
    m2 += du * (a * a + a * b + b * b) / 3;
  }
  return ClaimDistribution(Table{std::move(u), std::move(x), mean, m2});
}

ClaimDistribution ClaimDistribution::from_samples(std::vector<double> samples) {
  require(samples.size() >= 2, "claim samples: need at least two values");
  std::sort(samples.begin(), samples.end());
  std::vector<double> u(samples.size());
  for (std::size_t i = 0; i < u.size(); ++i)
    u[i] = static_cast<double>(i) / (u.size() - 1);
  return table(std::move(u), std::move(samples));
}

double ClaimDistribution::exp_rate() const {
  if (!is_exponential())
    throw UnsupportedClaimLawError("operation requires exponential claims");
  return std::get<Exp>(law_).b;
}

double ClaimDistribution::mean() const {
  if (is_exponential()) return 1.0 / std::get<Exp>(law_).b;
  return as_table().mean;
}

double ClaimDistribution::second_moment() const {
  if (is_exponential()) {
    const double b = std::get<Exp>(law_).b;
    return 2.0 / (b * b);
  }
  return as_table().second_moment;
}

namespace {

// Linear interpolation of the inverse CDF at probability u.
double table_quantile(const std::vector<double>& us, const std::vector<double>& xs,
                      double u) {
  auto it = std::upper_bound(us.begin(), us.end(), u);
  if (it == us.begin()) return xs.front();
  if (it == us.end()) return xs.back();
  const std::size_t i = static_cast<std::size_t>(it - us.begin());
  const double w = (u - us[i - 1]) / (us[i] - us[i - 1]);
  return xs[i - 1] + w * (xs[i] - xs[i - 1]);
}

}  // namespace

double ClaimDistribution::mgf_neg(double r) const {
  if (is_exponential()) {
    const double b = std::get<Exp>(law_).b;
    if (r <= -b) throw std::domain_error("mgf_neg: r must exceed -b");
    return b / (b + r);
  }
  if (r < 0) throw std::domain_error("mgf_neg: r must be >= 0 for table claims");
  const Table& t = as_table();
  const int n = kTableQuadIntervals;
  double acc = 0;
  for (int i = 0; i <= n; ++i) {
    const double u = static_cast<double>(i) / n;
    const double v = std::exp(-r * table_quantile(t.u, t.x, u));
    acc += (i == 0 || i == n) ? v / 2 : v;
  }
  return acc / n;
}

std::complex<double> ClaimDistribution::charfn_neg(double alpha) const {
  if (is_exponential()) {
    const double b = std::get<Exp>(law_).b;
    return b / std::complex<double>(b, alpha);
  }
  const Table& t = as_table();
  const int n = kTableQuadIntervals;
  std::complex<double> acc = 0;
  for (int i = 0; i <= n; ++i) {
    const double u = static_cast<double>(i) / n;
    const double xi = table_quantile(t.u, t.x, u);
    const std::complex<double> v = std::exp(std::complex<double>(0, -alpha * xi));
    acc += (i == 0 || i == n) ? v * 0.5 : v;
  }
  return acc / static_cast<double>(n);
}

double ClaimDistribution::sample(Rng& rng) const {
  if (is_exponential()) return rng.exponential(std::get<Exp>(law_).b);
  const Table& t = as_table();
  return table_quantile(t.u, t.x, rng.uniform());
}

ModelParams make_model(double lambda, double p, double c, ClaimDistribution claims) {
  ModelParams params{lambda, p, 1.0 - p, c, std::move(claims)};
  validate(params);
  return params;
}

void validate(const ModelParams& params) {
  require(std::isfinite(params.lambda) && params.lambda > 0, "lambda must be positive");
  require(std::isfinite(params.c) && params.c > 0, "c must be positive");
  require(std::isfinite(params.p) && params.p > 0 && params.p < 1, "p must be in (0,1)");
  require(std::isfinite(params.q) && std::fabs(params.p + params.q - 1.0) <= 1e-12,
          "p + q must equal 1");
}

Moments moments(const ModelParams& params) {
  const double m =
      params.lambda * (params.p / params.c - params.q * params.claims.mean());
  const double s2 = params.lambda * (2 * params.p / (params.c * params.c) +
                                     params.q * params.claims.second_moment());
  return {m, s2};
}

double drift(const ModelParams& params) { return moments(params).m; }
double variance(const ModelParams& params) { return moments(params).sigma1_sq; }

Regime regime(const ModelParams& params) {
  const double m = drift(params);
  const double scale =
      params.lambda * (params.p / params.c + params.q * params.claims.mean());
  if (std::fabs(m) <= 1e-12 * scale) return Regime::zero;
  return m > 0 ? Regime::positive : Regime::negative;
}

double cumulant_real(const ModelParams& params, double r) {
  if (!(r < params.c)) throw std::domain_error("cumulant_real: r must be below c");
  return params.lambda * params.p * r / (params.c - r) +
         params.lambda * params.q * (params.claims.mgf_neg(r) - 1.0);
}

std::complex<double> cumulant(const ModelParams& params, double alpha) {
  const std::complex<double> prem =
      params.c / std::complex<double>(params.c, -alpha) - 1.0;
  return params.lambda * params.p * prem +
         params.lambda * params.q * (params.claims.charfn_neg(alpha) - 1.0);
}

std::complex<double> charfn_killed(const ModelParams& params, double s, double alpha) {
  if (!(s > 0)) throw std::domain_error("charfn_killed: s must be positive");
  return s / (s - cumulant(params, alpha));
}

}  // namespace riskexit
