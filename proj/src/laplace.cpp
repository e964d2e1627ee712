#include "riskexit/laplace.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace riskexit {

namespace {

double factorial(int n) {
  double v = 1;
  for (int k = 2; k <= n; ++k) v *= k;
  return v;
}

// Stehfest weights a_k, k = 1..n, n even.
std::vector<double> stehfest_weights(int n) {
  std::vector<double> a(n + 1, 0.0);
  const int half = n / 2;
  for (int k = 1; k <= n; ++k) {
    double sum = 0;
    const int j_lo = (k + 1) / 2;
    const int j_hi = std::min(k, half);
    for (int j = j_lo; j <= j_hi; ++j) {
      sum += std::pow(j, half) * factorial(2 * j) /
             (factorial(half - j) * factorial(j) * factorial(j - 1) * factorial(k - j) *
              factorial(2 * j - k));
    }
    a[k] = ((half + k) % 2 == 0 ? 1.0 : -1.0) * sum;
  }
  return a;
}

double evaluate(const std::function<double(double)>& transform, int terms, double t) {
  const double ln2_t = std::log(2.0) / t;
  const std::vector<double> a = stehfest_weights(terms);
  double sum = 0;
  for (int k = 1; k <= terms; ++k) sum += a[k] * transform(k * ln2_t);
  return ln2_t * sum;
}

}  // namespace

void validate(const InversionSpec& spec) {
  if (spec.terms % 2 != 0 || spec.terms < 8 || spec.terms > 20)
    throw std::invalid_argument("InversionSpec: terms must be even and within [8, 20]");
}

double invert(const std::function<double(double)>& transform, const InversionSpec& spec,
              double t) {
  validate(spec);
  if (!(t > 0)) throw std::domain_error("invert: t must be positive");
  return evaluate(transform, spec.terms, t);
}

double invert_cdf(const std::function<double(double)>& transform,
                  const InversionSpec& spec, double t) {
  return invert([&](double s) { return transform(s) / s; }, spec, t);
}

InversionResult invert_checked(const std::function<double(double)>& transform,
                               const InversionSpec& spec, double t) {
  validate(spec);
  if (!(t > 0)) throw std::domain_error("invert_checked: t must be positive");
  const double v = evaluate(transform, spec.terms, t);
  const double alt = evaluate(transform, spec.terms - 2, t);
  const double denom = std::max(std::fabs(v), 1e-300);
  return {v, alt, std::fabs(v - alt) / denom <= 1e-4};
}

}  // namespace riskexit
