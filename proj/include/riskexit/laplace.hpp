#pragma once

#include <functional>

namespace riskexit {

// Gaver-Stehfest inversion. The transforms produced by the exit module are
// real-valued and smooth on s > 0, which is the regime where the method is
// dependable; `terms` must be even and within the double-precision stability
// window [8, 20].
struct InversionSpec {
  int terms = 14;
};

void validate(const InversionSpec& spec);

// f(t) ~ (ln 2 / t) sum_k a_k F(k ln 2 / t).
double invert(const std::function<double(double)>& transform, const InversionSpec& spec,
              double t);

// For a CDF whose Laplace-Stieltjes transform is `transform`, inverts
// transform(s)/s.
double invert_cdf(const std::function<double(double)>& transform,
                  const InversionSpec& spec, double t);

struct InversionResult {
  double value;      // at spec.terms
  double alt_value;  // at spec.terms - 2
  bool stable;       // relative disagreement <= 1e-4
};

InversionResult invert_checked(const std::function<double(double)>& transform,
                               const InversionSpec& spec, double t);

}  // namespace riskexit
