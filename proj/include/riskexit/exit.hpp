#pragma once

#include <complex>

#include "riskexit/model.hpp"

namespace riskexit {

// Two-sided exit problem from the interval (x - T, x), started at 0.
struct ExitQuery {
  double x;  // upper barrier, 0 < x < T
  double T;  // interval width
  double s;  // transform argument, >= 0
};

void validate(const ExitQuery& query);

struct ExitTransforms {
  double q_upper;   // E[e^{-s tau}; exit above]
  double q_lower;   // E[e^{-s tau}; exit below]
  double q_total;   // E[e^{-s tau}]
  double non_exit;  // P{tau > theta_s}
};

// E[e^{-s tau^+(x,T)}; A_+], the upper-exit transform. Exponential claims.
// s = 0 dispatches to ruin_prob.
double q_upper(const ModelParams& params, const ExitQuery& query);

// lim_{s->0} Q^T(s,x): the probability of exiting above before below,
// by drift regime. Exponential claims.
double ruin_prob(const ModelParams& params, double x, double T);

// All four transform components; the identity
// q_upper + q_lower + non_exit = 1 holds by construction.
ExitTransforms exit_transforms(const ModelParams& params, const ExitQuery& query);

// Joint transform of the upper exit time and overshoot: the overshoot is
// Exp(c) independent of (tau^+, A_+), so
//   v_plus     = c/(c - i alpha) Q^T(s,x)        (overshoot gamma^+)
//   v_position = e^{i alpha x} v_plus            (exit position xi(tau^+))
struct OvershootTransform {
  std::complex<double> v_plus;
  std::complex<double> v_position;
};
OvershootTransform overshoot_transform(const ModelParams& params, const ExitQuery& query,
                                       double alpha);

// P{xi(theta_s) = 0, tau > theta_s} = s / (s + lambda).
double pre_exit_atom(const ModelParams& params, double s);

// Density h_s(T,x,z) of xi(theta_s) on {tau > theta_s}, x-T < z < x, z != 0.
// Exponential claims, s > 0.
double pre_exit_density(const ModelParams& params, const ExitQuery& query, double z);

// h'_0(T,x,z) = lim_{s->0} s^{-1} h_s(T,x,z), by drift regime.
double limit_pre_exit_density(const ModelParams& params, double x, double T, double z);

// Undershoot law at the lower exit. For s > 0 returns
//   s E[e^{-s tau^-}; xi(tau^-) < z, A_-],  z <= x - T,
// in closed form; for s = 0 returns P{xi(tau^-) < z, A_-}.
double undershoot_transform(const ModelParams& params, const ExitQuery& query, double z);

// Lower-exit transform computed from the mirrored (almost lower
// semi-continuous) representation; equals exit_transforms().q_lower.
double q_lower_mirror(const ModelParams& params, const ExitQuery& query);

}  // namespace riskexit
