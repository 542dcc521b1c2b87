#pragma once

#include <functional>

namespace roughlab::quad {

// Adaptive Gauss-Kronrod on a finite interval.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = 1e-10);

// Endpoint-singularity tolerant rule on a finite interval (tanh-sinh).
double integrate_singular(const std::function<double(double)>& f, double a,
                          double b, double rel_tol = 1e-10);

// Oscillatory power-law tails, A > 0, s > 0:
//   cos_power_tail(s, A) = \int_A^inf u^{-s} cos(u) du
//   sin_power_tail(s, A) = \int_A^inf u^{-s} sin(u) du
// Evaluated by repeated integration by parts; accurate for A >~ 50.
double cos_power_tail(double s, double A);
double sin_power_tail(double s, double A);

// \int_0^inf (1 - cos u) u^{-1-p} du for p in (0,2).
double one_minus_cos_moment(double p);

// \int_0^inf u^{-s} cos(u) du for s in (0,1).
double cos_power_moment(double s);

}  // namespace roughlab::quad
