#include "roughlab/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <stdexcept>

namespace roughlab::quad {

double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol) {
    using boost::math::quadrature::gauss_kronrod;
    double error = 0.0;
    const double v = gauss_kronrod<double, 15>::integrate(f, a, b, 14, rel_tol, &error);
    return v;
}

double integrate_singular(const std::function<double(double)>& f, double a,
                          double b, double rel_tol) {
    boost::math::quadrature::tanh_sinh<double> ts;
    return ts.integrate(f, a, b, rel_tol);
}

namespace {

// C(s) = int_A^inf u^{-s} cos u du and S(s) = int_A^inf u^{-s} sin u du obey
//   C(s) = -A^{-s} sin A + s S(s+1),   S(s) = A^{-s} cos A - s C(s+1).
// Unrolling k levels leaves a remainder bounded by s(s+1)...(s+k-1) A^{-s-k}.
double osc_tail(double s, double A, bool want_cos, int depth) {
    if (depth == 0) return 0.0;
    if (want_cos)
        return -std::pow(A, -s) * std::sin(A) + s * osc_tail(s + 1.0, A, false, depth - 1);
    return std::pow(A, -s) * std::cos(A) - s * osc_tail(s + 1.0, A, true, depth - 1);
}

}  // namespace

double cos_power_tail(double s, double A) {
    if (s <= 0.0 || A <= 0.0) throw std::invalid_argument("cos_power_tail: need s > 0, A > 0");
    return osc_tail(s, A, true, 12);
}

double sin_power_tail(double s, double A) {
    if (s <= 0.0 || A <= 0.0) throw std::invalid_argument("sin_power_tail: need s > 0, A > 0");
    return osc_tail(s, A, false, 12);
}

double one_minus_cos_moment(double p) {
    if (p <= 0.0 || p >= 2.0) throw std::invalid_argument("one_minus_cos_moment: need p in (0,2)");
    const double A = 128.0 * M_PI;
    const auto f = [p](double u) {
        // series branch keeps the u -> 0 endpoint finite (1 - cos underflows)
        if (u < 1e-4)
            return std::pow(u, 1.0 - p) * (0.5 - u * u / 24.0);
        return (1.0 - std::cos(u)) * std::pow(u, -1.0 - p);
    };
    // Near zero the integrand behaves like u^{1-p}/2; tanh-sinh copes with the
    // derivative blow-up there, plain adaptive Gauss-Kronrod handles the rest.
    const double head = integrate_singular(f, 0.0, 1.0, 1e-12);
    const double mid = integrate(f, 1.0, A, 1e-12);
    const double tail = std::pow(A, -p) / p - cos_power_tail(1.0 + p, A);
    return head + mid + tail;
}

double cos_power_moment(double s) {
    if (s <= 0.0 || s >= 1.0) throw std::invalid_argument("cos_power_moment: need s in (0,1)");
    const double A = 128.0 * M_PI;
    const auto f = [s](double u) { return std::cos(u) * std::pow(u, -s); };
    const double head = integrate_singular(f, 0.0, 1.0, 1e-12);
    const double mid = integrate(f, 1.0, A, 1e-12);
    return head + mid + cos_power_tail(s, A);
}

}  // namespace roughlab::quad
