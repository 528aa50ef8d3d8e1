#ifndef INFLOW_BURGERS_HPP
#define INFLOW_BURGERS_HPP

#include <cassert>
#include <cmath>
#include <stdexcept>

#include "inflow/gas.hpp"
#include "inflow/numerics.hpp"

namespace inflow {

// Smoothed expanding data for w_t + w w_x = 0.  The initial ramp
//   w0(x) = w- + C_q delta_r int_0^{eps x} y^q e^-y dy,  x >= 0,
// is normalized with C_q = 1/Gamma(q+1), so w0(+inf) = w+ and
// w- <= w(t,x) < w+ holds for the characteristic solution.
struct BurgersData {
    double w_minus = -1.0;
    double w_plus = -0.5;
    double delta_r = 0.5;  // w+ - w-
    int q = 10;
    double eps = 0.1;
    double lgamma_q1 = 0.0;  // log Gamma(q+1)

    BurgersData() { lgamma_q1 = std::lgamma(q + 1.0); }

    BurgersData(double wm, double wp, int q_ = 10, double eps_ = 0.1)
        : w_minus(wm), w_plus(wp), delta_r(wp - wm), q(q_), eps(eps_) {
        if (!(w_minus < w_plus))
            throw std::domain_error("BurgersData: requires w- < w+ (expanding data)");
        if (q < 1) throw std::domain_error("BurgersData: q must be a positive integer");
        if (!(eps > 0.0 && eps <= 1.0)) throw std::domain_error("BurgersData: eps in (0,1]");
        lgamma_q1 = std::lgamma(q + 1.0);
    }

    static BurgersData from_states(const EndState& minus, const EndState& plus,
                                   const GasModel& gas, int q = 10, double eps = 0.1) {
        return BurgersData(lambda(1, minus.v, gas), lambda(1, plus.v, gas), q, eps);
    }
};

inline double burgers_initial(double x, const BurgersData& d) {
    if (x <= 0.0) return d.w_minus;
    return d.w_minus + d.delta_r * gamma_p(d.q + 1.0, d.eps * x);
}

// w0'(x) = delta_r eps (eps x)^q e^{-eps x} / Gamma(q+1)
inline double burgers_initial_dx(double x, const BurgersData& d) {
    if (x <= 0.0) return 0.0;
    const double z = d.eps * x;
    return d.delta_r * d.eps * std::exp(d.q * std::log(z) - z - d.lgamma_q1);
}

inline double burgers_initial_dxx(double x, const BurgersData& d) {
    if (x <= 0.0) return 0.0;
    return burgers_initial_dx(x, d) * (d.q / x - d.eps);
}

// Foot point x0 of the characteristic through (t, x):  x0 + t w0(x0) = x.
// The map is strictly increasing (w0' >= 0, t >= 0), so the root is unique
// inside the bracket [x - t w+, x - t w-].
inline double burgers_foot(double t, double x, const BurgersData& d) {
    if (t < 0.0) throw std::domain_error("burgers_foot: t must be nonnegative");
    if (t == 0.0) return x;
    if (x <= d.w_minus * t) return x - d.w_minus * t;  // constant branch, x0 <= 0

    double lo = x - d.w_plus * t;
    double hi = x - d.w_minus * t;
    if (lo > hi) std::swap(lo, hi);  // guards degenerate tiny delta_r
    double wlo = burgers_initial(lo, d);
    double whi = burgers_initial(hi, d);
    assert(lo + t * wlo - x <= 1e-9 * (1.0 + std::fabs(x)));
    assert(hi + t * whi - x >= -1e-9 * (1.0 + std::fabs(x)));

    const double wscale = std::max({1.0, std::fabs(d.w_minus), std::fabs(d.w_plus)});
    const double wtol = 1e-12 * wscale;
    const double gtol = 1e-13 * (1.0 + std::fabs(x));

    double x0 = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        const double w0 = burgers_initial(x0, d);
        const double g = x0 + t * w0 - x;
        if (std::fabs(g) <= gtol) break;
        if (g > 0.0) {
            hi = x0;
            whi = w0;
        } else {
            lo = x0;
            wlo = w0;
        }
        if (whi - wlo <= wtol) break;
        const double gp = 1.0 + t * burgers_initial_dx(x0, d);
        double next = x0 - g / gp;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (next == x0) break;
        x0 = next;
    }
    return x0;
}

inline double burgers_eval(double t, double x, const BurgersData& d) {
    if (t == 0.0) return burgers_initial(x, d);
    return burgers_initial(burgers_foot(t, x, d), d);
}

// Space derivative along the characteristic map: w_x = w0'(x0)/(1 + t w0'(x0)).
inline double burgers_wx(double t, double x, const BurgersData& d) {
    const double g = burgers_initial_dx(burgers_foot(t, x, d), d);
    return g / (1.0 + t * g);
}

// Second derivative: w_xx = w0''(x0)/(1 + t w0'(x0))^3.
inline double burgers_wxx(double t, double x, const BurgersData& d) {
    const double x0 = burgers_foot(t, x, d);
    const double g = burgers_initial_dx(x0, d);
    const double j = 1.0 + t * g;
    return burgers_initial_dxx(x0, d) / (j * j * j);
}

// max_x w0'(x), attained at eps x = q.
inline double burgers_initial_dx_max(const BurgersData& d) {
    return d.delta_r * d.eps * std::exp(d.q * std::log(double(d.q)) - d.q - d.lgamma_q1);
}

// Exact sup norm of w_x(t, .): z -> z/(1+tz) is increasing in z.
inline double burgers_wx_sup(double t, const BurgersData& d) {
    const double m = burgers_initial_dx_max(d);
    return m / (1.0 + t * m);
}

// L1 norm of w_x over [a, b]; w_x >= 0 makes this the endpoint difference.
inline double burgers_wx_l1(double t, double a, double b, const BurgersData& d) {
    return burgers_eval(t, b, d) - burgers_eval(t, a, d);
}

// Extent of the initial ramp: smallest x with 1 - P(q+1, eps x) <= tail.
inline double burgers_ramp_extent(const BurgersData& d, double tail = 1e-10) {
    double x = d.q / d.eps;
    while (gamma_q(d.q + 1.0, d.eps * x) > tail) x *= 1.5;
    return x;
}

}  // namespace inflow

#endif
