#ifndef INFLOW_ODE45_HPP
#define INFLOW_ODE45_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

namespace inflow {

struct Ode45Options {
    double rtol = 1e-10;
    double atol = 1e-13;
    double max_step = std::numeric_limits<double>::infinity();
    double initial_step = 0.0;  // 0 -> picked from the first slope
    std::size_t max_steps = 4'000'000;
};

// Accepted-step mesh of a scalar ODE solve.  Derivative values are stored
// with the states, so intervals can be evaluated by cubic Hermite
// interpolation (error O(h^4 f'''') with exact endpoint slopes).
struct OdeSolution {
    std::vector<double> x;
    std::vector<double> y;
    std::vector<double> dydx;
    bool stopped_by_predicate = false;

    double eval(double xq) const {
        if (x.empty()) throw std::logic_error("OdeSolution::eval on empty solution");
        if (xq <= x.front()) return y.front();
        if (xq >= x.back()) return y.back();
        const auto it = std::upper_bound(x.begin(), x.end(), xq);
        const std::size_t i = static_cast<std::size_t>(it - x.begin()) - 1;
        const double h = x[i + 1] - x[i];
        const double s = (xq - x[i]) / h;
        const double s2 = s * s, s3 = s2 * s;
        const double h00 = 2 * s3 - 3 * s2 + 1;
        const double h10 = s3 - 2 * s2 + s;
        const double h01 = -2 * s3 + 3 * s2;
        const double h11 = s3 - s2;
        return h00 * y[i] + h10 * h * dydx[i] + h01 * y[i + 1] + h11 * h * dydx[i + 1];
    }
};

// Dormand-Prince 5(4) embedded pair with PI-free standard step control
// and the FSAL evaluation reuse.  Scalar right-hand side f(x, y).
// The predicate, when given, is checked after each accepted step and
// terminates the integration early.
template <class F, class Stop>
OdeSolution integrate_ode45(const F& f, double x0, double y0, double x_end,
                            const Ode45Options& opt, const Stop& stop) {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                            a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                            a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                            e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    if (!(x_end > x0)) throw std::invalid_argument("integrate_ode45: x_end must exceed x0");

    OdeSolution sol;
    double x = x0, y = y0;
    double k1 = f(x, y);
    sol.x.push_back(x);
    sol.y.push_back(y);
    sol.dydx.push_back(k1);

    double h = opt.initial_step;
    if (h <= 0.0) {
        const double scale = opt.atol + opt.rtol * std::fabs(y);
        h = (std::fabs(k1) > 0) ? 0.01 * scale / std::fabs(k1) : 1e-4 * (x_end - x0);
        h = std::min({h, opt.max_step, x_end - x0});
        h = std::max(h, 1e-12 * (x_end - x0));
    }

    for (std::size_t n = 0; n < opt.max_steps; ++n) {
        if (x >= x_end) return sol;
        h = std::min({h, opt.max_step, x_end - x});

        const double k2 = f(x + c2 * h, y + h * a21 * k1);
        const double k3 = f(x + c3 * h, y + h * (a31 * k1 + a32 * k2));
        const double k4 = f(x + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
        const double k5 = f(x + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
        const double k6 = f(x + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
        const double ynew = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        const double k7 = f(x + h, ynew);  // FSAL

        const double err_raw =
            h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
        const double scale = opt.atol + opt.rtol * std::max(std::fabs(y), std::fabs(ynew));
        const double err = std::fabs(err_raw) / scale;

        if (err <= 1.0) {
            x += h;
            y = ynew;
            k1 = k7;
            sol.x.push_back(x);
            sol.y.push_back(y);
            sol.dydx.push_back(k1);
            if (stop(x, y)) {
                sol.stopped_by_predicate = true;
                return sol;
            }
        }
        const double factor =
            (err > 0) ? std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0) : 5.0;
        h *= factor;
        if (!(h > 0) || x + h == x)
            throw std::runtime_error("integrate_ode45: step size underflow");
    }
    throw std::runtime_error("integrate_ode45: max step count exceeded");
}

template <class F>
OdeSolution integrate_ode45(const F& f, double x0, double y0, double x_end,
                            const Ode45Options& opt = {}) {
    return integrate_ode45(f, x0, y0, x_end, opt, [](double, double) { return false; });
}

}  // namespace inflow

#endif
