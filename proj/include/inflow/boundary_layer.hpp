#ifndef INFLOW_BOUNDARY_LAYER_HPP
#define INFLOW_BOUNDARY_LAYER_HPP

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "inflow/gas.hpp"
#include "inflow/ode45.hpp"

namespace inflow {

// Stationary profile (V, U)(xi) on xi >= 0 connecting (v-, u-) to (v+, u+)
// along the line u/v = u-/v-.  The profile solves the scalar reduced ODE
//   mu U_xi = V F(V),   F(V) = s-^2 (V - v+) + p(V) - p(v+),
// obtained by integrating the stationary system once, with
// U = (u-/v-) V and V_xi = (v-/u-) U_xi.
struct BoundaryLayerProfile {
    std::vector<double> xi;
    std::vector<double> V, U, V_xi, U_xi, U_xixi;
    AsymptoticKind kind = AsymptoticKind::BLplus;
    bool degenerate = false;  // v+ coincides with the sonic point v*
    bool truncated = false;   // nondegenerate run ended before the tail threshold
    double delta = 0.0;
    double s_minus = 0.0;
    EndState minus, plus;
    GasModel gas;

    std::size_t size() const { return xi.size(); }

    // Hermite-interpolated V at an arbitrary coordinate; beyond the stored
    // mesh the far state is used (the remainder is below the tail cut).
    double eval_V(double q) const {
        if (q <= xi.front()) return V.front();
        if (q >= xi.back()) return truncated ? V.back() : plus.v;
        const auto it = std::upper_bound(xi.begin(), xi.end(), q);
        const std::size_t i = static_cast<std::size_t>(it - xi.begin()) - 1;
        const double h = xi[i + 1] - xi[i];
        const double s = (q - xi[i]) / h;
        const double s2 = s * s, s3 = s2 * s;
        return (2 * s3 - 3 * s2 + 1) * V[i] + (s3 - 2 * s2 + s) * h * V_xi[i] +
               (-2 * s3 + 3 * s2) * V[i + 1] + (s3 - s2) * h * V_xi[i + 1];
    }

    double flux(double Vq) const {
        return s_minus * s_minus * (Vq - plus.v) + pressure(Vq, gas) - pressure(plus.v, gas);
    }
};

struct DecayFit {
    enum class Kind { Exponential, Algebraic } kind = Kind::Exponential;
    double rate = 0.0;      // exponential: decay rate c in e^{-c xi} (positive)
    double exponent = 0.0;  // algebraic: fitted power of (1 + delta xi)
    double max_residual = 0.0;
    std::size_t samples = 0;
};

struct ProfileVerification {
    double max_residual = 0.0;       // stationary momentum equation, pointwise
    double derivative_bound = 0.0;   // smallest C with |(V_xi, V_xixi, U_xixi)| <= C |U_xi|
    int monotonicity_violations = 0;
    double line_identity_rel = 0.0;  // max |U - (u-/v-)V| / u-
};

// Decay rate of the linearization of the reduced ODE at V = v+.
inline double linearized_decay_rate(const EndState& minus, const EndState& plus,
                                    const GasModel& gas) {
    const double s = boundary_speed(minus);
    return minus.v * plus.v / (gas.mu * minus.u) *
           std::fabs(s * s + pressure_dv(plus.v, gas));
}

constexpr double kDegenerateTol = 1e-8;
constexpr double kTailCut = 1e-12;  // stop when |V - v+| <= kTailCut * delta

// Integrate the profile ODE from V(0) = v- with adaptive error control.
// xi_max <= 0 picks a default: enough e-foldings of the linearized rate in
// the nondegenerate case, 1e4/delta for the degenerate algebraic tail.
inline BoundaryLayerProfile solve_profile(const EndState& minus, const EndState& plus,
                                          const GasModel& gas, double xi_max = 0.0,
                                          double tol = 1e-10) {
    const AsymptoticCase cls = classify_asymptotic(minus, plus, gas);
    if (cls.kind != AsymptoticKind::BLplus && cls.kind != AsymptoticKind::BLminus)
        throw std::invalid_argument("solve_profile: end states are not a boundary-layer pair");

    BoundaryLayerProfile prof;
    prof.kind = cls.kind;
    prof.delta = cls.delta;
    prof.s_minus = boundary_speed(minus);
    prof.minus = minus;
    prof.plus = plus;
    prof.gas = gas;

    if (cls.delta == 0.0) {
        const double L = xi_max > 0.0 ? xi_max : 1.0;
        prof.xi = {0.0, L};
        prof.V = {minus.v, minus.v};
        prof.U = {minus.u, minus.u};
        prof.V_xi = {0.0, 0.0};
        prof.U_xi = {0.0, 0.0};
        prof.U_xixi = {0.0, 0.0};
        return prof;
    }

    const double vstar = sonic_point(minus, gas).v;
    prof.degenerate = std::fabs(plus.v - vstar) <= kDegenerateTol * vstar;

    Ode45Options opt;
    opt.rtol = tol;
    opt.atol = tol * 1e-2 * minus.v;
    if (xi_max <= 0.0) {
        if (prof.degenerate) {
            xi_max = 1e4 / cls.delta;
        } else {
            const double rate = linearized_decay_rate(minus, plus, gas);
            xi_max = 40.0 * std::log(10.0) / rate;
        }
    }
    if (!prof.degenerate) {
        // Keep h within the linearized stability scale so the accepted-step
        // map contracts to the fixed point instead of hunting around it.
        opt.max_step = 1.0 / linearized_decay_rate(minus, plus, gas);
    }

    const double coef = minus.v / (gas.mu * minus.u);
    const auto rhs = [&](double, double V) { return coef * V * prof.flux(V); };
    const double cut = kTailCut * cls.delta;
    const auto tail = [&](double, double V) { return std::fabs(V - plus.v) <= cut; };
    OdeSolution sol = integrate_ode45(rhs, 0.0, minus.v, xi_max, opt, tail);

    const double end_gap = std::fabs(sol.y.back() - plus.v);
    if (!prof.degenerate)
        prof.truncated = !(sol.stopped_by_predicate ||
                           end_gap <= std::max(tol, 1e-8 * cls.delta));

    const double slope = minus.u / minus.v;  // = -s_minus
    prof.xi = std::move(sol.x);
    prof.V = std::move(sol.y);
    const std::size_t n = prof.xi.size();
    prof.U.resize(n);
    prof.V_xi.resize(n);
    prof.U_xi.resize(n);
    prof.U_xixi.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double V = prof.V[j];
        const double F = prof.flux(V);
        const double dF = prof.s_minus * prof.s_minus + pressure_dv(V, gas);
        prof.U[j] = slope * V;
        prof.U_xi[j] = V * F / gas.mu;
        prof.V_xi[j] = prof.U_xi[j] / slope;
        prof.U_xixi[j] = prof.V_xi[j] * (F + V * dF) / gas.mu;
    }
    return prof;
}

// Least-squares decay fit on the profile tail.  Nondegenerate layers decay
// exponentially; the degenerate endpoint v+ = v* decays like (1+delta xi)^-1.
inline DecayFit fit_decay(const BoundaryLayerProfile& prof) {
    if (prof.delta == 0.0)
        throw std::domain_error("fit_decay: zero-strength profile has no decay law");
    if (prof.truncated)
        throw std::runtime_error("fit_decay: profile truncated before its tail");

    std::vector<double> xs, ys;
    if (!prof.degenerate) {
        const double lo = 1e-9 * prof.delta, hi = 1e-4 * prof.delta;
        for (std::size_t j = 0; j < prof.size(); ++j) {
            const double gap = std::fabs(prof.V[j] - prof.plus.v);
            if (gap >= lo && gap <= hi) {
                xs.push_back(prof.xi[j]);
                ys.push_back(std::log(gap));
            }
        }
    } else {
        for (std::size_t j = 0; j < prof.size(); ++j) {
            const double w = 1.0 + prof.delta * prof.xi[j];
            const double gap = std::fabs(prof.V[j] - prof.plus.v);
            if (w >= 1e2 && w <= 1e4 && gap > 0.0) {
                xs.push_back(std::log(w));
                ys.push_back(std::log(gap));
            }
        }
    }
    if (xs.size() < 8)
        throw std::runtime_error("fit_decay: insufficient tail samples for a fit");

    const LineFit line = fit_line(xs, ys);
    DecayFit out;
    out.samples = xs.size();
    out.max_residual = line.max_residual;
    if (!prof.degenerate) {
        out.kind = DecayFit::Kind::Exponential;
        out.rate = -line.slope;
    } else {
        out.kind = DecayFit::Kind::Algebraic;
        out.exponent = line.slope;
    }
    return out;
}

inline ProfileVerification verify_profile(const BoundaryLayerProfile& prof,
                                          const GasModel& gas) {
    ProfileVerification out;
    const double slope = prof.minus.u / prof.minus.v;
    double max_uxi = 0.0;
    for (std::size_t j = 0; j < prof.size(); ++j)
        max_uxi = std::max(max_uxi, std::fabs(prof.U_xi[j]));

    const double want = prof.plus.u - prof.minus.u;
    for (std::size_t j = 0; j < prof.size(); ++j) {
        const double V = prof.V[j];
        const double visc_flux_xi =
            gas.mu * (prof.U_xixi[j] * V - prof.U_xi[j] * prof.V_xi[j]) / (V * V);
        const double res = -prof.s_minus * prof.U_xi[j] +
                           pressure_dv(V, gas) * prof.V_xi[j] - visc_flux_xi;
        out.max_residual = std::max(out.max_residual, std::fabs(res));

        const double V_xixi = prof.U_xixi[j] / slope;
        if (std::fabs(prof.U_xi[j]) > 1e-13 * max_uxi && max_uxi > 0.0) {
            const double num = std::max({std::fabs(prof.V_xi[j]), std::fabs(V_xixi),
                                         std::fabs(prof.U_xixi[j])});
            out.derivative_bound = std::max(out.derivative_bound,
                                            num / std::fabs(prof.U_xi[j]));
        }
        if (prof.delta > 0.0) {
            const bool ok = want > 0.0 ? prof.V_xi[j] > 0.0 : prof.V_xi[j] < 0.0;
            if (!ok) ++out.monotonicity_violations;
        }
        out.line_identity_rel = std::max(
            out.line_identity_rel,
            std::fabs(prof.U[j] - slope * V) / prof.minus.u);
    }
    return out;
}

}  // namespace inflow

#endif
