#ifndef INFLOW_DIAGNOSTICS_HPP
#define INFLOW_DIAGNOSTICS_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "inflow/background.hpp"
#include "inflow/gas.hpp"
#include "inflow/numerics.hpp"

namespace inflow {

// Convex potential Phi(v, V) = p(V)(v - V) - int_V^v p.  Nonnegative,
// vanishing iff v = V.  gamma = 1 takes the logarithmic antiderivative.
inline double phi_potential(double v, double V, const GasModel& gas) {
    if (v <= 0.0 || V <= 0.0)
        throw std::domain_error("phi_potential: arguments must be positive");
    if (gas.isothermal()) return (v - V) / V - std::log(v / V);
    const double g = gas.gamma;
    return std::pow(V, -g) * (v - V) +
           (std::pow(v, 1.0 - g) - std::pow(V, 1.0 - g)) / (g - 1.0);
}

// Dimensionless form: Phi(v, V) = V^{1-gamma} tilde_phi(v/V).
inline double tilde_phi(double vt, const GasModel& gas) {
    if (vt <= 0.0) throw std::domain_error("tilde_phi: ratio must be positive");
    if (gas.isothermal()) return vt - 1.0 - std::log(vt);
    return vt - 1.0 + (std::pow(vt, 1.0 - gas.gamma) - 1.0) / (gas.gamma - 1.0);
}

// Kanel functional Psi(vt) = int_1^vt sqrt(tilde_phi(eta))/eta deta,
// evaluated in log coordinates eta = e^{+-s} so both tails stay
// well-conditioned.  Strictly increasing, sign(Psi) = sign(vt - 1).
inline double kanel_psi(double vt, const GasModel& gas, double tol = 1e-10) {
    if (vt <= 0.0) throw std::domain_error("kanel_psi: ratio must be positive");
    if (vt == 1.0) return 0.0;
    const double S = std::fabs(std::log(vt));
    const double sign = vt > 1.0 ? 1.0 : -1.0;
    const auto f = [&](double s) { return std::sqrt(tilde_phi(std::exp(sign * s), gas)); };
    return sign * integrate(f, 0.0, S, tol);
}

// Monotone inversion of Psi with an expanding bracket.
inline double kanel_psi_inverse(double y, const GasModel& gas) {
    if (y == 0.0) return 1.0;
    double lo, hi;
    if (y > 0.0) {
        lo = 1.0;
        hi = 2.0;
        while (kanel_psi(hi, gas) < y) hi *= 2.0;
    } else {
        hi = 1.0;
        lo = 0.5;
        while (kanel_psi(lo, gas) > y) lo *= 0.5;
    }
    const auto g = [&](double vt) { return kanel_psi(vt, gas) - y; };
    return bisect(g, lo, hi, 1e-12 * std::max(1.0, hi));
}

struct KanelBracket {
    double v_lo = 0.0;
    double v_hi = 0.0;
};

// Pointwise density bracket implied by sup_xi |Psi(vt(xi))| <= psi_sup:
// invert Psi on both sides and scale by the background range.
inline KanelBracket kanel_bracket(double psi_sup, double V_min, double V_max,
                                  const GasModel& gas) {
    if (psi_sup < 0.0) throw std::domain_error("kanel_bracket: psi_sup must be >= 0");
    KanelBracket out;
    out.v_lo = kanel_psi_inverse(-psi_sup, gas) * V_min;
    out.v_hi = kanel_psi_inverse(psi_sup, gas) * V_max;
    return out;
}

// Quadratic factor of p(v) - p(V) - p'(V) phi = f(v,V) phi^2, with the
// Taylor limit (first correction included) when v is close to V.
inline double f_factor(double v, double V, const GasModel& gas) {
    if (v <= 0.0 || V <= 0.0) throw std::domain_error("f_factor: arguments must be positive");
    const double phi = v - V;
    const double g = gas.gamma;
    if (std::fabs(phi) > 1e-6 * V) {
        return (pressure(v, gas) - pressure(V, gas) - pressure_dv(V, gas) * phi) /
               (phi * phi);
    }
    return 0.5 * g * (g + 1.0) * std::pow(V, -g - 2.0) * (1.0 - (g + 2.0) * phi / (3.0 * V));
}

// D = mu U_xi / (V^2 v f(v,V)) - 4
inline double discriminant(double U_xi, double v, double V, const GasModel& gas) {
    return gas.mu * U_xi / (V * V * v * f_factor(v, V, gas)) - 4.0;
}

struct SolverState {
    double t = 0.0;
    std::vector<double> v, u;
};

struct DiagnosticsFrame {
    double t = 0.0;
    double sup_diff = 0.0;        // sup_xi max(|v-V|, |u-U|)
    double l2_phi_psi = 0.0;      // ||(phi, psi)||
    double energy_phi = 0.0;      // int (Phi + psi^2/2)
    double vtilde_grad = 0.0;     // ||vt_xi / vt||
    double dissipation = 0.0;     // int psi_xi^2 / v   (instantaneous)
    double dissipation_cum = 0.0; // running time integral, filled by the driver
    double boundary_trace = 0.0;  // psi_xi(t,0)^2
    double compat_residual = 0.0; // |s- phi_xi(t,0) + psi_xi(t,0)|
    double v_min = 0.0, v_max = 0.0;
    double kanel_lo = 0.0, kanel_hi = 0.0;
    double cs_margin = 0.0;       // ||sqrt(tilde_phi)|| ||vt_xi/vt|| - sup |Psi(vt)|
};

namespace detail {

// Central differences with one-sided second-order stencils at both ends.
inline void gradient(const std::vector<double>& f, double dx, std::vector<double>& out) {
    const std::size_t m = f.size();
    out.resize(m);
    if (m < 3) throw std::invalid_argument("gradient: need at least 3 nodes");
    out[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * dx);
    for (std::size_t j = 1; j + 1 < m; ++j) out[j] = (f[j + 1] - f[j - 1]) / (2.0 * dx);
    out[m - 1] = (3.0 * f[m - 1] - 4.0 * f[m - 2] + f[m - 3]) / (2.0 * dx);
}

inline double trapezoid(const std::vector<double>& f, double dx) {
    double acc = 0.5 * (f.front() + f.back());
    for (std::size_t j = 1; j + 1 < f.size(); ++j) acc += f[j];
    return acc * dx;
}

}  // namespace detail

// One time slice of every audited norm and functional.  The state and the
// background must share the grid.
inline DiagnosticsFrame frame(const SolverState& st, const Background& bg,
                              const GasModel& gas) {
    const Grid& g = bg.grid();
    const std::size_t m = g.nodes();
    if (st.v.size() != m || st.u.size() != m)
        throw std::invalid_argument("frame: state and background grids differ");

    const BackgroundFields bf = bg.fields(st.t);
    const double s_minus = boundary_speed(bg.boundary_state());

    DiagnosticsFrame out;
    out.t = st.t;

    std::vector<double> phi(m), psi(m), work(m);
    for (std::size_t j = 0; j < m; ++j) {
        phi[j] = st.v[j] - bf.V[j];
        psi[j] = st.u[j] - bf.U[j];
        out.sup_diff = std::max(out.sup_diff, std::max(std::fabs(phi[j]), std::fabs(psi[j])));
    }

    for (std::size_t j = 0; j < m; ++j) work[j] = phi[j] * phi[j] + psi[j] * psi[j];
    out.l2_phi_psi = std::sqrt(detail::trapezoid(work, g.dx));

    for (std::size_t j = 0; j < m; ++j)
        work[j] = phi_potential(st.v[j], bf.V[j], gas) + 0.5 * psi[j] * psi[j];
    out.energy_phi = detail::trapezoid(work, g.dx);

    std::vector<double> phi_xi, psi_xi;
    detail::gradient(phi, g.dx, phi_xi);
    detail::gradient(psi, g.dx, psi_xi);

    // vt_xi / vt = phi_xi / v - V_xi phi / (v V)
    for (std::size_t j = 0; j < m; ++j)
        work[j] = phi_xi[j] / st.v[j] - bf.V_xi[j] * phi[j] / (st.v[j] * bf.V[j]);
    double vt_grad2 = 0.0;
    {
        std::vector<double> sq(m);
        for (std::size_t j = 0; j < m; ++j) sq[j] = work[j] * work[j];
        vt_grad2 = detail::trapezoid(sq, g.dx);
    }
    out.vtilde_grad = std::sqrt(vt_grad2);

    for (std::size_t j = 0; j < m; ++j) work[j] = psi_xi[j] * psi_xi[j] / st.v[j];
    out.dissipation = detail::trapezoid(work, g.dx);

    out.boundary_trace = psi_xi[0] * psi_xi[0];
    out.compat_residual = std::fabs(s_minus * phi_xi[0] + psi_xi[0]);

    double vt_min = std::numeric_limits<double>::infinity(), vt_max = 0.0;
    double V_min = std::numeric_limits<double>::infinity(), V_max = 0.0;
    double tphi_int = 0.0;
    {
        std::vector<double> tp(m);
        for (std::size_t j = 0; j < m; ++j) {
            const double vt = st.v[j] / bf.V[j];
            vt_min = std::min(vt_min, vt);
            vt_max = std::max(vt_max, vt);
            V_min = std::min(V_min, bf.V[j]);
            V_max = std::max(V_max, bf.V[j]);
            out.v_min = j == 0 ? st.v[j] : std::min(out.v_min, st.v[j]);
            out.v_max = j == 0 ? st.v[j] : std::max(out.v_max, st.v[j]);
            tp[j] = tilde_phi(vt, gas);
        }
        tphi_int = detail::trapezoid(tp, g.dx);
    }

    const double psi_bound = std::sqrt(tphi_int) * out.vtilde_grad;
    const double psi_sup = std::max(std::fabs(kanel_psi(vt_min, gas)),
                                    std::fabs(kanel_psi(vt_max, gas)));
    out.cs_margin = psi_bound - psi_sup;

    const KanelBracket kb = kanel_bracket(psi_bound, V_min, V_max, gas);
    out.kanel_lo = kb.v_lo;
    out.kanel_hi = kb.v_hi;
    return out;
}

struct EnergyAudit {
    double energy_ratio_sup = 0.0;  // sup_t energy(t) / energy(0); 0 when trivial
    bool trivially_small = false;   // zero-perturbation run, ratio undefined
    double dissipation_total = 0.0;
    bool dissipation_monotone = true;
    double boundary_integral = 0.0;  // int psi_xi(tau, 0)^2 dtau
    bool growth_flagged = false;
};

inline EnergyAudit energy_audit(const std::vector<DiagnosticsFrame>& frames,
                                double growth_factor = 3.0) {
    if (frames.size() < 2)
        throw std::invalid_argument("energy_audit: need at least two frames");

    EnergyAudit out;
    const double e0 = frames.front().energy_phi;
    double esup = 0.0;
    double prev_cum = frames.front().dissipation_cum;
    for (std::size_t i = 0; i < frames.size(); ++i) {
        esup = std::max(esup, frames[i].energy_phi);
        if (frames[i].dissipation_cum < prev_cum - 1e-14)
            out.dissipation_monotone = false;
        prev_cum = frames[i].dissipation_cum;
        if (i + 1 < frames.size()) {
            const double dt = frames[i + 1].t - frames[i].t;
            out.boundary_integral +=
                0.5 * dt * (frames[i].boundary_trace + frames[i + 1].boundary_trace);
        }
    }
    out.dissipation_total = frames.back().dissipation_cum;
    if (e0 <= 1e-300) {
        out.trivially_small = true;
        out.energy_ratio_sup = 0.0;
    } else {
        out.energy_ratio_sup = esup / e0;
        out.growth_flagged = out.energy_ratio_sup > growth_factor;
    }
    return out;
}

}  // namespace inflow

#endif
