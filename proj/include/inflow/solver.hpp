#ifndef INFLOW_SOLVER_HPP
#define INFLOW_SOLVER_HPP

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "inflow/background.hpp"
#include "inflow/conditions.hpp"
#include "inflow/diagnostics.hpp"
#include "inflow/gas.hpp"

namespace inflow {

// Raised when the discrete specific volume loses positivity or the time
// step underflows; the run must abort rather than continue.
class SolverAbort : public std::runtime_error {
  public:
    SolverAbort(const std::string& what, double t, std::size_t node)
        : std::runtime_error(what), t(t), node(node) {}
    double t;
    std::size_t node;
};

struct InitReport {
    double phi_l2 = 0.0, psi_l2 = 0.0;
    double phi_dx_l2 = 0.0, psi_dx_l2 = 0.0;
    double phi_l2_expected = 0.0, psi_l2_expected = 0.0;    // eps^alpha ||f||, ||g||
    double phi_dx_l2_expected = 0.0, psi_dx_l2_expected = 0.0;  // eps^beta ||f'||, ||g'||
    double v_min = 0.0, v_max = 0.0;
    double sup_diff0 = 0.0;
};

// v = V + phi0, u = U + psi0 sampled at t = 0.  Both Dirichlet nodes are
// set to their pinned values.  Rejects states that lose positivity.
inline std::pair<SolverState, InitReport> make_initial(const Background& bg,
                                                       const PerturbationSpec& spec,
                                                       const GasModel& gas) {
    (void)gas;
    const Grid& g = bg.grid();
    const BackgroundFields bf = bg.fields(0.0);
    const std::size_t m = g.nodes();

    SolverState st;
    st.t = 0.0;
    st.v.resize(m);
    st.u.resize(m);

    InitReport rep;
    std::vector<double> phi(m), psi(m), phid(m), psid(m);
    for (std::size_t j = 0; j < m; ++j) {
        const double x = g.xi(j);
        phi[j] = spec.phi0(x);
        psi[j] = spec.psi0(x);
        phid[j] = spec.phi0_dx(x);
        psid[j] = spec.psi0_dx(x);
        st.v[j] = bf.V[j] + phi[j];
        st.u[j] = bf.U[j] + psi[j];
        if (st.v[j] <= 0.0) {
            char buf[128];
            std::snprintf(buf, sizeof buf,
                          "make_initial: nonpositive v=%g at xi=%g (node %zu)", st.v[j], x, j);
            throw SolverAbort(buf, 0.0, j);
        }
        rep.sup_diff0 = std::max(rep.sup_diff0, std::max(std::fabs(phi[j]), std::fabs(psi[j])));
    }

    const EndState left = bg.boundary_state();
    const EndState right = bg.far_state();
    st.v[0] = left.v;
    st.u[0] = left.u;
    st.v[m - 1] = right.v;
    st.u[m - 1] = right.u;

    const auto l2 = [&](const std::vector<double>& f) {
        double acc = 0.5 * (f.front() * f.front() + f.back() * f.back());
        for (std::size_t j = 1; j + 1 < m; ++j) acc += f[j] * f[j];
        return std::sqrt(acc * g.dx);
    };
    rep.phi_l2 = l2(phi);
    rep.psi_l2 = l2(psi);
    rep.phi_dx_l2 = l2(phid);
    rep.psi_dx_l2 = l2(psid);
    rep.phi_l2_expected = spec.phi_l2();
    rep.psi_l2_expected = spec.psi_l2();
    rep.phi_dx_l2_expected = spec.phi_dx_l2();
    rep.psi_dx_l2_expected = spec.psi_dx_l2();
    rep.v_min = *std::min_element(st.v.begin(), st.v.end());
    rep.v_max = *std::max_element(st.v.begin(), st.v.end());
    return {std::move(st), rep};
}

struct StepControl {
    double cfl = 0.4;
    bool upwind = false;
};

namespace detail {

inline void check_positive(const std::vector<double>& v, double t) {
    for (std::size_t j = 0; j < v.size(); ++j)
        if (!(v[j] > 0.0)) {
            char buf[96];
            std::snprintf(buf, sizeof buf, "solver: v=%g lost positivity at node %zu, t=%g",
                          v[j], j, t);
            throw SolverAbort(buf, t, j);
        }
}

// Semi-discrete right-hand side of
//   v_t = s- v_xi + u_xi
//   u_t = s- u_xi - p(v)_xi + mu (u_xi / v)_xi
// with central second-order stencils; the convection terms optionally
// switch to first-order upwind (s- < 0, so forward differences).
inline void rhs(const Grid& g, const GasModel& gas, double s_minus, bool upwind,
                const std::vector<double>& v, const std::vector<double>& u,
                std::vector<double>& p, std::vector<double>& dv, std::vector<double>& du) {
    const std::size_t m = g.nodes();
    const double dx = g.dx;
    const double inv2dx = 0.5 / dx;
    const double invdx2 = 1.0 / (dx * dx);

    for (std::size_t j = 0; j < m; ++j) p[j] = pressure(v[j], gas);

    dv[0] = du[0] = dv[m - 1] = du[m - 1] = 0.0;
    for (std::size_t j = 1; j + 1 < m; ++j) {
        const double conv_v = upwind ? s_minus * (v[j + 1] - v[j]) / dx
                                     : s_minus * (v[j + 1] - v[j - 1]) * inv2dx;
        const double conv_u = upwind ? s_minus * (u[j + 1] - u[j]) / dx
                                     : s_minus * (u[j + 1] - u[j - 1]) * inv2dx;
        const double u_xi = (u[j + 1] - u[j - 1]) * inv2dx;
        const double p_xi = (p[j + 1] - p[j - 1]) * inv2dx;
        const double vr = 0.5 * (v[j] + v[j + 1]);
        const double vl = 0.5 * (v[j - 1] + v[j]);
        const double visc =
            gas.mu * invdx2 * ((u[j + 1] - u[j]) / vr - (u[j] - u[j - 1]) / vl);
        dv[j] = conv_v + u_xi;
        du[j] = conv_u - p_xi + visc;
    }
}

}  // namespace detail

// Stable step from the advective and viscous restrictions:
//   dt = cfl min( dx / (|s-| + max c), dx^2 min v / (2 mu) ).
inline double stable_dt(const Grid& g, const GasModel& gas, double s_minus,
                        const std::vector<double>& v, double cfl) {
    double v_min = v[0];
    for (const double x : v) v_min = std::min(v_min, x);
    const double c_max = gas.gamma == 1.0 ? 1.0 : sound_speed(v_min, gas);
    const double adv = g.dx / (std::fabs(s_minus) + c_max);
    const double visc = g.dx * g.dx * v_min / (2.0 * gas.mu);
    return cfl * std::min(adv, visc);
}

struct StepScratch {
    std::vector<double> p, dv, du, vm, um;
};

// One explicit midpoint (two-stage RK2) step of size at most dt_cap.
// Returns the dt taken.
inline double step(SolverState& st, const Grid& g, const GasModel& gas, double s_minus,
                   const StepControl& ctrl, double dt_cap, StepScratch& ws) {
    const std::size_t m = g.nodes();
    double dt = stable_dt(g, gas, s_minus, st.v, ctrl.cfl);
    if (dt_cap > 0.0) dt = std::min(dt, dt_cap);
    if (!(dt > 1e-14)) throw SolverAbort("solver: time step underflow", st.t, 0);

    ws.p.resize(m);
    ws.dv.resize(m);
    ws.du.resize(m);
    ws.vm.resize(m);
    ws.um.resize(m);

    detail::rhs(g, gas, s_minus, ctrl.upwind, st.v, st.u, ws.p, ws.dv, ws.du);
    for (std::size_t j = 0; j < m; ++j) {
        ws.vm[j] = st.v[j] + 0.5 * dt * ws.dv[j];
        ws.um[j] = st.u[j] + 0.5 * dt * ws.du[j];
    }
    detail::check_positive(ws.vm, st.t);

    detail::rhs(g, gas, s_minus, ctrl.upwind, ws.vm, ws.um, ws.p, ws.dv, ws.du);
    for (std::size_t j = 0; j < m; ++j) {
        st.v[j] += dt * ws.dv[j];
        st.u[j] += dt * ws.du[j];
    }
    detail::check_positive(st.v, st.t + dt);

    st.t += dt;
    return dt;
}

struct RunParams {
    double t_end = 100.0;
    double output_every = 1.0;
    double cfl = 0.4;
    bool upwind = false;
    double adequacy_tol = 1e-6;   // far-field deviation warning at xi = 0.9 L
    double wall_budget_s = 0.0;   // 0 = unlimited
};

struct Trajectory {
    std::vector<SolverState> snapshots;
    std::vector<DiagnosticsFrame> frames;
    std::vector<std::size_t> snapshot_steps;
    std::size_t total_steps = 0;
    bool adequacy_warning = false;
    double adequacy_max_dev = 0.0;
    bool aborted = false;          // positivity/step failure; partial results kept
    bool budget_exceeded = false;  // wall-clock budget hit; partial results kept
    std::string abort_reason;
};

// March to t_end, emitting a snapshot + diagnostics frame at every output
// interval (and at t = 0 and t_end).  The cumulative dissipation integral
// is accumulated with the trapezoid rule over frame times.
inline Trajectory run(const Background& bg, SolverState st, const GasModel& gas,
                      const RunParams& prm) {
    const Grid& g = bg.grid();
    const double s_minus = boundary_speed(bg.boundary_state());
    const EndState far = bg.far_state();
    const std::size_t probe = static_cast<std::size_t>(0.9 * g.n);

    Trajectory traj;
    StepControl ctrl{prm.cfl, prm.upwind};
    StepScratch ws;

    const auto emit = [&](const SolverState& s) {
        DiagnosticsFrame fr = frame(s, bg, gas);
        if (!traj.frames.empty()) {
            const DiagnosticsFrame& prev = traj.frames.back();
            fr.dissipation_cum = prev.dissipation_cum +
                                 0.5 * (fr.t - prev.t) * (fr.dissipation + prev.dissipation);
        }
        const double dev = std::max(std::fabs(s.v[probe] - far.v),
                                    std::fabs(s.u[probe] - far.u));
        traj.adequacy_max_dev = std::max(traj.adequacy_max_dev, dev);
        if (dev > prm.adequacy_tol) traj.adequacy_warning = true;
        traj.frames.push_back(fr);
        traj.snapshots.push_back(s);
        traj.snapshot_steps.push_back(traj.total_steps);
    };

    emit(st);
    if (prm.t_end <= 0.0) return traj;

    const auto wall_start = std::chrono::steady_clock::now();
    const double every = prm.output_every > 0.0 ? prm.output_every : prm.t_end;
    double t_next = std::min(every, prm.t_end);
    while (st.t < prm.t_end) {
        const double cap = t_next - st.t;
        try {
            step(st, g, gas, s_minus, ctrl, cap, ws);
        } catch (const SolverAbort& e) {
            traj.aborted = true;
            traj.abort_reason = e.what();
            return traj;
        }
        ++traj.total_steps;
        if (st.t >= t_next - 1e-12 * prm.t_end) {
            st.t = t_next;
            emit(st);
            if (t_next >= prm.t_end) break;
            t_next = std::min(t_next + every, prm.t_end);
            if (prm.wall_budget_s > 0.0) {
                const std::chrono::duration<double> used =
                    std::chrono::steady_clock::now() - wall_start;
                if (used.count() > prm.wall_budget_s) {
                    traj.budget_exceeded = true;
                    return traj;
                }
            }
        }
    }
    return traj;
}

}  // namespace inflow

#endif
