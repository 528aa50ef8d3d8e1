#ifndef INFLOW_RAREFACTION_HPP
#define INFLOW_RAREFACTION_HPP

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "inflow/burgers.hpp"
#include "inflow/gas.hpp"
#include "inflow/numerics.hpp"

namespace inflow {

// Inverse of the 1-characteristic speed: lambda_1(v) = w  =>  v.
inline double lambda1_inverse(double w, const GasModel& gas) {
    if (w >= 0.0) throw std::domain_error("lambda1_inverse: w must be negative");
    return std::pow(std::sqrt(gas.gamma) / (-w), 2.0 / (gas.gamma + 1.0));
}

// Self-similar inviscid rarefaction (v, u)(x/t) through minus and plus.
inline EndState exact_rarefaction(double s, const EndState& minus, const EndState& plus,
                                  const GasModel& gas) {
    const double wm = lambda(1, minus.v, gas);
    const double wp = lambda(1, plus.v, gas);
    if (s <= wm) return minus;
    if (s >= wp) return plus;
    const double v = lambda1_inverse(s, gas);
    return EndState(v, rarefaction_curve_u(v, minus, 1, gas));
}

struct ProfilePoint {
    double V = 0.0, U = 0.0;
    double V_xi = 0.0, U_xi = 0.0;
    double V_xixi = 0.0, U_xixi = 0.0;
    double visc_flux_xi = 0.0;  // (U_xi / V)_xi
};

// Smooth approximate rarefaction background in the moving frame:
//   (V, U)(t, xi) from w(1 + t, xi + s- t) through lambda_1^{-1} and the
// 1-curve integral.  Derivatives come analytically through the
// characteristic map, not from finite differences.
class RarefactionEvaluator {
  public:
    RarefactionEvaluator(const EndState& minus, const EndState& plus, const GasModel& gas,
                         int q = 10, double eps = 0.1)
        : burgers_(BurgersData::from_states(minus, plus, gas, q, eps)),
          minus_(minus),
          plus_(plus),
          gas_(gas),
          s_minus_(boundary_speed(minus)) {
        const AsymptoticCase cls = classify_asymptotic(minus, plus, gas);
        if (cls.kind != AsymptoticKind::Rarefaction1)
            throw std::invalid_argument(
                "RarefactionEvaluator: end states are not a supersonic 1-rarefaction pair");
    }

    const BurgersData& burgers() const { return burgers_; }
    const EndState& minus() const { return minus_; }
    const EndState& plus() const { return plus_; }
    const GasModel& gas() const { return gas_; }
    double s_minus() const { return s_minus_; }

    // (V, U) only.
    EndState eval(double t, double xi) const {
        const double w = wave(t, xi);
        if (w <= burgers_.w_minus) return minus_;
        const double V = lambda1_inverse(w, gas_);
        return EndState(V, rarefaction_curve_u(V, minus_, 1, gas_));
    }

    ProfilePoint eval_full(double t, double xi) const {
        ProfilePoint p;
        const double x = xi + s_minus_ * t;
        const double tb = 1.0 + t;
        const double x0 = burgers_foot(tb, x, burgers_);
        const double w = burgers_initial(x0, burgers_);
        if (w <= burgers_.w_minus) {
            p.V = minus_.v;
            p.U = minus_.u;
            return p;
        }
        const double g = burgers_initial_dx(x0, burgers_);
        const double j = 1.0 + tb * g;
        const double wx = g / j;
        const double wxx = burgers_initial_dxx(x0, burgers_) / (j * j * j);

        const double a = 2.0 / (gas_.gamma + 1.0);
        p.V = lambda1_inverse(w, gas_);
        p.U = rarefaction_curve_u(p.V, minus_, 1, gas_);
        const double Vw = a * p.V / (-w);
        const double Vww = a * (a + 1.0) * p.V / (w * w);
        p.V_xi = Vw * wx;
        p.V_xixi = Vww * wx * wx + Vw * wxx;
        p.U_xi = -w * p.V_xi;
        p.U_xixi = -wx * p.V_xi - w * p.V_xixi;
        p.visc_flux_xi = (p.U_xixi * p.V - p.U_xi * p.V_xi) / (p.V * p.V);
        return p;
    }

    // xi beyond which the background equals (v+, u+) up to `tail`.
    double support_extent(double t, double tail = 1e-10) const {
        return burgers_ramp_extent(burgers_, tail) +
               (burgers_.w_plus - s_minus_) * t + burgers_.w_plus + std::fabs(burgers_.w_minus);
    }

  private:
    double wave(double t, double xi) const {
        return burgers_eval(1.0 + t, xi + s_minus_ * t, burgers_);
    }

    BurgersData burgers_;
    EndState minus_, plus_;
    GasModel gas_;
    double s_minus_;
};

constexpr double kInfinityP = std::numeric_limits<double>::infinity();

struct LpBoundReport {
    // field order: V_xi, U_xi, V_xixi, U_xixi, (U_xi/V)_xi
    static constexpr int kFields = 5;
    static constexpr const char* kFieldNames[kFields] = {"V_xi", "U_xi", "V_xixi",
                                                         "U_xixi", "visc_flux_xi"};
    std::vector<double> times;
    std::vector<double> p_values;
    // norms[f][ip][it]
    std::vector<std::vector<std::vector<double>>> norms;
    // smallest admissible constants for the two decay bounds, per p
    std::vector<double> c_first;   // (V_xi, U_xi):    min{eps^{1-1/p}, (1+t)^{-1+1/p}}
    std::vector<double> c_second;  // second derivs:   min{eps^{2-1/p}, (1+t)^{-1+1/q}}

    double fitted_exponent(int field, std::size_t ip) const {
        std::vector<double> lt, ln;
        for (std::size_t it = 0; it < times.size(); ++it) {
            if (norms[field][ip][it] > 0.0) {
                lt.push_back(std::log(1.0 + times[it]));
                ln.push_back(std::log(norms[field][ip][it]));
            }
        }
        return fit_line(lt, ln).slope;
    }
};

// Dense-sampled discrete L^p norms of the background derivatives at the
// requested times, the smallest admissible constants of the decay bounds,
// and the data needed for log-log decay-exponent fits.
inline LpBoundReport verify_lp_bounds(const RarefactionEvaluator& ev,
                                      const std::vector<double>& times,
                                      const std::vector<double>& p_values,
                                      std::size_t samples = 20000) {
    if (times.empty()) throw std::invalid_argument("verify_lp_bounds: times must be nonempty");

    LpBoundReport rep;
    rep.times = times;
    rep.p_values = p_values;
    rep.norms.assign(LpBoundReport::kFields,
                     std::vector<std::vector<double>>(
                         p_values.size(), std::vector<double>(times.size(), 0.0)));
    rep.c_first.assign(p_values.size(), 0.0);
    rep.c_second.assign(p_values.size(), 0.0);

    const double eps = ev.burgers().eps;
    const int q = ev.burgers().q;

    for (std::size_t it = 0; it < times.size(); ++it) {
        const double t = times[it];
        const double L = ev.support_extent(t, 1e-12) + 10.0;
        const double dx = L / static_cast<double>(samples);

        std::vector<std::array<double, LpBoundReport::kFields>> vals(samples + 1);
        for (std::size_t j = 0; j <= samples; ++j) {
            const ProfilePoint p = ev.eval_full(t, dx * static_cast<double>(j));
            vals[j] = {std::fabs(p.V_xi), std::fabs(p.U_xi), std::fabs(p.V_xixi),
                       std::fabs(p.U_xixi), std::fabs(p.visc_flux_xi)};
        }
        for (std::size_t ip = 0; ip < p_values.size(); ++ip) {
            const double pv = p_values[ip];
            for (int f = 0; f < LpBoundReport::kFields; ++f) {
                double norm;
                if (std::isinf(pv)) {
                    norm = 0.0;
                    for (auto& v : vals) norm = std::max(norm, v[f]);
                } else {
                    double acc = 0.0;
                    for (std::size_t j = 0; j <= samples; ++j) {
                        const double w = (j == 0 || j == samples) ? 0.5 : 1.0;
                        acc += w * std::pow(vals[j][f], pv);
                    }
                    norm = std::pow(acc * dx, 1.0 / pv);
                }
                rep.norms[f][ip][it] = norm;
            }
            const double inv_p = std::isinf(pv) ? 0.0 : 1.0 / pv;
            const double bound1 = std::min(std::pow(eps, 1.0 - inv_p),
                                           std::pow(1.0 + t, -1.0 + inv_p));
            const double bound2 = std::min(std::pow(eps, 2.0 - inv_p),
                                           std::pow(1.0 + t, -1.0 + 1.0 / q));
            const double first = std::max(rep.norms[0][ip][it], rep.norms[1][ip][it]);
            const double second = std::max({rep.norms[2][ip][it], rep.norms[3][ip][it],
                                            rep.norms[4][ip][it]});
            rep.c_first[ip] = std::max(rep.c_first[ip], first / bound1);
            rep.c_second[ip] = std::max(rep.c_second[ip], second / bound2);
        }
    }
    return rep;
}

}  // namespace inflow

#endif
