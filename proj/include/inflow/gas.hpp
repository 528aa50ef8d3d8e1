#ifndef INFLOW_GAS_HPP
#define INFLOW_GAS_HPP

#include <cmath>
#include <stdexcept>
#include <string>

namespace inflow {

// Polytropic gas p(v) = v^-gamma in Lagrangian variables, together with
// the constant viscosity of the momentum equation.
struct GasModel {
    double gamma = 1.0;
    double mu = 1.0;

    GasModel() = default;
    GasModel(double gamma_, double mu_) : gamma(gamma_), mu(mu_) {
        if (gamma < 1.0) throw std::domain_error("GasModel: gamma must be >= 1");
        if (mu <= 0.0) throw std::domain_error("GasModel: mu must be positive");
    }

    bool isothermal() const { return gamma == 1.0; }
};

// A point (v, u) of the phase plane, v the specific volume.
struct EndState {
    double v = 1.0;
    double u = 0.0;

    EndState() = default;
    EndState(double v_, double u_) : v(v_), u(u_) {
        if (v <= 0.0) throw std::domain_error("EndState: specific volume must be positive");
    }
};

enum class PhaseRegion { Subsonic, Transonic, Supersonic, OutOfDomain };

enum class AsymptoticKind { BLplus, BLminus, Rarefaction1, Rarefaction2, Unsupported };

struct AsymptoticCase {
    AsymptoticKind kind = AsymptoticKind::Unsupported;
    double delta = 0.0;  // wave strength |u+ - u-|
};

inline const char* to_string(PhaseRegion r) {
    switch (r) {
        case PhaseRegion::Subsonic: return "subsonic";
        case PhaseRegion::Transonic: return "transonic";
        case PhaseRegion::Supersonic: return "supersonic";
        default: return "out-of-domain";
    }
}

inline const char* to_string(AsymptoticKind k) {
    switch (k) {
        case AsymptoticKind::BLplus: return "BLplus";
        case AsymptoticKind::BLminus: return "BLminus";
        case AsymptoticKind::Rarefaction1: return "Rarefaction1";
        case AsymptoticKind::Rarefaction2: return "Rarefaction2";
        default: return "Unsupported";
    }
}

inline double pressure(double v, const GasModel& gas) {
    if (v <= 0.0) throw std::domain_error("pressure: v must be positive");
    // closed forms for the common exponents keep the solver kernel off pow
    if (gas.gamma == 1.0) return 1.0 / v;
    if (gas.gamma == 2.0) return 1.0 / (v * v);
    if (gas.gamma == 3.0) return 1.0 / (v * v * v);
    return std::pow(v, -gas.gamma);
}

inline double pressure_dv(double v, const GasModel& gas) {
    if (v <= 0.0) throw std::domain_error("pressure_dv: v must be positive");
    return -gas.gamma * std::pow(v, -gas.gamma - 1.0);
}

inline double pressure_dvv(double v, const GasModel& gas) {
    if (v <= 0.0) throw std::domain_error("pressure_dvv: v must be positive");
    return gas.gamma * (gas.gamma + 1.0) * std::pow(v, -gas.gamma - 2.0);
}

// c(v) = v sqrt(-p'(v)) = sqrt(gamma) v^{-(gamma-1)/2}
inline double sound_speed(double v, const GasModel& gas) {
    if (v <= 0.0) throw std::domain_error("sound_speed: v must be positive");
    return std::sqrt(gas.gamma) * std::pow(v, -0.5 * (gas.gamma - 1.0));
}

inline double lambda(int i, double v, const GasModel& gas) {
    if (i != 1 && i != 2) throw std::invalid_argument("lambda: family index must be 1 or 2");
    if (v <= 0.0) throw std::domain_error("lambda: v must be positive");
    const double mag = std::sqrt(gas.gamma) * std::pow(v, -0.5 * (gas.gamma + 1.0));
    return i == 1 ? -mag : mag;
}

// Boundary speed of the Lagrangian moving frame.
inline double boundary_speed(const EndState& minus) { return -minus.u / minus.v; }

constexpr double kTransonicTol = 1e-9;

inline PhaseRegion classify_state(const EndState& s, const GasModel& gas,
                                  double tol = kTransonicTol) {
    if (s.v <= 0.0 || s.u <= 0.0) return PhaseRegion::OutOfDomain;
    const double gap = std::fabs(s.u) - sound_speed(s.v, gas);
    if (std::fabs(gap) <= tol) return PhaseRegion::Transonic;
    return gap < 0.0 ? PhaseRegion::Subsonic : PhaseRegion::Supersonic;
}

// Intersection (v*, u*) of the line u/v = u-/v- with the transonic set:
// sqrt(-p'(v*)) = u-/v-.
inline EndState sonic_point(const EndState& minus, const GasModel& gas) {
    if (minus.u <= 0.0) throw std::domain_error("sonic_point: requires inflow (u- > 0)");
    const double vstar =
        std::pow(std::sqrt(gas.gamma) * minus.v / minus.u, 2.0 / (gas.gamma + 1.0));
    return EndState(vstar, minus.u / minus.v * vstar);
}

// u along the i-rarefaction curve through `minus`:
//   u = u- - int_{v-}^{v} lambda_i(s) ds.
// gamma = 1 takes the logarithmic antiderivative directly.
inline double rarefaction_curve_u(double v, const EndState& minus, int i,
                                  const GasModel& gas) {
    if (i != 1 && i != 2)
        throw std::invalid_argument("rarefaction_curve_u: family index must be 1 or 2");
    if (v <= 0.0) throw std::domain_error("rarefaction_curve_u: v must be positive");
    double increment;
    if (gas.isothermal()) {
        increment = std::log(v / minus.v);
    } else {
        const double e = 0.5 * (1.0 - gas.gamma);
        increment = 2.0 * std::sqrt(gas.gamma) / (gas.gamma - 1.0) *
                    (std::pow(minus.v, e) - std::pow(v, e));
    }
    return i == 1 ? minus.u + increment : minus.u - increment;
}

constexpr double kCurveTol = 1e-9;

// Case classification of an end-state pair.  Membership tests are
// relative: the BL line via |u+ v- - u- v+| <= tol |u- v+|, the R_i
// curves via |u+ - curve(v+)| <= tol max(1, |u+|).  Coinciding states
// are reported as BLplus with delta = 0 (constant profile convention).
inline AsymptoticCase classify_asymptotic(const EndState& minus, const EndState& plus,
                                          const GasModel& gas, double tol = kCurveTol) {
    AsymptoticCase out;
    out.delta = std::fabs(plus.u - minus.u);

    const PhaseRegion region = classify_state(minus, gas);
    if (region == PhaseRegion::OutOfDomain) return out;

    const bool same_state = std::fabs(plus.v - minus.v) <= tol * minus.v &&
                            std::fabs(plus.u - minus.u) <= tol * std::max(1.0, std::fabs(minus.u));
    if (same_state) {
        out.kind = AsymptoticKind::BLplus;
        out.delta = 0.0;
        return out;
    }

    if (region == PhaseRegion::Subsonic) {
        const bool on_line =
            std::fabs(plus.u * minus.v - minus.u * plus.v) <= tol * std::fabs(minus.u * plus.v);
        if (on_line && plus.u > 0.0) {
            const double vstar = sonic_point(minus, gas).v;
            if (plus.v > minus.v && plus.v <= vstar + tol) {
                out.kind = AsymptoticKind::BLplus;
                return out;
            }
            if (plus.v < minus.v) {
                out.kind = AsymptoticKind::BLminus;
                return out;
            }
        }
        return out;
    }

    if (region == PhaseRegion::Supersonic && plus.u > minus.u) {
        for (int i : {1, 2}) {
            const double expect = rarefaction_curve_u(plus.v, minus, i, gas);
            if (std::fabs(plus.u - expect) <= tol * std::max(1.0, std::fabs(plus.u))) {
                out.kind = i == 1 ? AsymptoticKind::Rarefaction1 : AsymptoticKind::Rarefaction2;
                return out;
            }
        }
    }
    return out;
}

inline EndState eulerian_to_lagrangian(double rho, double u) {
    if (rho <= 0.0) throw std::domain_error("eulerian_to_lagrangian: rho must be positive");
    return EndState(1.0 / rho, u);
}

}  // namespace inflow

#endif
