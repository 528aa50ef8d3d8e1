#ifndef INFLOW_CONDITIONS_HPP
#define INFLOW_CONDITIONS_HPP

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "inflow/numerics.hpp"

namespace inflow {

struct IndexParams {
    double alpha = 0.0;
    double beta = 0.0;
    double l = 0.0;
    double l0 = 0.0;
    double gamma = 1.0;

    // theta = alpha - beta - (gamma+3) l / 2 governs the density bracket
    // exponents of the boundary-layer cases.
    double theta() const { return alpha - beta - 0.5 * (gamma + 3.0) * l; }
};

struct Clause {
    std::string id;
    std::string text;
    double lhs = 0.0;
    double rhs = 0.0;
    bool strict = true;
    bool pass = false;
};

struct IndexCheck {
    bool pass = true;
    std::vector<Clause> clauses;

    std::vector<std::string> violated() const {
        std::vector<std::string> out;
        for (const auto& c : clauses)
            if (!c.pass) out.push_back(c.id);
        return out;
    }
};

namespace detail {

inline void add_clause(IndexCheck& chk, std::string id, std::string text, double lhs,
                       double rhs, bool strict) {
    Clause c;
    c.id = std::move(id);
    c.text = std::move(text);
    c.lhs = lhs;
    c.rhs = rhs;
    c.strict = strict;
    c.pass = strict ? (lhs < rhs) : (lhs <= rhs);
    chk.pass = chk.pass && c.pass;
    chk.clauses.push_back(std::move(c));
}

}  // namespace detail

// Admissible indices for the increasing boundary layer.  Clauses are
// evaluated literally in double precision, strict vs non-strict as stated.
inline IndexCheck check_bl_plus(const IndexParams& p) {
    const double g = p.gamma;
    IndexCheck chk;
    detail::add_clause(chk, "1a", "alpha > (gamma+2)l/2", 0.5 * (g + 2.0) * p.l, p.alpha, true);
    detail::add_clause(chk, "1b", "alpha + beta > (gamma+1)l", (g + 1.0) * p.l,
                       p.alpha + p.beta, true);
    detail::add_clause(chk, "1c", "beta >= (gamma-1)l/2", 0.5 * (g - 1.0) * p.l, p.beta,
                       false);
    detail::add_clause(chk, "2", "alpha - beta <= (gamma+3)l/2", p.alpha - p.beta,
                       0.5 * (g + 3.0) * p.l, false);
    const double m3 =
        std::min(2.0 * (g - 1.0) / (g + 1.0) * p.alpha -
                     (3.0 * g * g + 4.0 * g + 1.0) / (2.0 * g + 2.0) * p.l,
                 3.0 * (g - 1.0) / (g * g + 1.0) * p.alpha -
                     (g * g + 6.0 * g + 1.0) / (2.0 * (g * g + 1.0)) * g * p.l);
    detail::add_clause(chk, "3", "beta - alpha < min{...} (gamma-weighted)",
                       p.beta - p.alpha, m3, true);
    const double m4 = std::min(p.alpha - (g + 2.0) * p.l,
                               2.0 * p.alpha / g - (g * g + 5.0 * g + 2.0) / (2.0 * g) * p.l);
    detail::add_clause(chk, "4", "beta - alpha < min{alpha-(gamma+2)l, 2alpha/gamma-...}",
                       p.beta - p.alpha, m4, true);
    return chk;
}

// Admissible indices for the decreasing boundary layer.
inline IndexCheck check_bl_minus(const IndexParams& p) {
    const double g = p.gamma;
    IndexCheck chk;
    detail::add_clause(chk, "1a", "alpha > (gamma+2)l/2", 0.5 * (g + 2.0) * p.l, p.alpha, true);
    detail::add_clause(chk, "1b", "gamma l < alpha + beta", g * p.l, p.alpha + p.beta, true);
    detail::add_clause(chk, "1c", "alpha + beta < 1/2 - (gamma+5)l/2", p.alpha + p.beta,
                       0.5 - 0.5 * (g + 5.0) * p.l, true);
    detail::add_clause(chk, "2", "alpha - beta <= (gamma+3)l/2", p.alpha - p.beta,
                       0.5 * (g + 3.0) * p.l, false);
    const double denom = 2.0 * g * g + 6.0 * g - 2.0;
    const double m3 = std::min(p.alpha - (g + 2.0) * p.l,
                               (g - 1.0) * (1.0 - 4.0 * p.alpha) / denom -
                                   (g * g * g + 4.0 * g * g + 8.0 * g - 1.0) / denom * p.l);
    detail::add_clause(chk, "3", "beta - alpha < min{alpha-(gamma+2)l, ...}",
                       p.beta - p.alpha, m3, true);
    return chk;
}

// Admissible indices for the supersonic rarefaction.
inline IndexCheck check_r(const IndexParams& p) {
    const double g = p.gamma;
    IndexCheck chk;
    detail::add_clause(chk, "1", "l <= 1/(8gamma-2)", p.l, 1.0 / (8.0 * g - 2.0), false);
    detail::add_clause(chk, "2", "l0 > 2alpha + (gamma+1)l", 2.0 * p.alpha + (g + 1.0) * p.l,
                       p.l0, true);
    const double lhs = 4.0 * p.alpha + 2.0 * (g + 1.0) * p.l;
    detail::add_clause(chk, "3", "4alpha + 2(gamma+1)l >= max{l, (gamma-1)l}",
                       std::max(p.l, (g - 1.0) * p.l), lhs, false);
    const double m4 = std::min((g - 1.0) / (6.0 * g * g - 6.0 * g + 2.0),
                               2.0 * (g - 1.0) / (3.0 * g * g + 3.0 * g + 9.0));
    detail::add_clause(chk, "4", "4alpha + 2(gamma+1)l < min{...}", lhs, m4, true);
    return chk;
}

struct RemarkWitness {
    double alpha = 0.0;
    double second = 0.0;  // beta for remarks 1-2, l0 for remark 4
    std::vector<std::string> violated;
};

struct RemarkVerification {
    int remark = 0;
    double gamma = 1.0;
    std::size_t samples = 0;
    std::size_t counterexamples = 0;
    bool region_empty = false;
    std::vector<RemarkWitness> witnesses;  // capped
};

// Sample the sufficient region stated for a Remark (1: increasing layer,
// 2: decreasing layer, 4: rarefaction) and run the matching checker on
// every draw.  Sampling keeps a 1e-9 interior margin so open boundaries
// are never touched.  Reproducible bit-for-bit for a fixed seed.
inline RemarkVerification verify_remark(int remark, double gamma, std::size_t samples,
                                        uint64_t seed) {
    if (samples < 1) throw std::invalid_argument("verify_remark: samples must be >= 1");
    if (remark != 1 && remark != 2 && remark != 4)
        throw std::invalid_argument("verify_remark: remark must be 1, 2, or 4");

    const double margin = 1e-9;
    RemarkVerification out;
    out.remark = remark;
    out.gamma = gamma;
    out.samples = samples;
    DeterministicRng rng(seed ^ (0x5bd1e995u + static_cast<uint64_t>(remark)));

    const auto record = [&](double a, double second, const IndexCheck& chk) {
        if (!chk.pass) {
            ++out.counterexamples;
            if (out.witnesses.size() < 10)
                out.witnesses.push_back({a, second, chk.violated()});
        }
    };

    if (remark == 1) {
        const double m = std::min({1.0, 2.0 / gamma, 2.0 * (gamma - 1.0) / (gamma + 1.0),
                                   3.0 * (gamma - 1.0) / (gamma * gamma + 1.0)});
        if (m <= 2.0 * margin) {
            out.region_empty = true;
            return out;
        }
        for (std::size_t i = 0; i < samples; ++i) {
            const double a = rng.uniform(margin, 1.0);
            const double b = a + (margin + rng.uniform01() * (1.0 - 2.0 * margin)) * m * a;
            IndexParams p{a, b, 0.0, 0.0, gamma};
            record(a, b, check_bl_plus(p));
        }
    } else if (remark == 2) {
        const double denom = 2.0 * gamma * gamma + 6.0 * gamma - 2.0;
        if (gamma <= 1.0) {
            out.region_empty = true;  // min{alpha, 0} forces beta < alpha
            return out;
        }
        std::size_t drawn = 0, attempts = 0;
        while (drawn < samples && attempts < 1000 * samples) {
            ++attempts;
            const double a = rng.uniform(margin, 0.25 - margin);
            const double m = std::min(a, (gamma - 1.0) * (1.0 - 4.0 * a) / denom);
            const double cap = std::min(a + m, 0.5 - a);
            if (cap - a <= 2.0 * margin) continue;
            const double b = a + margin + rng.uniform01() * (cap - a - 2.0 * margin);
            IndexParams p{a, b, 0.0, 0.0, gamma};
            record(a, b, check_bl_minus(p));
            ++drawn;
        }
        out.samples = drawn;
    } else {
        const double m = std::min((gamma - 1.0) / (6.0 * gamma * gamma - 6.0 * gamma + 2.0),
                                  2.0 * (gamma - 1.0) / (3.0 * gamma * gamma + 3.0 * gamma + 9.0));
        if (0.25 * m <= 2.0 * margin) {
            out.region_empty = true;
            return out;
        }
        for (std::size_t i = 0; i < samples; ++i) {
            const double a = rng.uniform(margin, 0.25 * m - margin);
            const double l0 = 2.0 * a + margin + rng.uniform01();
            IndexParams p{a, 0.0, 0.0, l0, gamma};
            record(a, l0, check_r(p));
        }
    }
    return out;
}

// --- named perturbation shapes -------------------------------------------

struct Shape {
    std::string name;
    std::function<double(double)> value;
    std::function<double(double)> deriv;
    double l2 = 0.0;        // ||f||_{L^2(0,inf)}
    double deriv_l2 = 0.0;  // ||f'||_{L^2(0,inf)}
};

namespace shapes {

inline double bump_value(double x) {
    if (x <= 0.0 || x >= 2.0) return 0.0;
    return std::exp(1.0 - 1.0 / (x * (2.0 - x)));
}
inline double bump_deriv(double x) {
    if (x <= 0.0 || x >= 2.0) return 0.0;
    const double s = x * (2.0 - x);
    return bump_value(x) * (2.0 - 2.0 * x) / (s * s);
}

inline double tanh_tail_value(double x) {
    if (x <= 0.0) return 0.0;
    return std::tanh(x) * std::exp(-0.25 * x);
}
inline double tanh_tail_deriv(double x) {
    if (x <= 0.0) return 0.0;
    const double th = std::tanh(x);
    return ((1.0 - th * th) - 0.25 * th) * std::exp(-0.25 * x);
}

inline double sine_packet_value(double x) {
    if (x <= 0.0) return 0.0;
    const double r = (x - 3.0) / 1.5;
    return std::sin(2.0 * x) * std::exp(-r * r);
}
inline double sine_packet_deriv(double x) {
    if (x <= 0.0) return 0.0;
    const double r = (x - 3.0) / 1.5;
    const double e = std::exp(-r * r);
    return (2.0 * std::cos(2.0 * x) - std::sin(2.0 * x) * 2.0 * r / 1.5) * e;
}

}  // namespace shapes

inline const Shape& shape_by_name(const std::string& name) {
    static const auto make = [](std::string n, double (*v)(double), double (*d)(double),
                                double span) {
        Shape s;
        s.name = std::move(n);
        s.value = v;
        s.deriv = d;
        s.l2 = std::sqrt(integrate([&](double x) { return v(x) * v(x); }, 0.0, span, 1e-14));
        s.deriv_l2 =
            std::sqrt(integrate([&](double x) { return d(x) * d(x); }, 0.0, span, 1e-14));
        return s;
    };
    static const Shape zero{"zero", [](double) { return 0.0; }, [](double) { return 0.0; },
                            0.0, 0.0};
    static const Shape bump = make("bump", shapes::bump_value, shapes::bump_deriv, 2.0);
    static const Shape tanh_tail =
        make("tanh-tail", shapes::tanh_tail_value, shapes::tanh_tail_deriv, 120.0);
    static const Shape sine_packet =
        make("sine-packet", shapes::sine_packet_value, shapes::sine_packet_deriv, 30.0);

    if (name == "zero" || name == "none") return zero;
    if (name == "bump") return bump;
    if (name == "tanh-tail") return tanh_tail;
    if (name == "sine-packet") return sine_packet;
    throw std::invalid_argument("unknown shape: " + name);
}

// Scaled initial perturbation family
//   phi0(x) = eps^{(alpha+beta)/2} f(eps^{beta-alpha} x),
// so ||phi0|| = eps^alpha ||f|| and ||phi0_x|| = eps^beta ||f'|| by the
// change of variables.
struct PerturbationSpec {
    Shape f, g;
    double alpha = 0.0, beta = 0.0, l = 0.0;
    double eps = 1.0;

    double amplitude() const { return std::pow(eps, 0.5 * (alpha + beta)); }
    double stretch() const { return std::pow(eps, beta - alpha); }

    double phi0(double x) const { return amplitude() * f.value(stretch() * x); }
    double psi0(double x) const { return amplitude() * g.value(stretch() * x); }
    double phi0_dx(double x) const {
        return amplitude() * stretch() * f.deriv(stretch() * x);
    }
    double psi0_dx(double x) const {
        return amplitude() * stretch() * g.deriv(stretch() * x);
    }

    double phi_l2() const { return std::pow(eps, alpha) * f.l2; }
    double psi_l2() const { return std::pow(eps, alpha) * g.l2; }
    double phi_dx_l2() const { return std::pow(eps, beta) * f.deriv_l2; }
    double psi_dx_l2() const { return std::pow(eps, beta) * g.deriv_l2; }
};

inline PerturbationSpec build_perturbation(const Shape& f, const Shape& g,
                                           const IndexParams& p, double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("build_perturbation: eps must be positive");
    if (f.value(0.0) != 0.0 || g.value(0.0) != 0.0)
        throw std::invalid_argument(
            "build_perturbation: shapes must vanish at the origin (boundary compatibility)");
    PerturbationSpec spec;
    spec.f = f;
    spec.g = g;
    spec.alpha = p.alpha;
    spec.beta = p.beta;
    spec.l = p.l;
    spec.eps = eps;
    return spec;
}

inline PerturbationSpec build_perturbation(const std::string& f_name,
                                           const std::string& g_name, const IndexParams& p,
                                           double eps) {
    return build_perturbation(shape_by_name(f_name), shape_by_name(g_name), p, eps);
}

}  // namespace inflow

#endif
