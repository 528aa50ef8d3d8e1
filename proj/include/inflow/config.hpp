#ifndef INFLOW_CONFIG_HPP
#define INFLOW_CONFIG_HPP

#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "inflow/conditions.hpp"
#include "inflow/gas.hpp"
#include "inflow/rarefaction.hpp"

namespace inflow {

enum class Scenario { Bl, Rarefaction, ProfileOnly, Classify, CheckIndices };

inline const char* to_string(Scenario s) {
    switch (s) {
        case Scenario::Bl: return "bl";
        case Scenario::Rarefaction: return "rarefaction";
        case Scenario::ProfileOnly: return "profile-only";
        case Scenario::Classify: return "classify";
        default: return "check-indices";
    }
}

class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(std::vector<std::string> problems_)
        : std::runtime_error(join(problems_)), problems(std::move(problems_)) {}
    std::vector<std::string> problems;

  private:
    static std::string join(const std::vector<std::string>& v) {
        std::string out = "invalid config:";
        for (const auto& p : v) out += "\n  " + p;
        return out;
    }
};

// Flat `key = value` run configuration with dotted section keys.
struct RunConfig {
    Scenario scenario = Scenario::Bl;
    double gamma = 1.0;
    double mu = 1.0;
    double v_minus = 1.0, u_minus = 0.5;
    double v_plus = 1.0, u_plus = 0.5;

    int grid_n = 800;
    double grid_length = 60.0;

    double t_end = 100.0;
    double cfl = 0.4;
    double output_every = 1.0;
    std::vector<double> profile_times = {0.0};

    std::string shape_f = "zero";
    std::string shape_g = "zero";
    double pert_alpha = 0.0, pert_beta = 0.0, pert_l = 0.0, pert_eps = 1.0;

    int rare_q = 10;
    double rare_eps = 0.1;

    double thr_sup_ratio = 0.1;
    double thr_energy_factor = 3.0;

    double idx_l0 = 0.0;
    long idx_samples = 10000;

    std::string echo;  // the exact text this config was parsed from

    GasModel gas() const { return GasModel(gamma, mu); }
    EndState minus() const { return EndState(v_minus, u_minus); }
    EndState plus() const { return EndState(v_plus, u_plus); }
    IndexParams index_params() const {
        return IndexParams{pert_alpha, pert_beta, pert_l, idx_l0, gamma};
    }
    bool has_perturbation() const { return shape_f != "zero" || shape_g != "zero"; }
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

struct KeyValue {
    std::string value;
    int line = 0;
    bool used = false;
};

}  // namespace detail

inline RunConfig parse_config(const std::string& text) {
    std::vector<std::string> problems;
    std::map<std::string, detail::KeyValue> kv;

    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            problems.push_back("line " + std::to_string(lineno) + ": expected `key = value`");
            continue;
        }
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) {
            problems.push_back("line " + std::to_string(lineno) + ": empty key or value");
            continue;
        }
        if (kv.count(key)) {
            problems.push_back("line " + std::to_string(lineno) + ": duplicate key `" + key +
                               "` (first on line " + std::to_string(kv[key].line) + ")");
            continue;
        }
        kv[key] = {value, lineno, false};
    }

    RunConfig cfg;
    cfg.echo = text;

    const auto take = [&](const std::string& key) -> std::optional<std::string> {
        auto it = kv.find(key);
        if (it == kv.end()) return std::nullopt;
        it->second.used = true;
        return it->second.value;
    };
    const auto bad = [&](const std::string& key, const std::string& why) {
        problems.push_back("key `" + key + "` (line " + std::to_string(kv[key].line) + "): " + why);
    };
    const auto num = [&](const std::string& key, double& dst) {
        if (auto v = take(key)) {
            try {
                std::size_t pos = 0;
                dst = std::stod(*v, &pos);
                if (pos != v->size()) throw std::invalid_argument("");
            } catch (...) {
                bad(key, "unparsable number `" + *v + "`");
            }
        }
    };
    const auto integer = [&](const std::string& key, auto& dst) {
        if (auto v = take(key)) {
            try {
                std::size_t pos = 0;
                const long parsed = std::stol(*v, &pos);
                if (pos != v->size()) throw std::invalid_argument("");
                dst = static_cast<std::decay_t<decltype(dst)>>(parsed);
            } catch (...) {
                bad(key, "unparsable integer `" + *v + "`");
            }
        }
    };
    const auto text_key = [&](const std::string& key, std::string& dst) {
        if (auto v = take(key)) dst = *v;
    };

    bool have_scenario = false;
    if (auto v = take("scenario")) {
        have_scenario = true;
        if (*v == "bl")
            cfg.scenario = Scenario::Bl;
        else if (*v == "rarefaction")
            cfg.scenario = Scenario::Rarefaction;
        else if (*v == "profile-only")
            cfg.scenario = Scenario::ProfileOnly;
        else if (*v == "classify")
            cfg.scenario = Scenario::Classify;
        else if (*v == "check-indices")
            cfg.scenario = Scenario::CheckIndices;
        else
            bad("scenario", "unknown scenario `" + *v + "`");
    } else {
        problems.push_back("missing required key `scenario`");
    }

    bool have_gamma = kv.count("gamma") > 0;
    num("gamma", cfg.gamma);
    for (const char* k : {"v_minus", "u_minus", "v_plus", "u_plus"})
        if (!kv.count(k)) problems.push_back(std::string("missing required key `") + k + "`");
    num("mu", cfg.mu);
    num("v_minus", cfg.v_minus);
    num("u_minus", cfg.u_minus);
    num("v_plus", cfg.v_plus);
    num("u_plus", cfg.u_plus);
    if (!have_gamma) problems.push_back("missing required key `gamma`");

    integer("grid.n", cfg.grid_n);
    num("grid.length", cfg.grid_length);
    num("time.t_end", cfg.t_end);
    num("time.cfl", cfg.cfl);
    num("output.every", cfg.output_every);
    if (auto v = take("output.profile_times")) {
        cfg.profile_times.clear();
        std::istringstream ts(*v);
        std::string tok;
        while (std::getline(ts, tok, ',')) {
            try {
                cfg.profile_times.push_back(std::stod(detail::trim(tok)));
            } catch (...) {
                bad("output.profile_times", "unparsable time `" + tok + "`");
            }
        }
    }
    text_key("perturbation.shape_f", cfg.shape_f);
    text_key("perturbation.shape_g", cfg.shape_g);
    num("perturbation.alpha", cfg.pert_alpha);
    num("perturbation.beta", cfg.pert_beta);
    num("perturbation.l", cfg.pert_l);
    num("perturbation.eps", cfg.pert_eps);
    integer("rarefaction.q", cfg.rare_q);
    num("rarefaction.eps_smooth", cfg.rare_eps);
    num("thresholds.sup_decay_ratio", cfg.thr_sup_ratio);
    num("thresholds.energy_growth_factor", cfg.thr_energy_factor);
    num("indices.l0", cfg.idx_l0);
    integer("indices.samples", cfg.idx_samples);

    for (const auto& [key, entry] : kv)
        if (!entry.used)
            problems.push_back("line " + std::to_string(entry.line) + ": unknown key `" + key +
                               "`");

    // range validation
    if (cfg.gamma < 1.0) problems.push_back("gamma must be >= 1");
    if (cfg.mu <= 0.0) problems.push_back("mu must be positive");
    if (cfg.v_minus <= 0.0) problems.push_back("v_minus must be positive");
    if (cfg.v_plus <= 0.0) problems.push_back("v_plus must be positive");
    if (cfg.grid_n < 16) problems.push_back("grid.n must be >= 16");
    if (cfg.grid_length <= 0.0) problems.push_back("grid.length must be positive");
    if (cfg.t_end < 0.0) problems.push_back("time.t_end must be nonnegative");
    if (!(cfg.cfl > 0.0 && cfg.cfl <= 1.0)) problems.push_back("time.cfl must be in (0,1]");
    if (cfg.output_every <= 0.0) problems.push_back("output.every must be positive");
    if (!(cfg.pert_eps > 0.0)) problems.push_back("perturbation.eps must be positive");
    if (cfg.rare_q < 1) problems.push_back("rarefaction.q must be >= 1");
    if (!(cfg.rare_eps > 0.0 && cfg.rare_eps <= 1.0))
        problems.push_back("rarefaction.eps_smooth must be in (0,1]");
    if (cfg.idx_samples < 1) problems.push_back("indices.samples must be >= 1");
    for (const std::string* s : {&cfg.shape_f, &cfg.shape_g}) {
        if (*s != "zero" && *s != "none" && *s != "bump" && *s != "tanh-tail" &&
            *s != "sine-packet")
            problems.push_back("unknown perturbation shape `" + *s + "`");
    }

    // scenario cross-validation against the phase-plane classification
    if (problems.empty() && have_scenario) {
        const GasModel gas = cfg.gas();
        const AsymptoticCase cls = classify_asymptotic(cfg.minus(), cfg.plus(), gas);
        const PhaseRegion region = classify_state(cfg.minus(), gas);
        if (cfg.scenario == Scenario::Bl) {
            if (cls.kind != AsymptoticKind::BLplus && cls.kind != AsymptoticKind::BLminus)
                problems.push_back(
                    "scenario=bl requires subsonic (v-,u-) with (v+,u+) on the boundary-layer "
                    "line (Case I); got minus region `" +
                    std::string(to_string(region)) + "`, classification `" +
                    to_string(cls.kind) + "`");
        } else if (cfg.scenario == Scenario::Rarefaction) {
            if (cls.kind != AsymptoticKind::Rarefaction1)
                problems.push_back(
                    "scenario=rarefaction requires supersonic (v-,u-) with (v+,u+) on the "
                    "1-rarefaction curve (Case II); got minus region `" +
                    std::string(to_string(region)) + "`, classification `" +
                    to_string(cls.kind) + "`");
            else if (cfg.t_end > 0.0) {
                RarefactionEvaluator ev(cfg.minus(), cfg.plus(), gas, cfg.rare_q, cfg.rare_eps);
                const double need = ev.support_extent(cfg.t_end, 1e-8) / 0.88 + 5.0;
                if (cfg.grid_length < need) {
                    char buf[160];
                    std::snprintf(buf, sizeof buf,
                                  "grid.length=%g too short: the smoothed fan reaches past the "
                                  "far-field probe by t_end; need >= %.1f",
                                  cfg.grid_length, need);
                    problems.push_back(buf);
                }
            }
        }
    }

    if (!problems.empty()) throw ConfigError(std::move(problems));
    return cfg;
}

}  // namespace inflow

#endif
