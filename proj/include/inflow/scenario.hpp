#ifndef INFLOW_SCENARIO_HPP
#define INFLOW_SCENARIO_HPP

#include <cmath>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "inflow/config.hpp"
#include "inflow/io.hpp"
#include "inflow/solver.hpp"

namespace inflow {

struct ScenarioOptions {
    uint64_t seed = 1;
    bool upwind = false;
    double wall_budget_s = 0.0;
};

struct ScenarioResult {
    int exit_code = 0;
    Summary summary;
    std::filesystem::path out_dir;
    Trajectory trajectory;  // populated for simulating scenarios
};

namespace detail {

inline void add_classification(Summary& s, const RunConfig& cfg, const AsymptoticCase& cls) {
    const GasModel gas = cfg.gas();
    s.add("scenario", std::string(to_string(cfg.scenario)));
    s.add("gamma", cfg.gamma);
    s.add("mu", cfg.mu);
    s.add("v_minus", cfg.v_minus);
    s.add("u_minus", cfg.u_minus);
    s.add("v_plus", cfg.v_plus);
    s.add("u_plus", cfg.u_plus);
    s.add("minus_region", std::string(to_string(classify_state(cfg.minus(), gas))));
    s.add("classification", std::string(to_string(cls.kind)));
    s.add("delta", cls.delta);
    s.add("s_minus", boundary_speed(cfg.minus()));
    if (cfg.minus().u > 0.0) {
        const EndState star = sonic_point(cfg.minus(), gas);
        s.add("v_star", star.v);
        s.add("u_star", star.u);
    }
    const bool rarefaction = cls.kind == AsymptoticKind::Rarefaction1 ||
                             cls.kind == AsymptoticKind::Rarefaction2;
    const double theta = rarefaction
                             ? -2.0 * cfg.pert_alpha - (cfg.gamma + 1.0) * cfg.pert_l
                             : cfg.index_params().theta();
    s.add("theta", theta);
}

inline IndexCheck run_checker(AsymptoticKind kind, const IndexParams& p) {
    switch (kind) {
        case AsymptoticKind::BLplus: return check_bl_plus(p);
        case AsymptoticKind::BLminus: return check_bl_minus(p);
        default: return check_r(p);
    }
}

inline std::string join(const std::vector<std::string>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + v[i];
    return out.empty() ? "none" : out;
}

}  // namespace detail

// Full pipeline for one configuration: classification, background
// construction, simulation, diagnostics, artifact emission.  The artifact
// directory always receives config.echo and summary.txt; simulating
// scenarios add profile.csv, fields_<step>.csv, and diagnostics.csv.
// Exit code 0 iff every configured threshold passed.
inline ScenarioResult run_scenario(const RunConfig& cfg,
                                   const std::filesystem::path& out_dir,
                                   const ScenarioOptions& opt = {}) {
    namespace fs = std::filesystem;
    ScenarioResult res;
    res.out_dir = out_dir;
    fs::create_directories(out_dir);
    {
        auto echo = detail::open_out(out_dir / "config.echo");
        echo << cfg.echo;
    }

    const GasModel gas = cfg.gas();
    const AsymptoticCase cls = classify_asymptotic(cfg.minus(), cfg.plus(), gas);
    Summary& sum = res.summary;
    detail::add_classification(sum, cfg, cls);

    bool pass = true;

    if (cfg.scenario == Scenario::Classify) {
        sum.write(out_dir / "summary.txt");
        return res;
    }

    if (cfg.scenario == Scenario::CheckIndices) {
        if (cls.kind == AsymptoticKind::Unsupported) {
            sum.add("index_check_case", std::string("unsupported"));
            sum.add("pass", false);
            sum.write(out_dir / "summary.txt");
            res.exit_code = 2;
            return res;
        }
        const IndexParams p = cfg.index_params();
        const IndexCheck chk = detail::run_checker(cls.kind, p);
        sum.add("index_check_case", std::string(to_string(cls.kind)));
        for (const auto& c : chk.clauses) {
            sum.add("clause_" + c.id + "_text", c.text);
            sum.add("clause_" + c.id + "_lhs", c.lhs);
            sum.add("clause_" + c.id + "_rhs", c.rhs);
            sum.add("clause_" + c.id + "_strict", c.strict);
            sum.add("clause_" + c.id + "_pass", c.pass);
        }
        sum.add("index_check_pass", chk.pass);
        sum.add("index_violated", detail::join(chk.violated()));

        const int remark = cls.kind == AsymptoticKind::BLplus    ? 1
                           : cls.kind == AsymptoticKind::BLminus ? 2
                                                                 : 4;
        const RemarkVerification rv =
            verify_remark(remark, cfg.gamma, static_cast<std::size_t>(cfg.idx_samples),
                          opt.seed);
        sum.add("remark", static_cast<double>(remark));
        sum.add("remark_samples", static_cast<double>(rv.samples));
        sum.add("remark_counterexamples", static_cast<double>(rv.counterexamples));
        sum.add("remark_region_empty", rv.region_empty);
        pass = chk.pass && rv.counterexamples == 0;
        sum.add("pass", pass);
        sum.write(out_dir / "summary.txt");
        res.exit_code = pass ? 0 : 1;
        return res;
    }

    // profile construction (shared by profile-only and simulating scenarios)
    const Grid grid(cfg.grid_n, cfg.grid_length);
    std::unique_ptr<Background> bg;
    const bool is_bl =
        cls.kind == AsymptoticKind::BLplus || cls.kind == AsymptoticKind::BLminus;

    if (is_bl) {
        BoundaryLayerProfile prof = solve_profile(cfg.minus(), cfg.plus(), gas);
        write_profile_csv(out_dir / "profile.csv", prof);
        sum.add("profile_points", static_cast<double>(prof.size()));
        sum.add("profile_degenerate", prof.degenerate);
        sum.add("profile_truncated", prof.truncated);
        const ProfileVerification ver = verify_profile(prof, gas);
        sum.add("profile_residual", ver.max_residual);
        sum.add("profile_derivative_bound", ver.derivative_bound);
        sum.add("profile_monotonicity_violations",
                static_cast<double>(ver.monotonicity_violations));
        if (ver.monotonicity_violations != 0) pass = false;
        if (prof.delta > 0.0 && !prof.truncated) {
            const DecayFit fit = fit_decay(prof);
            if (fit.kind == DecayFit::Kind::Exponential) {
                sum.add("decay_kind", std::string("exponential"));
                sum.add("decay_rate_fitted", fit.rate);
                sum.add("decay_rate_linearized",
                        linearized_decay_rate(cfg.minus(), cfg.plus(), gas));
            } else {
                sum.add("decay_kind", std::string("algebraic"));
                sum.add("decay_exponent_fitted", fit.exponent);
            }
            sum.add("decay_fit_residual", fit.max_residual);
        }
        bg = std::make_unique<BoundaryLayerBackground>(std::move(prof), grid);
    } else if (cls.kind == AsymptoticKind::Rarefaction1) {
        RarefactionEvaluator ev(cfg.minus(), cfg.plus(), gas, cfg.rare_q, cfg.rare_eps);
        write_rarefaction_profile_csv(out_dir / "profile.csv", ev, 0.0, grid);
        for (const double t : cfg.profile_times) {
            if (t == 0.0) continue;
            char name[64];
            std::snprintf(name, sizeof name, "profile_t%g.csv", t);
            write_rarefaction_profile_csv(out_dir / name, ev, t, grid);
        }
        sum.add("delta_r", ev.burgers().delta_r);
        sum.add("burgers_q", static_cast<double>(ev.burgers().q));
        sum.add("burgers_eps", ev.burgers().eps);
        bg = std::make_unique<RarefactionBackground>(std::move(ev), grid);
    } else {
        sum.add("pass", false);
        sum.write(out_dir / "summary.txt");
        res.exit_code = 2;
        return res;
    }

    if (cfg.scenario == Scenario::ProfileOnly) {
        sum.add("pass", pass);
        sum.write(out_dir / "summary.txt");
        res.exit_code = pass ? 0 : 1;
        return res;
    }

    // initial data
    const PerturbationSpec spec =
        build_perturbation(cfg.shape_f, cfg.shape_g, cfg.index_params(), cfg.pert_eps);
    auto [state, init] = make_initial(*bg, spec, gas);
    sum.add("phi0_l2", init.phi_l2);
    sum.add("phi0_l2_expected", init.phi_l2_expected);
    sum.add("psi0_l2", init.psi_l2);
    sum.add("psi0_l2_expected", init.psi_l2_expected);
    sum.add("phi0_dx_l2", init.phi_dx_l2);
    sum.add("phi0_dx_l2_expected", init.phi_dx_l2_expected);
    sum.add("psi0_dx_l2", init.psi_dx_l2);
    sum.add("psi0_dx_l2_expected", init.psi_dx_l2_expected);
    sum.add("v0_min", init.v_min);
    sum.add("v0_max", init.v_max);
    sum.add("sup_diff_initial", init.sup_diff0);

    // index verdict for the configured perturbation family (informational
    // for simulate runs; the gate is the thresholds below)
    if (cfg.has_perturbation()) {
        const IndexCheck chk = detail::run_checker(cls.kind, cfg.index_params());
        sum.add("index_check_pass", chk.pass);
        sum.add("index_violated", detail::join(chk.violated()));
    }

    RunParams prm;
    prm.t_end = cfg.t_end;
    prm.output_every = cfg.output_every;
    prm.cfl = cfg.cfl;
    prm.upwind = opt.upwind;
    prm.wall_budget_s = opt.wall_budget_s;
    res.trajectory = run(*bg, std::move(state), gas, prm);
    const Trajectory& traj = res.trajectory;

    for (std::size_t i = 0; i < traj.snapshots.size(); ++i) {
        char name[64];
        std::snprintf(name, sizeof name, "fields_%zu.csv", traj.snapshot_steps[i]);
        write_fields_csv(out_dir / name, grid, traj.snapshots[i],
                         bg->fields(traj.snapshots[i].t));
    }
    write_diagnostics_csv(out_dir / "diagnostics.csv", traj.frames);

    sum.add("steps", static_cast<double>(traj.total_steps));
    sum.add("t_final", traj.frames.back().t);
    sum.add("aborted", traj.aborted);
    if (traj.aborted) sum.add("abort_reason", traj.abort_reason);
    sum.add("budget_exceeded", traj.budget_exceeded);
    sum.add("adequacy_warning", traj.adequacy_warning);
    sum.add("adequacy_max_dev", traj.adequacy_max_dev);

    const double sup0 = traj.frames.front().sup_diff;
    const double supT = traj.frames.back().sup_diff;
    sum.add("sup_diff_final", supT);
    if (sup0 > 1e-14) {
        const double ratio = supT / sup0;
        sum.add("sup_ratio", ratio);
        sum.add("sup_decay_threshold", cfg.thr_sup_ratio);
        const bool ok = ratio <= cfg.thr_sup_ratio;
        sum.add("sup_decay_pass", ok);
        pass = pass && ok;
    } else {
        sum.add("steady_drift", supT);  // zero perturbation: report drift only
        sum.add("sup_decay_pass", true);
    }

    const EnergyAudit audit = energy_audit(traj.frames, cfg.thr_energy_factor);
    sum.add("energy_constant", audit.energy_ratio_sup);
    sum.add("energy_trivial", audit.trivially_small);
    sum.add("energy_growth_factor", cfg.thr_energy_factor);
    sum.add("energy_pass", !audit.growth_flagged);
    sum.add("dissipation_total", audit.dissipation_total);
    sum.add("dissipation_monotone", audit.dissipation_monotone);
    sum.add("boundary_trace_integral", audit.boundary_integral);
    pass = pass && !audit.growth_flagged && audit.dissipation_monotone;

    pass = pass && !traj.aborted && !traj.budget_exceeded;
    sum.add("pass", pass);
    sum.write(out_dir / "summary.txt");
    res.exit_code = pass ? 0 : 1;
    return res;
}

struct RefinementLevel {
    int n = 0;
    double sup_final = 0.0;
    double energy_final = 0.0;
    double l2_final = 0.0;
};

struct RefinementReport {
    bool drift_mode = false;  // zero perturbation: sup_diff is the error itself
    std::vector<RefinementLevel> levels;
    std::vector<double> order_sup;  // one entry per adjacent pair/triple
};

// Rerun the configuration with dx halved per level and estimate the
// observed convergence order.  Zero-perturbation runs measure the drift
// from the exact steady profile directly; perturbed runs use Richardson
// differences of the final sup norm.
inline RefinementReport refinement_study(const RunConfig& cfg, int levels,
                                         const std::filesystem::path& out_dir,
                                         const ScenarioOptions& opt = {}) {
    if (levels < 3)
        throw std::invalid_argument("refinement_study: need at least 3 levels");
    if (cfg.scenario != Scenario::Bl && cfg.scenario != Scenario::Rarefaction)
        throw std::invalid_argument("refinement_study: requires a simulating scenario");

    RefinementReport rep;
    for (int k = 0; k < levels; ++k) {
        RunConfig level_cfg = cfg;
        level_cfg.grid_n = cfg.grid_n << k;
        char dir[32];
        std::snprintf(dir, sizeof dir, "level%d", k);
        const ScenarioResult r = run_scenario(level_cfg, out_dir / dir, opt);
        if (r.trajectory.aborted)
            throw std::runtime_error("refinement_study: level " + std::to_string(k) +
                                     " aborted: " + r.trajectory.abort_reason);
        RefinementLevel lev;
        lev.n = level_cfg.grid_n;
        lev.sup_final = r.trajectory.frames.back().sup_diff;
        lev.energy_final = r.trajectory.frames.back().energy_phi;
        lev.l2_final = r.trajectory.frames.back().l2_phi_psi;
        rep.levels.push_back(lev);
    }

    rep.drift_mode = !cfg.has_perturbation();
    if (rep.drift_mode) {
        for (std::size_t k = 0; k + 1 < rep.levels.size(); ++k)
            rep.order_sup.push_back(
                std::log2(rep.levels[k].sup_final / rep.levels[k + 1].sup_final));
    } else {
        for (std::size_t k = 0; k + 2 < rep.levels.size(); ++k) {
            const double d1 = rep.levels[k].sup_final - rep.levels[k + 1].sup_final;
            const double d2 = rep.levels[k + 1].sup_final - rep.levels[k + 2].sup_final;
            rep.order_sup.push_back(std::log2(std::fabs(d1 / d2)));
        }
    }
    return rep;
}

}  // namespace inflow

#endif
