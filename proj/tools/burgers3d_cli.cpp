// Command-line front end: simulate / ensemble / verify / oracle.
//
// Exit codes: 0 success, 1 runtime error, 2 blow-up abort (simulate),
// 3 a bounded moment estimate failed its gate (ensemble), 4 a gating
// verification check failed (verify), 64 usage/config errors.

#include "burgers3d/cole_hopf.hpp"
#include "burgers3d/moments.hpp"
#include "burgers3d/solver.hpp"
#include "burgers3d/spectral_ops.hpp"
#include "burgers3d/verify.hpp"
#include "burgers3d/version.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cfloat>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace burgers3d;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitBlowup = 2;
constexpr int kExitEstimateFail = 3;
constexpr int kExitVerifyFail = 4;
constexpr int kExitUsage = 64;

struct SolverOptions {
    int n = 16;
    int m = 0; // 0: derive a fast alias-free size from n
    double nu = 1.0;
    double horizon = 1.0;
    double dt = 1e-3;
    double b = 0.0;
    std::uint64_t seed = 0;
    int projection_n = -1;
    bool no_convective = false;
    double blowup_threshold = 1e6;
    int record_every = 1;
    std::string dealias = "two_thirds";

    std::string ic_family = "sine_shear";
    double ic_amplitude = 1.0;
    double ic_decay_r = 4.0;
    std::uint64_t ic_seed = 0;
    std::vector<int> ic_mode = {1, 0, 0};
    int ic_component = 0;

    void attach(CLI::App* cmd) {
        cmd->add_option("--n", n, "Spectral truncation N (max |k|_inf)")->capture_default_str();
        cmd->add_option("--m", m, "Physical grid points per axis (0 = auto)")
            ->capture_default_str();
        cmd->add_option("--nu", nu, "Viscosity")->capture_default_str();
        cmd->add_option("--T", horizon, "Time horizon")->capture_default_str();
        cmd->add_option("--dt", dt, "Time step")->capture_default_str();
        cmd->add_option("--b", b, "Noise intensity sum b_k^2")->capture_default_str();
        cmd->add_option("--seed", seed, "Driving-path seed")->capture_default_str();
        cmd->add_option("--projection-n", projection_n, "Galerkin ball radius (-1 = N)")
            ->capture_default_str();
        cmd->add_flag("--no-convective", no_convective, "Disable the nonlinear term");
        cmd->add_option("--blowup-threshold", blowup_threshold, "H1 seminorm abort level")
            ->capture_default_str();
        cmd->add_option("--record-every", record_every, "Record every k-th step")
            ->capture_default_str();
        cmd->add_option("--dealias", dealias, "Dealiasing rule: two_thirds|none")
            ->capture_default_str();
        cmd->add_option("--ic", ic_family, "Initial condition: sine_shear|single_mode|random_smooth")
            ->capture_default_str();
        cmd->add_option("--amplitude", ic_amplitude, "Initial-condition amplitude")
            ->capture_default_str();
        cmd->add_option("--decay-r", ic_decay_r, "random_smooth spectral decay exponent")
            ->capture_default_str();
        cmd->add_option("--ic-seed", ic_seed, "random_smooth seed")->capture_default_str();
        cmd->add_option("--mode", ic_mode, "single_mode wave vector k1 k2 k3")
            ->expected(3)
            ->capture_default_str();
        cmd->add_option("--component", ic_component, "single_mode velocity component (0..2)")
            ->capture_default_str();
    }

    SolverConfig solver_config() const {
        SolverConfig cfg;
        const DealiasRule rule = dealias == "none" ? DealiasRule::none : DealiasRule::two_thirds;
        if (dealias != "none" && dealias != "two_thirds")
            throw ConfigError("unknown dealias rule: " + dealias);
        cfg.grid = m > 0 ? GridSpec{n, m, rule} : GridSpec::standard(n, rule);
        cfg.nu = nu;
        cfg.horizon = horizon;
        cfg.dt = dt;
        cfg.noise = {b, seed};
        cfg.projection_n = projection_n;
        cfg.convective_enabled = !no_convective;
        cfg.blowup_threshold = blowup_threshold;
        cfg.record_every = record_every;
        cfg.validate();
        return cfg;
    }

    InitialCondition initial_condition() const {
        InitialCondition ic;
        ic.family = parse_initial_family(ic_family);
        ic.amplitude = ic_amplitude;
        ic.decay_r = ic_decay_r;
        ic.seed = ic_seed;
        ic.mode = {ic_mode[0], ic_mode[1], ic_mode[2]};
        ic.component = ic_component;
        return ic;
    }

    nlohmann::json ic_json() const {
        return {{"family", ic_family},     {"amplitude", ic_amplitude},
                {"decay_r", ic_decay_r},   {"seed", ic_seed},
                {"mode", ic_mode},         {"component", ic_component}};
    }
};

int thread_count(int requested) {
    if (const char* env = std::getenv("BURGERS3D_SINGLE_THREAD"); env && env[0] == '1') return 1;
    return std::max(1, requested);
}

void write_manifest(const fs::path& dir, const std::string& command,
                    const nlohmann::json& extra) {
    nlohmann::json manifest{{"tool", "burgers3d"},
                            {"version", kVersion},
                            {"command", command},
                            {"float_eval_method", FLT_EVAL_METHOD},
                            {"extra", extra}};
    std::ofstream out(dir / "manifest.json");
    out << manifest.dump(2) << "\n";
}

void write_config_snapshot(const CLI::App& app, const fs::path& dir) {
    std::ofstream out(dir / "config.toml");
    out << app.config_to_str(true, false);
}

fs::path prepare_out_dir(const std::string& out) {
    fs::path dir = out.empty() ? fs::path(".") : fs::path(out);
    fs::create_directories(dir);
    return dir;
}

// ---------------------------------------------------------------- simulate

int run_simulate(const CLI::App& app, const SolverOptions& opts, const std::string& out,
                 const std::string& route) {
    const SolverConfig cfg = opts.solver_config();
    const SpectralField v0 = opts.initial_condition().build(cfg.grid);
    const NoisePath path = sample_path(cfg.noise, cfg.dt, cfg.horizon);
    const fs::path dir = prepare_out_dir(out);

    TrajectoryRecord record = route == "direct" ? integrate_direct_stratonovich(v0, path, cfg)
                                                : integrate(v0, path, cfg);
    record.metadata["ic"] = opts.ic_json();
    write_trajectory_csv_file(record, (dir / "trajectory.csv").string());
    {
        std::ofstream pcsv(dir / "path.csv");
        write_path_csv(path, pcsv);
    }
    write_path_binary_file(path, (dir / "path.b3dw").string());
    write_config_snapshot(app, dir);
    write_manifest(dir, "simulate",
                   {{"route", route},
                    {"status", record.status == RunStatus::completed ? "completed"
                                                                     : "aborted_blowup"},
                    {"rows", record.size()},
                    {"max_cfl", record.stats.max_cfl},
                    {"nonlinear_evals", record.stats.nonlinear_evals}});
    std::cout << "wrote " << (dir / "trajectory.csv").string() << " (" << record.size()
              << " rows, status "
              << (record.status == RunStatus::completed ? "completed" : "aborted_blowup")
              << ")\n";
    return record.status == RunStatus::completed ? kExitOk : kExitBlowup;
}

// ---------------------------------------------------------------- ensemble

int run_ensemble(const CLI::App& app, const SolverOptions& opts, const std::string& out,
                 int n_paths, std::uint64_t base_seed, std::vector<double> horizons, double p,
                 double q, double big_q, std::vector<std::string> functionals, int threads,
                 bool csv_flat) {
    EnsembleConfig cfg;
    cfg.solver = opts.solver_config();
    cfg.ic = opts.initial_condition();
    cfg.n_paths = n_paths;
    cfg.base_seed = base_seed;
    cfg.horizons = horizons;
    cfg.p = std::isinf(p) || p < 0 ? std::numeric_limits<double>::infinity() : p;
    cfg.q = q;
    cfg.Q = big_q;
    cfg.threads = thread_count(threads);
    if (functionals.empty() || (functionals.size() == 1 && functionals[0] == "all"))
        functionals = {"sup_lp", "sup_linf", "log_h1", "alpha_sup", "exp_moment"};

    const fs::path dir = prepare_out_dir(out);
    std::ofstream ndjson(dir / "ensemble.ndjson");
    std::ofstream csv;
    if (csv_flat) {
        csv.open(dir / "ensemble.csv");
        csv << "functional,horizon,estimate,stderr,n,median,bound,pass,aborted\n";
    }
    const double horizon = cfg.horizons.empty() ? cfg.solver.horizon : cfg.horizons.back();
    bool gated_failure = false;
    auto emit = [&](const MomentEstimate& est, double t) {
        ndjson << estimate_ndjson_line(est, t) << "\n";
        if (csv_flat) {
            char line[256];
            std::snprintf(line, sizeof line, "%s,%.17g,%.17g,%.17g,%ld,%.17g,%.17g,%d,%d\n",
                          est.functional.c_str(), t, est.value, est.stderr_, est.n, est.median,
                          est.bound.value_or(std::nan("")), est.pass ? 1 : 0, est.aborted);
            csv << line;
        }
        if (est.bound && !est.pass) gated_failure = true;
        std::cout << est.functional << " T=" << t << ": " << est.value << " +- " << est.stderr_
                  << (est.bound ? (est.pass ? "  [pass]" : "  [FAIL]") : "") << "\n";
    };

    for (const std::string& f : functionals) {
        if (f == "sup_lp") {
            emit(estimate_sup_lp_moment(cfg), horizon);
        } else if (f == "sup_linf") {
            emit(estimate_sup_linf_moment(cfg), horizon);
        } else if (f == "log_h1") {
            EnsembleConfig lcfg = cfg;
            if (lcfg.horizons.empty())
                lcfg.horizons = {0.5 * cfg.solver.horizon, cfg.solver.horizon};
            const EnsembleReport rep = estimate_log_h1_moment(lcfg);
            for (std::size_t j = 0; j < rep.estimates.size(); ++j)
                emit(rep.estimates[j], rep.horizons[j]);
            nlohmann::json fit{{"functional", "log_h1_envelope"},
                               {"fit_a", rep.fit_a},
                               {"fit_r", rep.fit_r},
                               {"fit_residual", rep.fit_residual},
                               {"monotone", rep.monotone},
                               {"flagged_non_monotone", rep.flagged_non_monotone}};
            ndjson << fit.dump() << "\n";
            std::cout << "log_h1 envelope: a=" << rep.fit_a << " r=" << rep.fit_r << "\n";
        } else if (f == "alpha_sup") {
            emit(check_alpha_sup_moment(cfg), horizon);
        } else if (f == "exp_moment") {
            emit(check_exp_moment(cfg), horizon);
        } else {
            throw ConfigError("unknown functional: " + f);
        }
    }
    write_config_snapshot(app, dir);
    write_manifest(dir, "ensemble",
                   {{"n_paths", cfg.n_paths}, {"threads", cfg.threads}});
    return gated_failure ? kExitEstimateFail : kExitOk;
}

// ------------------------------------------------------------------ verify

int run_verify(const CLI::App& app, const std::vector<std::string>& traj_files,
               std::vector<std::string> checks, const ToleranceConfig& tol, double eps_time,
               std::optional<double> u0_l1_override, const std::string& out) {
    if (checks.empty() || (checks.size() == 1 && checks[0] == "all"))
        checks = {"seminorm_chain", "max_principle", "mean_drift", "norm_domination", "energy"};

    const fs::path dir = prepare_out_dir(out);
    std::ofstream ndjson(dir / "report.ndjson");
    bool gating_failure = false;

    for (const std::string& file : traj_files) {
        const TrajectoryRecord traj = read_trajectory_csv_file(file);
        traj.validate_columns();
        if (traj.kind != "v")
            throw ConfigError(file + ": verify expects a v-trajectory (transformed variable)");
        const std::uint64_t seed =
            traj.metadata.is_object() && traj.metadata.contains("seed")
                ? traj.metadata["seed"].get<std::uint64_t>()
                : 0;
        double u0_l1 = u0_l1_override.value_or(-1.0);
        if (u0_l1 < 0 && traj.metadata.is_object() && traj.metadata.contains("u0"))
            u0_l1 = traj.metadata["u0"].value("l1", -1.0);

        auto emit = [&](const VerificationReport& rep) {
            ndjson << report_ndjson_line(rep, seed) << "\n";
            if (rep.gating && !rep.pass) gating_failure = true;
            std::cout << file << " " << rep.check << ": " << (rep.pass ? "pass" : "FAIL")
                      << " (worst margin " << rep.worst_margin << ")\n";
        };
        for (const std::string& check : checks) {
            if (check == "seminorm_chain") {
                emit(check_seminorm_chain(traj, tol));
            } else if (check == "max_principle") {
                emit(check_max_principle(traj, tol));
            } else if (check == "mean_drift") {
                emit(check_mean_drift(recover_u(traj), tol));
            } else if (check == "norm_domination") {
                if (u0_l1 < 0)
                    throw ConfigError(file +
                                      ": metadata lacks u0.l1; pass --u0-l1 for norm_domination");
                for (double s : {0.5, 1.0, 1.5}) {
                    VerificationReport rep = check_norm_domination(traj, s, u0_l1, tol);
                    rep.check += s == 0.5 ? "_half" : (s == 1.0 ? "_one" : "_three_half");
                    emit(rep);
                }
            } else if (check == "energy") {
                emit(check_energy_inequality(traj, eps_time, tol));
            } else {
                throw ConfigError("unknown check: " + check);
            }
        }
    }
    write_config_snapshot(app, dir);
    write_manifest(dir, "verify", {{"files", traj_files.size()}});
    return gating_failure ? kExitVerifyFail : kExitOk;
}

// ------------------------------------------------------------------ oracle

int run_oracle(const CLI::App& app, const SolverOptions& opts, const std::string& kind,
               const std::string& out, int checkpoints) {
    const fs::path dir = prepare_out_dir(out);
    std::ofstream csv(dir / "oracle.csv");
    char line[256];

    if (kind == "heat") {
        SolverConfig cfg = opts.solver_config();
        cfg.convective_enabled = false;
        const SpectralField v0 =
            galerkin_project(opts.initial_condition().build(cfg.grid), cfg.effective_projection());
        const NoisePath path = sample_path(cfg.noise, cfg.dt, cfg.horizon);
        csv << "t,max_coeff_err\n";
        SpectralField state = v0;
        double worst = 0.0;
        const long steps = cfg.step_count();
        for (long m = 0; m <= steps; ++m) {
            const double t = std::min(m * cfg.dt, cfg.horizon);
            if (m % cfg.record_every == 0 || m == steps) {
                const SpectralField exact = heat_oracle(v0, t, cfg.nu);
                SpectralField diff = state;
                add_scaled(diff, exact, -1.0);
                const double err = diff.max_abs_coeff();
                worst = std::max(worst, err);
                std::snprintf(line, sizeof line, "%.17g,%.17g\n", t, err);
                csv << line;
            }
            if (m < steps) state = step_random_pde(state, m * cfg.dt, cfg.dt, path, cfg);
        }
        std::cout << "heat oracle: max coefficient error " << worst << "\n";
    } else if (kind == "cole_hopf") {
        const SolverConfig cfg = opts.solver_config();
        if (cfg.noise.b != 0.0)
            throw ConfigError("oracle cole_hopf requires b=0 (deterministic equation)");
        const SpectralField v0 = opts.initial_condition().build(cfg.grid);
        if (v0.extent(1) != 0 || v0.extent(2) != 0)
            throw ConfigError("oracle cole_hopf requires x1-only initial data");
        const NoisePath path = sample_path(cfg.noise, cfg.dt, cfg.horizon);
        const std::vector<double> u0 = extract_x1_profile(v0, cfg.grid.m);
        csv << "t,linf_err,rel_linf_err\n";
        SpectralField state = v0;
        double worst_rel = 0.0;
        const long steps = cfg.step_count();
        for (long m = 0; m <= steps; ++m) {
            const double t = std::min(m * cfg.dt, cfg.horizon);
            if (m % cfg.record_every == 0 || m == steps) {
                const auto exact = cole_hopf_oracle_1d(u0, cfg.nu, t);
                const auto numeric = extract_x1_profile(state, cfg.grid.m);
                double err = 0.0, scale = 0.0;
                for (std::size_t j = 0; j < exact.size(); ++j) {
                    err = std::max(err, std::fabs(numeric[j] - exact[j]));
                    scale = std::max(scale, std::fabs(exact[j]));
                }
                const double rel = scale > 0 ? err / scale : err;
                worst_rel = std::max(worst_rel, rel);
                std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g\n", t, err, rel);
                csv << line;
            }
            if (m < steps) state = step_random_pde(state, m * cfg.dt, cfg.dt, path, cfg);
        }
        std::cout << "cole_hopf oracle: max relative sup-norm error " << worst_rel << "\n";
    } else if (kind == "route_compare") {
        const SolverConfig cfg = opts.solver_config();
        const SpectralField u0 = opts.initial_condition().build(cfg.grid);
        const NoisePath coarse = sample_path(cfg.noise, cfg.dt, cfg.horizon);
        const NoisePath fine = refine_path(coarse, 2);
        csv << "t,gap_dt,gap_half_dt,ratio\n";
        for (int cp = 1; cp <= checkpoints; ++cp) {
            const double t = cfg.horizon * cp / checkpoints;
            auto gap_at = [&](const NoisePath& drive, double dt) {
                SolverConfig sub = cfg;
                sub.horizon = t;
                sub.dt = dt;
                sub.record_every = 1000000;
                const TrajectoryRecord direct = integrate_direct_stratonovich(u0, drive, sub);
                const TrajectoryRecord transformed = integrate(u0, drive, sub);
                SpectralField diff =
                    recover_u(transformed.final_state, drive.alpha[static_cast<std::size_t>(
                                                           std::llround(t / drive.dt))]);
                add_scaled(diff, direct.final_state, -1.0);
                return l2_norm(diff);
            };
            const double g1 = gap_at(coarse, cfg.dt);
            const double g2 = gap_at(fine, cfg.dt / 2.0);
            std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g\n", t, g1, g2,
                          g2 > 0 ? g1 / g2 : std::nan(""));
            csv << line;
            std::cout << "t=" << t << " gap(dt)=" << g1 << " gap(dt/2)=" << g2 << "\n";
        }
    } else {
        throw ConfigError("unknown oracle kind: " + kind);
    }
    write_config_snapshot(app, dir);
    write_manifest(dir, "oracle", {{"kind", kind}});
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"3D stochastic Burgers spectral laboratory"};
    app.set_config("--config", "", "key = value configuration file; flags override");
    app.allow_config_extras(CLI::config_extras_mode::error);
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    SolverOptions sim_opts;
    std::string sim_out = "run";
    std::string sim_route = "transformed";
    auto* sim = app.add_subcommand("simulate", "Integrate one trajectory and record diagnostics");
    sim_opts.attach(sim);
    sim->add_option("--out", sim_out, "Output directory")->capture_default_str();
    sim->add_option("--route", sim_route, "Integration route: transformed|direct")
        ->capture_default_str();

    SolverOptions ens_opts;
    std::string ens_out = "ensemble";
    int ens_paths = 100;
    std::uint64_t ens_base_seed = 0;
    std::vector<double> ens_horizons;
    double ens_p = 2.0, ens_q = 1.0, ens_Q = 2.0;
    std::vector<std::string> ens_functionals;
    int ens_threads = 1;
    bool ens_csv = false;
    auto* ens = app.add_subcommand("ensemble", "Monte Carlo moment estimates over seeds");
    ens_opts.attach(ens);
    ens->add_option("--out", ens_out, "Output directory")->capture_default_str();
    ens->add_option("--n-paths", ens_paths, "Number of sample paths")->capture_default_str();
    ens->add_option("--base-seed", ens_base_seed, "Base seed deriving all path seeds")
        ->capture_default_str();
    ens->add_option("--horizons", ens_horizons, "Ascending list of horizons");
    ens->add_option("--p", ens_p, "L^p order (2 or inf; negative means inf)")
        ->capture_default_str();
    ens->add_option("--q", ens_q, "Moment order")->capture_default_str();
    ens->add_option("--Q", ens_Q, "alpha moment order (> 1)")->capture_default_str();
    ens->add_option("--functional", ens_functionals,
                    "sup_lp|sup_linf|log_h1|alpha_sup|exp_moment|all (repeatable)");
    ens->add_option("--threads", ens_threads, "Worker threads")->capture_default_str();
    ens->add_flag("--csv", ens_csv, "Also write a flattened CSV");

    std::vector<std::string> ver_files;
    std::vector<std::string> ver_checks;
    ToleranceConfig ver_tol;
    double ver_eps_time = 0.0;
    double ver_u0_l1 = -1.0;
    std::string ver_out = "verify";
    auto* ver = app.add_subcommand("verify", "Run inequality checks on recorded trajectories");
    ver->add_option("--traj", ver_files, "Trajectory CSV files (v-records)")
        ->required()
        ->expected(-1);
    ver->add_option("--checks", ver_checks,
                    "seminorm_chain|max_principle|mean_drift|norm_domination|energy|all");
    ver->add_option("--rel-tol", ver_tol.rel_tol, "Exact-constant relative tolerance")
        ->capture_default_str();
    ver->add_option("--slack", ver_tol.max_principle_slack, "Max-principle slack")
        ->capture_default_str();
    ver->add_option("--fitted-c-cap", ver_tol.fitted_c_cap, "Energy-inequality constant cap")
        ->capture_default_str();
    ver->add_option("--eps-time", ver_eps_time, "Energy-inequality epsilon time")
        ->capture_default_str();
    ver->add_option("--u0-l1", ver_u0_l1, "Override |u0|_1 when metadata lacks it");
    ver->add_option("--out", ver_out, "Output directory")->capture_default_str();

    SolverOptions ora_opts;
    std::string ora_kind = "heat";
    std::string ora_out = "oracle";
    int ora_checkpoints = 5;
    auto* ora = app.add_subcommand("oracle", "Compare the solver against closed-form references");
    ora_opts.attach(ora);
    ora->add_option("--kind", ora_kind, "heat|cole_hopf|route_compare")->capture_default_str();
    ora->add_option("--out", ora_out, "Output directory")->capture_default_str();
    ora->add_option("--checkpoints", ora_checkpoints, "route_compare comparison instants")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (sim->parsed()) return run_simulate(app, sim_opts, sim_out, sim_route);
        if (ens->parsed())
            return run_ensemble(app, ens_opts, ens_out, ens_paths, ens_base_seed, ens_horizons,
                                ens_p, ens_q, ens_Q, ens_functionals, ens_threads, ens_csv);
        if (ver->parsed()) {
            std::optional<double> u0_l1;
            if (ver_u0_l1 >= 0) u0_l1 = ver_u0_l1;
            return run_verify(app, ver_files, ver_checks, ver_tol, ver_eps_time, u0_l1, ver_out);
        }
        if (ora->parsed()) return run_oracle(app, ora_opts, ora_kind, ora_out, ora_checkpoints);
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::domain_error& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitUsage;
}
