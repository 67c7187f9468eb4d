#include "burgers3d/solver.hpp"

#include "burgers3d/spectral_ops.hpp"
#include "burgers3d/version.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

namespace burgers3d {

namespace {

constexpr double kVolume = 8.0 * std::numbers::pi * std::numbers::pi * std::numbers::pi;

/// All spectral sums a recording instant needs, in one pass over the box.
struct NormBundle {
    double l2 = 0, semi_half = 0, semi_one = 0, semi_three_half = 0, semi_two_sq = 0;
};

NormBundle norm_bundle(const SpectralField& f) {
    const int n = f.resolution();
    double s0 = 0, s1 = 0, s2 = 0, s3 = 0, s4 = 0;
    for (int c = 0; c < SpectralField::kComponents; ++c)
        for (int k1 = -f.extent(0); k1 <= f.extent(0); ++k1)
            for (int k2 = -f.extent(1); k2 <= f.extent(1); ++k2)
                for (int k3 = -f.extent(2); k3 <= f.extent(2); ++k3) {
                    const double a = std::norm(f.at(c, k1 + n, k2 + n, k3 + n));
                    const double nsq = static_cast<double>(WaveVector{k1, k2, k3}.norm_sq());
                    const double q = std::sqrt(nsq);
                    s0 += a;
                    s1 += q * a;
                    s2 += nsq * a;
                    s3 += nsq * q * a;
                    s4 += nsq * nsq * a;
                }
    NormBundle b;
    b.l2 = std::sqrt(kVolume * s0);
    b.semi_half = std::sqrt(kVolume * s1);
    b.semi_one = std::sqrt(kVolume * s2);
    b.semi_three_half = std::sqrt(kVolume * s3);
    b.semi_two_sq = kVolume * s4;
    return b;
}

/// Box-aware deep copy: clears dst's previous support, then copies src's box.
void assign_box(SpectralField& dst, const SpectralField& src) {
    const int n = dst.resolution();
    for (int c = 0; c < SpectralField::kComponents; ++c)
        for (int k1 = -dst.extent(0); k1 <= dst.extent(0); ++k1)
            for (int k2 = -dst.extent(1); k2 <= dst.extent(1); ++k2)
                for (int k3 = -dst.extent(2); k3 <= dst.extent(2); ++k3)
                    dst.at(c, k1 + n, k2 + n, k3 + n) = 0.0;
    dst.set_extent(src.extent(0), src.extent(1), src.extent(2));
    for (int c = 0; c < SpectralField::kComponents; ++c)
        for (int k1 = -src.extent(0); k1 <= src.extent(0); ++k1)
            for (int k2 = -src.extent(1); k2 <= src.extent(1); ++k2)
                for (int k3 = -src.extent(2); k3 <= src.extent(2); ++k3)
                    dst.at(c, k1 + n, k2 + n, k3 + n) = src.at(c, k1 + n, k2 + n, k3 + n);
}

/// Zero the modes outside the Euclidean ball |k| <= n_ball, in place.
void project_in_place(SpectralField& f, int n_ball) {
    const int n = f.resolution();
    const long long r2 = static_cast<long long>(n_ball) * n_ball;
    for (int c = 0; c < SpectralField::kComponents; ++c)
        for (int k1 = -f.extent(0); k1 <= f.extent(0); ++k1)
            for (int k2 = -f.extent(1); k2 <= f.extent(1); ++k2)
                for (int k3 = -f.extent(2); k3 <= f.extent(2); ++k3)
                    if (WaveVector{k1, k2, k3}.norm_sq() > r2) f.at(c, k1 + n, k2 + n, k3 + n) = 0.0;
    f.set_extent(std::min(f.extent(0), n_ball), std::min(f.extent(1), n_ball),
                 std::min(f.extent(2), n_ball));
}

/// y += a * nu * Laplace(x) = y - a*nu*|k|^2 x over x's box.
void add_scaled_laplacian(SpectralField& y, const SpectralField& x, double a_nu) {
    const int n = y.resolution();
    for (int c = 0; c < SpectralField::kComponents; ++c)
        for (int k1 = -x.extent(0); k1 <= x.extent(0); ++k1)
            for (int k2 = -x.extent(1); k2 <= x.extent(1); ++k2)
                for (int k3 = -x.extent(2); k3 <= x.extent(2); ++k3) {
                    const double nsq = static_cast<double>(WaveVector{k1, k2, k3}.norm_sq());
                    y.at(c, k1 + n, k2 + n, k3 + n) -= a_nu * nsq * x.at(c, k1 + n, k2 + n, k3 + n);
                }
    y.set_extent(std::max(y.extent(0), x.extent(0)), std::max(y.extent(1), x.extent(1)),
                 std::max(y.extent(2), x.extent(2)));
}

std::size_t path_index_for(const NoisePath& path, double t, const char* who) {
    const double ratio = t / path.dt;
    const auto idx = static_cast<long long>(std::llround(ratio));
    if (idx < 0 || static_cast<std::size_t>(idx) >= path.times.size() ||
        std::fabs(idx * path.dt - t) > 1e-9 * std::max(1.0, std::fabs(t)))
        throw ConfigError(std::string(who) + ": time does not lie on the path grid");
    return static_cast<std::size_t>(idx);
}

NoisePath align_path(const NoisePath& path, const SolverConfig& cfg) {
    if (path.times.size() < 2) throw ConfigError("integrate: path is empty");
    const double ratio = path.dt / cfg.dt;
    const long factor = std::lround(ratio);
    if (factor < 1 || std::fabs(factor - ratio) > 1e-9)
        throw ConfigError("integrate: path spacing must be an integer multiple of cfg.dt");
    NoisePath aligned = factor == 1 ? path : refine_path(path, static_cast<int>(factor));
    if (aligned.horizon() + 1e-12 < cfg.horizon)
        throw ConfigError("integrate: path horizon shorter than cfg horizon");
    return aligned;
}

/// Workspace-reusing core of the integrating-factor Heun step.
class TransformedStepper {
  public:
    explicit TransformedStepper(const SolverConfig& cfg)
        : cfg_(cfg), stage_(cfg.grid.n), pred_(cfg.grid.n) {}

    /// Advances v in place from t to t+dt; returns the nonlinear evaluation
    /// count performed.
    int step(SpectralField& v, double alpha0_inv, double alpha1_inv) {
        const double dt = cfg_.dt;
        int evals = 0;
        if (cfg_.convective_enabled) {
            convective_term_into(v, cfg_.grid, stage_);
            project_in_place(stage_, cfg_.effective_projection());
            scale_in_place(stage_, -alpha0_inv);
            ++evals;
        } else {
            clear_support(stage_);
        }
        assign_box(pred_, v);
        add_scaled(pred_, stage_, dt);
        apply_heat_multiplier(pred_, cfg_.nu * dt);
        add_scaled(v, stage_, 0.5 * dt);
        apply_heat_multiplier(v, cfg_.nu * dt);
        if (cfg_.convective_enabled) {
            convective_term_into(pred_, cfg_.grid, stage_);
            project_in_place(stage_, cfg_.effective_projection());
            scale_in_place(stage_, -alpha1_inv);
            ++evals;
            add_scaled(v, stage_, 0.5 * dt);
        }
        return evals;
    }

  private:
    SolverConfig cfg_;
    SpectralField stage_;
    SpectralField pred_;
};

struct Recorder {
    TrajectoryRecord record;
    double diss = 0.0;

    void push(double t, double alpha, const SpectralField& state, const GridSpec& grid) {
        const NormBundle b = norm_bundle(state);
        record.times.push_back(t);
        record.alpha.push_back(alpha);
        record.linf.push_back(grid_sup_norm(state, grid));
        record.semi_half.push_back(b.semi_half);
        record.semi_one.push_back(b.semi_one);
        record.semi_three_half.push_back(b.semi_three_half);
        record.l2.push_back(b.l2);
        record.sobolev_one.push_back(b.l2 + b.semi_one);
        record.mean.push_back(spatial_mean(state));
        record.dissipation.push_back(diss);
    }
};

nlohmann::json initial_metadata(const SpectralField& state, const SolverConfig& cfg,
                                std::uint64_t seed, const char* kind, const char* route) {
    const NormBundle b = norm_bundle(state);
    nlohmann::json meta;
    meta["format"] = "burgers3d-trajectory";
    meta["version"] = kVersion;
    meta["kind"] = kind;
    meta["route"] = route;
    meta["seed"] = seed;
    meta["config"] = cfg.to_json();
    meta["u0"] = {{"l1", grid_lp_norm(state, cfg.grid, 1.0)},
                  {"linf", grid_sup_norm(state, cfg.grid)},
                  {"l2", b.l2},
                  {"h1_semi", b.semi_one},
                  {"h32_semi", b.semi_three_half},
                  {"sobolev_one", b.l2 + b.semi_one}};
    return meta;
}

} // namespace

long SolverConfig::step_count() const {
    const long steps = std::lround(horizon / dt);
    if (steps < 1 || std::fabs(steps * dt - horizon) > 1e-9 * std::max(1.0, horizon))
        throw ConfigError("SolverConfig: dt must divide the horizon");
    return steps;
}

void SolverConfig::validate() const {
    grid.validate();
    if (!(nu > 0.0)) throw ConfigError("SolverConfig: viscosity must be positive");
    if (!(dt > 0.0) || !(horizon > 0.0) || dt > horizon + 1e-15)
        throw ConfigError("SolverConfig: need 0 < dt <= T");
    if (noise.b < 0.0) throw ConfigError("SolverConfig: noise intensity must be nonnegative");
    if (record_every < 1) throw ConfigError("SolverConfig: record_every must be positive");
    if (!(blowup_threshold > 0.0)) throw ConfigError("SolverConfig: blowup threshold must be positive");
    step_count();
}

nlohmann::json SolverConfig::to_json() const {
    return {{"n", grid.n},
            {"m", grid.m},
            {"dealias", grid.dealias == DealiasRule::two_thirds ? "two_thirds" : "none"},
            {"nu", nu},
            {"T", horizon},
            {"dt", dt},
            {"b", noise.b},
            {"seed", noise.seed},
            {"projection_n", projection_n},
            {"convective", convective_enabled},
            {"blowup_threshold", blowup_threshold},
            {"record_every", record_every}};
}

SolverConfig SolverConfig::from_json(const nlohmann::json& j) {
    SolverConfig cfg;
    cfg.grid.n = j.at("n").get<int>();
    cfg.grid.m = j.at("m").get<int>();
    cfg.grid.dealias =
        j.at("dealias").get<std::string>() == "none" ? DealiasRule::none : DealiasRule::two_thirds;
    cfg.nu = j.at("nu").get<double>();
    cfg.horizon = j.at("T").get<double>();
    cfg.dt = j.at("dt").get<double>();
    cfg.noise.b = j.at("b").get<double>();
    cfg.noise.seed = j.at("seed").get<std::uint64_t>();
    cfg.projection_n = j.value("projection_n", -1);
    cfg.convective_enabled = j.value("convective", true);
    cfg.blowup_threshold = j.value("blowup_threshold", 1e6);
    cfg.record_every = j.value("record_every", 1);
    return cfg;
}

void TrajectoryRecord::validate_columns() const {
    auto check = [&](const std::vector<double>& col) {
        for (double x : col)
            if (!std::isfinite(x)) throw DataError("TrajectoryRecord: non-finite value");
    };
    check(times);
    check(alpha);
    check(linf);
    check(semi_half);
    check(semi_one);
    check(semi_three_half);
    check(l2);
    check(sobolev_one);
    check(dissipation);
    for (std::size_t i = 1; i < dissipation.size(); ++i)
        if (dissipation[i] + 1e-15 < dissipation[i - 1])
            throw DataError("TrajectoryRecord: dissipation integral decreased");
}

SpectralField step_random_pde(const SpectralField& v, double t, double dt, const NoisePath& path,
                              const SolverConfig& cfg) {
    cfg.validate();
    if (std::fabs(dt - cfg.dt) > 1e-12 * std::max(1.0, cfg.dt))
        throw ConfigError("step_random_pde: dt must match cfg.dt");
    const std::size_t i0 = path_index_for(path, t, "step_random_pde");
    const std::size_t i1 = path_index_for(path, t + dt, "step_random_pde");
    SpectralField next = v;
    TransformedStepper stepper(cfg);
    stepper.step(next, 1.0 / path.alpha[i0], 1.0 / path.alpha[i1]);
    const double h1 = seminorm(next, 1.0);
    if (!std::isfinite(h1))
        throw NumericalFailure("step_random_pde: non-finite state", t);
    if (h1 > cfg.blowup_threshold) throw BlowupSignal(t + dt, h1);
    return next;
}

TrajectoryRecord integrate(const SpectralField& v0, const NoisePath& path,
                           const SolverConfig& cfg) {
    cfg.validate();
    const NoisePath drive = align_path(path, cfg);
    SpectralField v = galerkin_project(v0, cfg.effective_projection());
    v.enforce_hermitian();
    if (sobolev_norm(v, 1.0) >= cfg.blowup_threshold)
        throw ConfigError("integrate: blowup threshold must exceed the initial H^1 norm");

    Recorder rec;
    rec.record.kind = "v";
    rec.record.metadata = initial_metadata(v, cfg, drive.seed, "v", "transformed");
    rec.record.stats.dt = cfg.dt;

    TransformedStepper stepper(cfg);
    const long steps = cfg.step_count();
    double prev_diss_rate = norm_bundle(v).semi_two_sq;
    rec.push(0.0, 1.0, v, cfg.grid);

    for (long m = 0; m < steps; ++m) {
        const double t1 = (m + 1 == steps) ? cfg.horizon : (m + 1) * cfg.dt;
        try {
            rec.record.stats.nonlinear_evals +=
                stepper.step(v, 1.0 / drive.alpha[m], 1.0 / drive.alpha[m + 1]);
        } catch (const NumericalFailure& e) {
            throw IntegrationFailure(e.what(), m * cfg.dt, rec.record);
        }
        const NormBundle b = norm_bundle(v);
        rec.diss += 0.5 * cfg.dt * (prev_diss_rate + b.semi_two_sq);
        prev_diss_rate = b.semi_two_sq;
        if (!std::isfinite(b.semi_one))
            throw IntegrationFailure("integrate: non-finite coefficient", m * cfg.dt, rec.record);
        if (b.semi_one > cfg.blowup_threshold) {
            rec.push(t1, drive.alpha[m + 1], v, cfg.grid);
            rec.record.status = RunStatus::aborted_blowup;
            break;
        }
        if ((m + 1) % cfg.record_every == 0 || m + 1 == steps)
            rec.push(t1, drive.alpha[m + 1], v, cfg.grid);
    }
    rec.record.final_state = v;
    for (std::size_t i = 0; i < rec.record.size(); ++i)
        rec.record.stats.max_cfl =
            std::max(rec.record.stats.max_cfl, rec.record.linf[i] / rec.record.alpha[i] *
                                                   cfg.grid.n * cfg.dt);
    rec.record.validate_columns();
    return rec.record;
}

TrajectoryRecord recover_u(const TrajectoryRecord& traj_v, const NoisePath& path) {
    for (std::size_t i = 0; i < traj_v.size(); ++i) {
        const std::size_t pi = path_index_for(path, traj_v.times[i], "recover_u");
        if (std::fabs(path.alpha[pi] - traj_v.alpha[i]) >
            1e-9 * std::max(1.0, std::fabs(traj_v.alpha[i])))
            throw ConfigError("recover_u: path does not match the recorded alpha values");
    }
    return recover_u(traj_v);
}

TrajectoryRecord recover_u(const TrajectoryRecord& traj_v) {
    TrajectoryRecord out = traj_v;
    out.kind = "u";
    if (!out.metadata.is_null()) out.metadata["kind"] = "u";
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double ainv = 1.0 / out.alpha[i];
        out.linf[i] *= ainv;
        out.semi_half[i] *= ainv;
        out.semi_one[i] *= ainv;
        out.semi_three_half[i] *= ainv;
        out.l2[i] *= ainv;
        out.sobolev_one[i] *= ainv;
        for (double& m : out.mean[i]) m *= ainv;
    }
    // d/dt of the u-dissipation is alpha^{-2} times the recorded rate;
    // re-accumulate with midpoint alpha between recorded instants.
    for (std::size_t i = 1; i < out.size(); ++i) {
        const double dv = traj_v.dissipation[i] - traj_v.dissipation[i - 1];
        const double amid = 0.5 * (traj_v.alpha[i - 1] + traj_v.alpha[i]);
        out.dissipation[i] = out.dissipation[i - 1] + dv / (amid * amid);
    }
    if (!out.times.empty() && !out.final_state.empty())
        out.final_state = recover_u(traj_v.final_state, traj_v.alpha.back());
    return out;
}

SpectralField recover_u(const SpectralField& v, double alpha_at_t) {
    SpectralField u = v;
    scale_in_place(u, 1.0 / alpha_at_t);
    return u;
}

TrajectoryRecord integrate_direct_stratonovich(const SpectralField& u0, const NoisePath& path,
                                               const SolverConfig& cfg) {
    cfg.validate();
    const NoisePath drive = align_path(path, cfg);
    const int n_ball = cfg.effective_projection();
    SpectralField u = galerkin_project(u0, n_ball);
    u.enforce_hermitian();
    if (sobolev_norm(u, 1.0) >= cfg.blowup_threshold)
        throw ConfigError("integrate_direct_stratonovich: blowup threshold too low");

    Recorder rec;
    rec.record.kind = "u";
    rec.record.metadata = initial_metadata(u, cfg, drive.seed, "u", "direct_stratonovich");
    rec.record.stats.dt = cfg.dt;

    SpectralField stage(cfg.grid.n), f1(cfg.grid.n), pred(cfg.grid.n);
    auto drift_into = [&](const SpectralField& state, SpectralField& out) {
        if (cfg.convective_enabled) {
            convective_term_into(state, cfg.grid, out);
            project_in_place(out, n_ball);
            scale_in_place(out, -1.0);
            rec.record.stats.nonlinear_evals += 1;
        } else {
            clear_support(out);
        }
        add_scaled_laplacian(out, state, cfg.nu);
    };

    const long steps = cfg.step_count();
    double prev_diss_rate = norm_bundle(u).semi_two_sq;
    rec.push(0.0, 1.0, u, cfg.grid);
    for (long m = 0; m < steps; ++m) {
        const double t1 = (m + 1 == steps) ? cfg.horizon : (m + 1) * cfg.dt;
        const double dw = drive.w[m + 1] - drive.w[m];
        drift_into(u, stage);
        assign_box(f1, stage);
        scale_in_place(f1, cfg.dt);
        add_scaled(f1, u, dw);
        assign_box(pred, u);
        add_scaled(pred, f1, 1.0);
        drift_into(pred, stage);
        add_scaled(u, f1, 0.5);
        add_scaled(u, stage, 0.5 * cfg.dt);
        add_scaled(u, pred, 0.5 * dw);

        const NormBundle b = norm_bundle(u);
        rec.diss += 0.5 * cfg.dt * (prev_diss_rate + b.semi_two_sq);
        prev_diss_rate = b.semi_two_sq;
        if (!std::isfinite(b.semi_one))
            throw IntegrationFailure("direct route: non-finite coefficient", m * cfg.dt,
                                     rec.record);
        if (b.semi_one > cfg.blowup_threshold) {
            rec.push(t1, drive.alpha[m + 1], u, cfg.grid);
            rec.record.status = RunStatus::aborted_blowup;
            break;
        }
        if ((m + 1) % cfg.record_every == 0 || m + 1 == steps)
            rec.push(t1, drive.alpha[m + 1], u, cfg.grid);
    }
    rec.record.final_state = u;
    for (std::size_t i = 0; i < rec.record.size(); ++i)
        rec.record.stats.max_cfl = std::max(
            rec.record.stats.max_cfl, rec.record.linf[i] * cfg.grid.n * cfg.dt);
    rec.record.validate_columns();
    return rec.record;
}

SpectralField heat_oracle(const SpectralField& v0, double t, double nu) {
    if (t < 0.0) throw std::domain_error("heat_oracle: t must be nonnegative");
    SpectralField out = v0;
    apply_heat_multiplier(out, nu * t);
    return out;
}

void write_trajectory_csv(const TrajectoryRecord& record, std::ostream& out) {
    out << "# " << record.metadata.dump() << "\n";
    out << "t,alpha,linf_v,semi_half,semi_one,semi_three_half,l2,h1,mean_1,mean_2,mean_3,"
           "dissipation\n";
    char line[512];
    for (std::size_t i = 0; i < record.size(); ++i) {
        std::snprintf(line, sizeof line,
                      "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                      record.times[i], record.alpha[i], record.linf[i], record.semi_half[i],
                      record.semi_one[i], record.semi_three_half[i], record.l2[i],
                      record.sobolev_one[i], record.mean[i][0], record.mean[i][1],
                      record.mean[i][2], record.dissipation[i]);
        out << line;
    }
    out << "# status=" << (record.status == RunStatus::completed ? "completed" : "aborted_blowup")
        << "\n";
}

void write_trajectory_csv_file(const TrajectoryRecord& record, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open for writing: " + path);
    write_trajectory_csv(record, out);
}

TrajectoryRecord read_trajectory_csv(std::istream& in) {
    TrajectoryRecord rec;
    std::string line;
    long line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto payload = line.substr(1);
            const auto start = payload.find_first_not_of(" \t");
            if (start == std::string::npos) continue;
            const auto body = payload.substr(start);
            if (body.rfind("status=", 0) == 0) {
                rec.status = body == "status=aborted_blowup" ? RunStatus::aborted_blowup
                                                             : RunStatus::completed;
            } else if (body.front() == '{') {
                rec.metadata = nlohmann::json::parse(body, nullptr, false);
                if (rec.metadata.is_discarded())
                    throw DataError("trajectory CSV line " + std::to_string(line_no) +
                                    ": bad metadata JSON");
                rec.kind = rec.metadata.value("kind", "v");
            }
            continue;
        }
        if (!header_seen) {
            if (line.rfind("t,alpha,linf_v", 0) != 0)
                throw DataError("trajectory CSV line " + std::to_string(line_no) +
                                ": unexpected header");
            header_seen = true;
            continue;
        }
        std::array<double, 12> vals{};
        std::size_t pos = 0;
        for (int col = 0; col < 12; ++col) {
            const std::size_t next = line.find(',', pos);
            const std::string tok = line.substr(pos, next == std::string::npos
                                                         ? std::string::npos
                                                         : next - pos);
            try {
                vals[col] = std::stod(tok);
            } catch (const std::exception&) {
                throw DataError("trajectory CSV line " + std::to_string(line_no) + ": bad field '" +
                                tok + "'");
            }
            if (next == std::string::npos) {
                if (col != 11)
                    throw DataError("trajectory CSV line " + std::to_string(line_no) +
                                    ": expected 12 columns");
                break;
            }
            pos = next + 1;
        }
        rec.times.push_back(vals[0]);
        rec.alpha.push_back(vals[1]);
        rec.linf.push_back(vals[2]);
        rec.semi_half.push_back(vals[3]);
        rec.semi_one.push_back(vals[4]);
        rec.semi_three_half.push_back(vals[5]);
        rec.l2.push_back(vals[6]);
        rec.sobolev_one.push_back(vals[7]);
        rec.mean.push_back({vals[8], vals[9], vals[10]});
        rec.dissipation.push_back(vals[11]);
    }
    if (!header_seen) throw DataError("trajectory CSV: no header found");
    return rec;
}

TrajectoryRecord read_trajectory_csv_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open for reading: " + path);
    return read_trajectory_csv(in);
}

} // namespace burgers3d
