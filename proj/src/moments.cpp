#include "burgers3d/moments.hpp"

#include "burgers3d/rng.hpp"
#include "burgers3d/spectral_ops.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <thread>

namespace burgers3d {

namespace {

struct Accumulator {
    double mean = 0.0, stderr_ = 0.0, median = 0.0;
    long n = 0;
};

/// Sequential fold in path order (pinned reduction order).
Accumulator reduce(const std::vector<double>& values) {
    Accumulator acc;
    acc.n = static_cast<long>(values.size());
    if (values.empty()) return acc;
    double sum = 0.0;
    for (double v : values) sum += v;
    acc.mean = sum / static_cast<double>(acc.n);
    double ss = 0.0;
    for (double v : values) ss += (v - acc.mean) * (v - acc.mean);
    const double sample_var = acc.n > 1 ? ss / static_cast<double>(acc.n - 1) : 0.0;
    acc.stderr_ = std::sqrt(sample_var / static_cast<double>(acc.n));
    std::vector<double> sorted = values;
    std::sort(sorted.begin(), sorted.end());
    acc.median = acc.n % 2 == 1 ? sorted[acc.n / 2]
                                : 0.5 * (sorted[acc.n / 2 - 1] + sorted[acc.n / 2]);
    return acc;
}

/// Runs fn(i) for i in [0, count) on cfg.threads workers; results land in
/// index order so downstream reductions are thread-count independent.
template <typename Fn>
void for_each_path(int count, int threads, Fn&& fn) {
    if (threads <= 1 || count <= 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    auto worker = [&]() {
        for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
    };
    std::vector<std::thread> pool;
    const int spawn = std::min(threads, count);
    pool.reserve(spawn);
    for (int t = 0; t < spawn; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
}

struct PathOutcome {
    bool aborted = false;
    TrajectoryRecord record;
};

std::vector<PathOutcome> run_ensemble(const EnsembleConfig& cfg, double horizon) {
    SolverConfig solver = cfg.solver;
    solver.horizon = horizon;
    const SpectralField v0 = cfg.ic.build(solver.grid);
    std::vector<PathOutcome> out(cfg.n_paths);
    for_each_path(cfg.n_paths, cfg.threads, [&](int i) {
        NoiseConfig noise = solver.noise;
        noise.seed = cfg.path_seed(i);
        const NoisePath path = sample_path(noise, solver.dt, solver.horizon);
        SolverConfig per_path = solver;
        per_path.noise = noise;
        out[i].record = integrate(v0, path, per_path);
        out[i].aborted = out[i].record.status == RunStatus::aborted_blowup;
    });
    return out;
}

double sup_scaled_column(const TrajectoryRecord& rec, const std::vector<double>& column,
                         double power, double t_max) {
    double sup = 0.0;
    for (std::size_t i = 0; i < rec.size(); ++i) {
        if (rec.times[i] > t_max + 1e-12) break;
        sup = std::max(sup, std::pow(column[i] / rec.alpha[i], power));
    }
    return sup;
}

double max_horizon(const EnsembleConfig& cfg) {
    return cfg.horizons.empty() ? cfg.solver.horizon : cfg.horizons.back();
}

} // namespace

void EnsembleConfig::validate() const {
    if (n_paths < 2) throw ConfigError("EnsembleConfig: n_paths must be at least 2");
    for (std::size_t i = 1; i < horizons.size(); ++i)
        if (horizons[i] <= horizons[i - 1])
            throw ConfigError("EnsembleConfig: horizons must be strictly ascending");
    if (!(q >= 1.0)) throw ConfigError("EnsembleConfig: moment order q must be >= 1");
    if (!(p >= 1.0)) throw ConfigError("EnsembleConfig: L^p order must be >= 1");
    solver.validate();
}

std::uint64_t EnsembleConfig::path_seed(int index) const {
    return splitmix64(base_seed ^ splitmix64(static_cast<std::uint64_t>(index)));
}

nlohmann::json MomentEstimate::to_json() const {
    nlohmann::json j{{"functional", functional}, {"estimate", value},   {"stderr", stderr_},
                     {"n", n},                   {"median", median},    {"semantics", semantics},
                     {"pass", pass},             {"aborted", aborted},  {"params", params}};
    if (bound) {
        j["bound"] = *bound;
        j["bound_source"] = bound_source;
    }
    return j;
}

nlohmann::json EnsembleReport::to_json() const {
    nlohmann::json per_horizon = nlohmann::json::array();
    for (const auto& e : estimates) per_horizon.push_back(e.to_json());
    return {{"horizons", horizons},
            {"estimates", per_horizon},
            {"fit_a", fit_a},
            {"fit_r", fit_r},
            {"fit_residual", fit_residual},
            {"monotone", monotone},
            {"flagged_non_monotone", flagged_non_monotone}};
}

MomentEstimate estimate_sup_lp_moment(const EnsembleConfig& cfg) {
    cfg.validate();
    const bool p_inf = std::isinf(cfg.p);
    if (!p_inf && cfg.p != 2.0)
        throw ConfigError("estimate_sup_lp_moment: the record carries |.|_2 and |.|_inf only");
    const double T = max_horizon(cfg);
    const auto outcomes = run_ensemble(cfg, T);

    const SpectralField v0 = cfg.ic.build(cfg.solver.grid);
    const double u0_linf = grid_sup_norm(v0, cfg.solver.grid);
    const double cp = p_inf ? 1.0 : std::pow(2.0 * std::numbers::pi, 1.5);
    const double slack = 0.01;

    std::vector<double> direct, bounds, diffs;
    int aborted = 0;
    for (const auto& o : outcomes) {
        if (o.aborted) {
            ++aborted;
            continue;
        }
        const auto& col = p_inf ? o.record.linf : o.record.l2;
        const double sup = sup_scaled_column(o.record, col, cfg.q, T);
        const double alpha_inv_sup = std::exp(cfg.q * std::log(1.0 / *std::min_element(
                                                                   o.record.alpha.begin(),
                                                                   o.record.alpha.end())));
        const double bound = std::pow(cp * u0_linf * (1.0 + slack), cfg.q) * alpha_inv_sup;
        direct.push_back(sup);
        bounds.push_back(bound);
        diffs.push_back(bound - sup);
    }
    const Accumulator acc = reduce(direct);
    const Accumulator bnd = reduce(bounds);
    const Accumulator dif = reduce(diffs);

    MomentEstimate est;
    est.functional = p_inf ? "sup_linf_moment" : "sup_l2_moment";
    est.value = acc.mean;
    est.stderr_ = acc.stderr_;
    est.median = acc.median;
    est.n = acc.n;
    est.aborted = aborted;
    est.bound = bnd.mean;
    est.bound_source = p_inf ? "max_principle_factorization"
                             : "max_principle_factorization*(2pi)^{3/2}";
    est.semantics = "one_sided";
    est.pass = dif.mean >= -3.0 * dif.stderr_;
    const double h32 = l2_norm(v0) + seminorm(v0, 1.5);
    est.params = {{"p", p_inf ? -1.0 : cfg.p},
                  {"q", cfg.q},
                  {"T", T},
                  {"slack", slack},
                  {"paired_margin", dif.mean},
                  {"paired_stderr", dif.stderr_},
                  {"lp_moment_envelope_pq2",
                   std::pow(h32, cfg.q) * std::pow(2.0, 0.25) *
                       std::pow(2.0 * cfg.q / (2.0 * cfg.q - 1.0), cfg.q) *
                       std::exp(cfg.solver.noise.b * T * cfg.q * cfg.q)}};
    return est;
}

MomentEstimate estimate_sup_linf_moment(const EnsembleConfig& cfg) {
    EnsembleConfig inf_cfg = cfg;
    inf_cfg.p = std::numeric_limits<double>::infinity();
    return estimate_sup_lp_moment(inf_cfg);
}

EnsembleReport estimate_log_h1_moment(const EnsembleConfig& cfg) {
    cfg.validate();
    if (cfg.horizons.size() < 2)
        throw ConfigError("estimate_log_h1_moment: configure at least two horizons");
    const double T = max_horizon(cfg);
    const auto outcomes = run_ensemble(cfg, T);

    EnsembleReport report;
    report.horizons = cfg.horizons;
    for (double horizon : cfg.horizons) {
        std::vector<double> values;
        int aborted = 0;
        for (const auto& o : outcomes) {
            if (o.aborted) {
                ++aborted;
                continue;
            }
            double sup = 0.0;
            for (std::size_t i = 0; i < o.record.size(); ++i) {
                if (o.record.times[i] > horizon + 1e-12) break;
                const double h1_u = o.record.sobolev_one[i] / o.record.alpha[i];
                sup = std::max(sup, std::log1p(h1_u * h1_u));
            }
            values.push_back(sup);
        }
        const Accumulator acc = reduce(values);
        MomentEstimate est;
        est.functional = "log_h1_moment";
        est.value = acc.mean;
        est.stderr_ = acc.stderr_;
        est.median = acc.median;
        est.n = acc.n;
        est.aborted = aborted;
        est.semantics = "shape_only";
        est.params = {{"T", horizon}};
        report.estimates.push_back(est);
    }
    for (std::size_t j = 1; j < report.estimates.size(); ++j) {
        const auto& prev = report.estimates[j - 1];
        const auto& cur = report.estimates[j];
        if (cur.value < prev.value) report.monotone = false;
        const double tol = 3.0 * std::hypot(cur.stderr_, prev.stderr_);
        if (cur.value < prev.value - tol) report.flagged_non_monotone = true;
    }
    // least-squares fit of log(estimate) = log a + r T
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const auto count = static_cast<double>(report.estimates.size());
    for (std::size_t j = 0; j < report.estimates.size(); ++j) {
        const double x = cfg.horizons[j];
        const double y = std::log(std::max(report.estimates[j].value, 1e-300));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    report.fit_r = (count * sxy - sx * sy) / (count * sxx - sx * sx);
    report.fit_a = std::exp((sy - report.fit_r * sx) / count);
    for (std::size_t j = 0; j < report.estimates.size(); ++j) {
        const double fitted = std::log(report.fit_a) + report.fit_r * cfg.horizons[j];
        const double y = std::log(std::max(report.estimates[j].value, 1e-300));
        report.fit_residual = std::max(report.fit_residual, std::fabs(y - fitted));
    }
    return report;
}

MomentEstimate check_alpha_sup_moment(const EnsembleConfig& cfg) {
    if (!(cfg.Q > 1.0)) throw std::domain_error("check_alpha_sup_moment: Q must exceed 1");
    if (cfg.n_paths < 2) throw ConfigError("check_alpha_sup_moment: n_paths must be at least 2");
    const double T = max_horizon(cfg);
    const double b = cfg.solver.noise.b;
    std::vector<double> values(cfg.n_paths);
    for_each_path(cfg.n_paths, cfg.threads, [&](int i) {
        NoiseConfig noise = cfg.solver.noise;
        noise.seed = cfg.path_seed(i);
        const NoisePath path = sample_path(noise, cfg.solver.dt, T);
        values[i] = std::exp(cfg.Q * path.max_w());
    });
    const Accumulator acc = reduce(values);
    MomentEstimate est;
    est.functional = "alpha_sup_moment";
    est.value = acc.mean;
    est.stderr_ = acc.stderr_;
    est.median = acc.median;
    est.n = acc.n;
    est.bound = doob_sup_moment_bound_sharp(cfg.Q, b, T);
    est.bound_source = "doob_sharp";
    est.semantics = "one_sided";
    const double floor = exp_moment_exact(cfg.Q, b, T);
    est.pass = acc.mean <= *est.bound + 3.0 * acc.stderr_ &&
               acc.mean >= floor - 3.0 * acc.stderr_;
    est.params = {{"Q", cfg.Q},
                  {"b", b},
                  {"T", T},
                  {"dt", cfg.solver.dt},
                  {"lognormal_floor", floor},
                  {"crude_bound", doob_sup_moment_bound(cfg.Q, b, T)}};
    return est;
}

MomentEstimate check_exp_moment(const EnsembleConfig& cfg) {
    if (cfg.n_paths < 2) throw ConfigError("check_exp_moment: n_paths must be at least 2");
    const double T = max_horizon(cfg);
    const double b = cfg.solver.noise.b;
    const double std_T = std::sqrt(b * T);
    std::vector<double> values(cfg.n_paths);
    for (int i = 0; i < cfg.n_paths; ++i)
        values[i] = std::exp(cfg.Q * std_T * normal_draw(cfg.base_seed, /*stream=*/11, i));
    const Accumulator acc = reduce(values);
    MomentEstimate est;
    est.functional = "exp_moment";
    est.value = acc.mean;
    est.stderr_ = acc.stderr_;
    est.median = acc.median;
    est.n = acc.n;
    est.bound = exp_moment_exact(cfg.Q, b, T);
    est.bound_source = "lognormal_exact";
    est.semantics = "two_sided";
    est.pass = std::fabs(acc.mean - *est.bound) <= 3.0 * acc.stderr_;
    est.params = {{"Q", cfg.Q}, {"b", b}, {"T", T}};
    return est;
}

std::string estimate_ndjson_line(const MomentEstimate& estimate, double horizon) {
    nlohmann::json j = estimate.to_json();
    j["horizon"] = horizon;
    return j.dump();
}

} // namespace burgers3d
