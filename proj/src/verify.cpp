#include "burgers3d/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace burgers3d {

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> trapezoid_running(const std::vector<double>& t,
                                      const std::vector<double>& f) {
    std::vector<double> out(t.size(), 0.0);
    for (std::size_t i = 1; i < t.size(); ++i)
        out[i] = out[i - 1] + 0.5 * (t[i] - t[i - 1]) * (f[i] + f[i - 1]);
    return out;
}

void require_columns(const TrajectoryRecord& traj, const char* who) {
    if (traj.size() == 0) throw ConfigError(std::string(who) + ": empty trajectory");
    const std::size_t n = traj.size();
    if (traj.alpha.size() != n || traj.semi_half.size() != n || traj.linf.size() != n ||
        traj.mean.size() != n || traj.l2.size() != n || traj.semi_one.size() != n ||
        traj.semi_three_half.size() != n || traj.sobolev_one.size() != n ||
        traj.dissipation.size() != n)
        throw ConfigError(std::string(who) + ": trajectory is missing diagnostics");
}

double euclid(const std::array<double, 3>& v) {
    return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
}

VerificationReport finish(VerificationReport rep, const ToleranceConfig& tol,
                          const std::vector<double>& scales) {
    rep.worst_margin = std::numeric_limits<double>::infinity();
    rep.pass = true;
    for (std::size_t i = 0; i < rep.margins.size(); ++i) {
        rep.worst_margin = std::min(rep.worst_margin, rep.margins[i]);
        if (rep.margins[i] < -tol.rel_tol * scales[i]) rep.pass = false;
    }
    return rep;
}

} // namespace

void ToleranceConfig::validate() const {
    if (rel_tol < 0 || max_principle_slack < 0)
        throw ConfigError("ToleranceConfig: tolerances must be nonnegative");
}

nlohmann::json VerificationReport::to_json() const {
    nlohmann::json j{{"check", check},
                     {"pass", pass},
                     {"gating", gating},
                     {"worst_margin", worst_margin},
                     {"params", params}};
    if (fitted_c) j["fitted_c"] = *fitted_c;
    return j;
}

VerificationReport check_mean_drift(const TrajectoryRecord& traj_u, const ToleranceConfig& tol) {
    tol.validate();
    require_columns(traj_u, "check_mean_drift");
    VerificationReport rep;
    rep.check = "mean_drift";
    rep.gating = true;
    std::vector<double> integrand(traj_u.size());
    for (std::size_t i = 0; i < traj_u.size(); ++i)
        integrand[i] = traj_u.semi_half[i] * traj_u.semi_half[i] / traj_u.alpha[i];
    const auto running = trapezoid_running(traj_u.times, integrand);
    const double mean0 = euclid(traj_u.mean.front());
    std::vector<double> scales(traj_u.size());
    for (std::size_t i = 0; i < traj_u.size(); ++i) {
        const double rhs = 8.0 * kPi * kPi * kPi * running[i] + mean0;
        const double lhs = euclid(traj_u.mean[i]);
        rep.margins.push_back(rhs - lhs);
        scales[i] = std::max(1.0, rhs);
    }
    rep.params = {{"constant", "8*pi^3"}, {"instants", traj_u.size()}};
    return finish(std::move(rep), tol, scales);
}

VerificationReport check_norm_domination(const TrajectoryRecord& traj_v, double s, double u0_l1,
                                         const ToleranceConfig& tol) {
    tol.validate();
    require_columns(traj_v, "check_norm_domination");
    const std::vector<double>* column = nullptr;
    if (s == 0.5)
        column = &traj_v.semi_half;
    else if (s == 1.0)
        column = &traj_v.semi_one;
    else if (s == 1.5)
        column = &traj_v.semi_three_half;
    else
        throw std::domain_error("check_norm_domination: s must be one of 1/2, 1, 3/2");

    VerificationReport rep;
    rep.check = "norm_domination";
    rep.gating = true;
    std::vector<double> sq(traj_v.size());
    for (std::size_t i = 0; i < traj_v.size(); ++i)
        sq[i] = traj_v.semi_half[i] * traj_v.semi_half[i];
    const auto running = trapezoid_running(traj_v.times, sq);
    std::vector<double> scales(traj_v.size());
    for (std::size_t i = 0; i < traj_v.size(); ++i) {
        const double hs = traj_v.l2[i] + (*column)[i]; // the module's H^s norm
        const double c = std::max(std::pow(2.0 * kPi, 4.5) / traj_v.alpha[i],
                                  std::pow(2.0 * kPi, 1.5));
        const double lower_margin = hs - (*column)[i];
        const double upper = (*column)[i] + c * running[i] + c * u0_l1;
        const double upper_margin = upper - hs;
        rep.margins.push_back(std::min(lower_margin, upper_margin));
        scales[i] = std::max(1.0, upper);
    }
    rep.params = {{"s", s}, {"u0_l1", u0_l1}};
    return finish(std::move(rep), tol, scales);
}

VerificationReport check_max_principle(const TrajectoryRecord& traj_v,
                                       const ToleranceConfig& tol) {
    tol.validate();
    require_columns(traj_v, "check_max_principle");
    VerificationReport rep;
    rep.check = "max_principle";
    rep.gating = true;
    const double initial = traj_v.linf.front();
    const double bound = (1.0 + tol.max_principle_slack) * initial;
    std::vector<double> scales(traj_v.size());
    std::vector<double> violation(traj_v.size());
    double worst_violation = 0.0;
    for (std::size_t i = 0; i < traj_v.size(); ++i) {
        rep.margins.push_back(bound - traj_v.linf[i]);
        scales[i] = std::max(1.0, bound);
        violation[i] = initial > 0.0 ? std::max(0.0, traj_v.linf[i] / initial - 1.0)
                                     : traj_v.linf[i];
        worst_violation = std::max(worst_violation, violation[i]);
    }
    rep.params = {{"initial_linf", initial},
                  {"slack", tol.max_principle_slack},
                  {"worst_violation", worst_violation},
                  {"violation_curve", violation}};
    return finish(std::move(rep), tol, scales);
}

VerificationReport check_energy_inequality(const TrajectoryRecord& traj_v, double eps_time,
                                           const ToleranceConfig& tol) {
    tol.validate();
    require_columns(traj_v, "check_energy_inequality");
    VerificationReport rep;
    rep.check = "energy_inequality";
    rep.gating = false;

    std::size_t ie = 0;
    while (ie + 1 < traj_v.size() && traj_v.times[ie] < eps_time) ++ie;

    std::vector<double> ainv_sq(traj_v.size()), l2_sq(traj_v.size());
    for (std::size_t i = 0; i < traj_v.size(); ++i) {
        ainv_sq[i] = 1.0 / (traj_v.alpha[i] * traj_v.alpha[i]);
        l2_sq[i] = traj_v.l2[i] * traj_v.l2[i];
    }
    const auto alpha_int = trapezoid_running(traj_v.times, ainv_sq);
    const auto l2_int = trapezoid_running(traj_v.times, l2_sq);

    const double h1_eps_sq = traj_v.sobolev_one[ie] * traj_v.sobolev_one[ie];
    const double h32_eps = traj_v.l2[ie] + traj_v.semi_three_half[ie];
    const double h1_0_sq = traj_v.sobolev_one.front() * traj_v.sobolev_one.front();

    auto holds_with = [&](double c) {
        for (std::size_t i = 0; i < traj_v.size(); ++i) {
            // sum-of-squares H^2 dissipation: int l2^2 + int semi2^2
            const double lhs = traj_v.sobolev_one[i] * traj_v.sobolev_one[i] +
                               traj_v.dissipation[i] + l2_int[i];
            const double rhs =
                h1_0_sq + c * h1_eps_sq * std::exp(c * h32_eps * h32_eps * alpha_int[i]);
            if (lhs > rhs) return false;
        }
        return true;
    };

    if (!holds_with(tol.fitted_c_cap)) {
        rep.pass = false;
        rep.worst_margin = -1.0;
        rep.params = {{"eps_time", traj_v.times[ie]}, {"cap", tol.fitted_c_cap}};
        return rep;
    }
    double lo = 0.0, hi = tol.fitted_c_cap;
    for (int iter = 0; iter < 200 && hi - lo > 1e-9 * std::max(1.0, hi); ++iter) {
        const double mid = 0.5 * (lo + hi);
        (holds_with(mid) ? hi : lo) = mid;
    }
    rep.fitted_c = hi;
    rep.pass = true;
    rep.worst_margin = 0.0;
    rep.params = {{"eps_time", traj_v.times[ie]}, {"cap", tol.fitted_c_cap}};
    return rep;
}

VerificationReport check_seminorm_chain(const TrajectoryRecord& traj_v,
                                        const ToleranceConfig& tol) {
    tol.validate();
    require_columns(traj_v, "check_seminorm_chain");
    VerificationReport rep;
    rep.check = "seminorm_chain";
    rep.gating = true;
    std::vector<double> scales;
    for (std::size_t i = 0; i < traj_v.size(); ++i) {
        rep.margins.push_back(traj_v.semi_one[i] - traj_v.semi_half[i]);
        scales.push_back(std::max(1.0, traj_v.semi_one[i]));
        rep.margins.push_back(traj_v.semi_three_half[i] - traj_v.semi_one[i]);
        scales.push_back(std::max(1.0, traj_v.semi_three_half[i]));
    }
    rep.params = {{"instants", traj_v.size()}};
    return finish(std::move(rep), tol, scales);
}

double blowup_time_h1(double u0_h1_seminorm, double u0_l1, double alpha_sup_inv, double c_model) {
    if (!(c_model > 0.0)) throw std::domain_error("blowup_time_h1: c_model must be positive");
    const double a4 = std::pow(alpha_sup_inv, 4.0);
    const double big_a = c_model * (1.0 + a4);
    const double big_b = c_model * std::pow(1.0 + std::pow(u0_l1, 4.0), 0.2) * (1.0 + a4);
    const double base = big_a * u0_h1_seminorm * u0_h1_seminorm + big_b;
    return 1.0 / (4.0 * big_a * std::pow(base, 4.0));
}

double blowup_bound_h32(double t, double u0_h32_seminorm_sq, double u0_l1,
                        double alpha_sup_inv_sq, double c_model) {
    if (!(c_model > 0.0)) throw std::domain_error("blowup_bound_h32: c_model must be positive");
    const double big_a = 1.0 + u0_l1 * u0_l1;
    const double total = big_a + u0_h32_seminorm_sq;
    const double bracket = 1.0 - 13.0 * c_model * alpha_sup_inv_sq * t * std::pow(total, 13.0);
    if (bracket <= 0.0) return std::numeric_limits<double>::infinity();
    return total / std::pow(bracket, 1.0 / 13.0) - big_a;
}

std::string report_ndjson_line(const VerificationReport& report, std::uint64_t seed) {
    nlohmann::json j = report.to_json();
    j["seed"] = seed;
    return j.dump();
}

} // namespace burgers3d
