#pragma once

#include "burgers3d/solver.hpp"

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace burgers3d {

struct ToleranceConfig {
    double rel_tol = 1e-8;            // exact-constant checks
    double max_principle_slack = 0.01; // default calibrated at N=32
    double fit_t0 = 0.0;              // fitting window for constant fits
    double fit_t1 = std::numeric_limits<double>::infinity();
    double fitted_c_cap = 1e6;

    void validate() const;
};

struct VerificationReport {
    std::string check;
    bool pass = false;
    bool gating = false; // exact-constant class: failures flip the CLI exit code
    double worst_margin = 0.0;
    std::vector<double> margins; // bound minus observed, per recorded instant
    std::optional<double> fitted_c;
    nlohmann::json params;

    nlohmann::json to_json() const;
};

/// |int u dx| <= 8 pi^3 int_0^t alpha^{-1} ||u||_{1/2}^2 ds + |int u0 dx|,
/// on a u-trajectory (recover_u output). Time integrals by trapezoid on the
/// record grid. Gating.
VerificationReport check_mean_drift(const TrajectoryRecord& traj_u, const ToleranceConfig& tol);

/// ||v||_s <= ||v||_{H^s} <= ||v||_s + c int_0^t ||v||_{1/2}^2 ds + c |u0|_1
/// with c = max{(2pi)^{9/2} alpha^{-1}(t), (2pi)^{3/2}}, s in {1/2,1,3/2}.
/// Gating.
VerificationReport check_norm_domination(const TrajectoryRecord& traj_v, double s, double u0_l1,
                                         const ToleranceConfig& tol);

/// sup_t |v(t)|_inf <= (1 + slack) |v(0)|_inf; also returns the violation
/// curve max(0, |v(t)|_inf/|v(0)|_inf - 1) for resolution studies. Gating.
VerificationReport check_max_principle(const TrajectoryRecord& traj_v,
                                       const ToleranceConfig& tol);

/// ||v(t)||_{H^1}^2 + int ||v||_{H^2}^2 <= ||u0||_{H^1}^2
///   + c ||v(eps)||_{H^1}^2 exp(c ||v(eps)||_{H^{3/2}}^2 int_0^t alpha^{-2}).
/// The constant is unspecified, so this reports the smallest c <= cap that
/// makes the inequality hold everywhere; fails only when no such c exists.
/// Non-gating.
VerificationReport check_energy_inequality(const TrajectoryRecord& traj_v, double eps_time,
                                           const ToleranceConfig& tol);

/// Per-instant ||v||_{1/2} <= ||v||_1 <= ||v||_{3/2}. Gating.
VerificationReport check_seminorm_chain(const TrajectoryRecord& traj_v,
                                        const ToleranceConfig& tol);

/// H^1 existence-time lower bound tau* = 1 / (4A (A ||u0||_1^2 + B)^4) with
/// A = c (1 + a^4), B = c (1 + |u0|_1^4)^{1/5} (1 + a^4), a = sup alpha^{-1}.
double blowup_time_h1(double u0_h1_seminorm, double u0_l1, double alpha_sup_inv, double c_model);

/// H^{3/2} comparison bound
///   ||v(t)||_{3/2}^2 <= (A + ||u0||_{3/2}^2) / bracket^{1/13} - A,
/// bracket = 1 - 13 c sup(alpha^{-2}) t (A + ||u0||_{3/2}^2)^{13},
/// A = 1 + |u0|_1^2; returns +infinity once the bracket closes.
double blowup_bound_h32(double t, double u0_h32_seminorm_sq, double u0_l1,
                        double alpha_sup_inv_sq, double c_model);

/// NDJSON line per report: {check, seed, pass, worst_margin, fitted_c?, params}.
std::string report_ndjson_line(const VerificationReport& report, std::uint64_t seed);

} // namespace burgers3d
