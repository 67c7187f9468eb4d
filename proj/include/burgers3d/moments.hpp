#pragma once

#include "burgers3d/solver.hpp"
#include "burgers3d/verify.hpp"

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace burgers3d {

/// Monte Carlo ensemble setup for the section-style moment studies. Path i
/// runs with seed splitmix64(base_seed ^ splitmix64(i)), so (base_seed,
/// config) pins every path. Reductions fold sequentially in path order.
struct EnsembleConfig {
    int n_paths = 2;
    std::uint64_t base_seed = 0;
    SolverConfig solver;
    InitialCondition ic;
    std::vector<double> horizons; // ascending; solver.horizon is max when empty
    double p = 2.0;               // L^p order (2 or infinity from the record)
    double q = 1.0;               // moment order
    double Q = 2.0;               // alpha-moment order, > 1 where required
    int threads = 1;

    void validate() const;
    std::uint64_t path_seed(int index) const;
};

struct MomentEstimate {
    std::string functional;
    double value = 0.0;
    double stderr_ = 0.0;
    long n = 0;
    double median = 0.0;
    std::optional<double> bound;
    std::string bound_source;
    std::string semantics; // "one_sided" or "two_sided"
    bool pass = true;
    int aborted = 0; // blow-up aborts; estimate is conditional when > 0
    nlohmann::json params;

    nlohmann::json to_json() const;
};

struct EnsembleReport {
    std::vector<double> horizons;
    std::vector<MomentEstimate> estimates;
    double fit_a = 0.0; // envelope a*exp(r*T) fitted to the estimates
    double fit_r = 0.0;
    double fit_residual = 0.0;
    bool monotone = true;
    bool flagged_non_monotone = false;

    nlohmann::json to_json() const;
};

/// E sup_{t<=T} |u(t)|_p^q over the transformed-route ensemble (p = 2 or
/// infinity). The gated bound is the pathwise max-principle factorization
/// |u(t)|_p <= C_p |u0|_inf (1+slack) sup alpha^{-1} with C_2 = (2pi)^{3/2},
/// C_inf = 1; the unspecified-constant envelope from the L^p moment theorem
/// (evaluated at p'=q'=2) is reported in params, not gated.
MomentEstimate estimate_sup_lp_moment(const EnsembleConfig& cfg);

/// E sup_{t<=T} |u(t)|_inf^q: the direct estimate and its factorized
/// pathwise bound |u0|_inf^q sup alpha^{-q}, paired one-sided at 3 stderr.
MomentEstimate estimate_sup_linf_moment(const EnsembleConfig& cfg);

/// E sup_{t<=T} log(1 + ||u||_{H^1}^2) per horizon (prefix sups of one run
/// per path), with the a*exp(rT) envelope fit.
EnsembleReport estimate_log_h1_moment(const EnsembleConfig& cfg);

/// MC E sup_{t<=T} alpha^{-Q} against sqrt(2) (Q/(Q-1))^Q exp(bTQ^2/2),
/// one-sided at 3 stderr; the exact lognormal floor exp(Q^2 b T/2) is
/// reported in params.
MomentEstimate check_alpha_sup_moment(const EnsembleConfig& cfg);

/// MC E exp(Q W(T)) against the exact exp(Q^2 b T / 2), two-sided at
/// 3 stderr. Samples W(T) from its exact law.
MomentEstimate check_exp_moment(const EnsembleConfig& cfg);

std::string estimate_ndjson_line(const MomentEstimate& estimate, double horizon);

} // namespace burgers3d
