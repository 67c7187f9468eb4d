#pragma once

#include "burgers3d/errors.hpp"
#include "burgers3d/grid.hpp"
#include "burgers3d/initial_conditions.hpp"
#include "burgers3d/noise.hpp"
#include "burgers3d/spectral_field.hpp"

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

namespace burgers3d {

struct SolverConfig {
    GridSpec grid;
    double nu = 1.0;
    double horizon = 1.0; // T
    double dt = 1e-3;
    NoiseConfig noise;
    int projection_n = -1; // P_n ball radius; -1 means grid.n
    bool convective_enabled = true;
    double blowup_threshold = 1e6; // abort level for the H^1 seminorm of v
    int record_every = 1;

    int effective_projection() const { return projection_n < 0 ? grid.n : projection_n; }
    long step_count() const;
    void validate() const;
    nlohmann::json to_json() const;
    static SolverConfig from_json(const nlohmann::json& j);
};

enum class RunStatus { completed, aborted_blowup };

struct StepStats {
    double dt = 0.0;
    double max_cfl = 0.0; // max over recorded instants of u_max * N * dt
    long nonlinear_evals = 0;
};

/// Diagnostics time series of one integration. All norms refer to the
/// integrated variable (v for the transformed route, u for the direct route
/// and for recover_u output; `kind` says which).
struct TrajectoryRecord {
    std::string kind = "v";
    std::vector<double> times;
    std::vector<double> alpha;
    std::vector<double> linf;
    std::vector<double> semi_half;
    std::vector<double> semi_one;
    std::vector<double> semi_three_half;
    std::vector<double> l2;
    std::vector<double> sobolev_one;
    std::vector<std::array<double, 3>> mean;
    std::vector<double> dissipation; // running integral of the H^2 seminorm squared
    RunStatus status = RunStatus::completed;
    StepStats stats;
    SpectralField final_state;
    nlohmann::json metadata;

    std::size_t size() const { return times.size(); }
    void validate_columns() const; // all finite, dissipation nondecreasing
};

/// Thrown by the stepper when the post-step H^1 seminorm of v exceeds the
/// configured threshold; integrate converts it into aborted_blowup status.
class BlowupSignal : public std::runtime_error {
  public:
    BlowupSignal(double time, double h1)
        : std::runtime_error("blow-up threshold exceeded"), time_(time), h1_(h1) {}
    double time() const { return time_; }
    double h1_seminorm() const { return h1_; }

  private:
    double time_, h1_;
};

/// NumericalFailure variant carrying the diagnostics recorded so far.
class IntegrationFailure : public NumericalFailure {
  public:
    IntegrationFailure(const std::string& what, double last_valid_time, TrajectoryRecord partial)
        : NumericalFailure(what, last_valid_time), partial_record(std::move(partial)) {}
    TrajectoryRecord partial_record;
};

/// One integrating-factor Heun step of
///   dv = nu Laplace(v) dt - alpha^{-1}(t) P_n[(v.grad)v] dt.
/// The heat part is advanced by the exact multiplier; alpha is read off the
/// path at t and t+dt, which must lie on the path grid.
SpectralField step_random_pde(const SpectralField& v, double t, double dt, const NoisePath& path,
                              const SolverConfig& cfg);

/// Pathwise integration of the transformed equation. v0 is projected onto
/// P_n and symmetrized first. The path must share cfg.dt or be an integer
/// multiple of it (it is bridge-refined onto cfg.dt in that case).
TrajectoryRecord integrate(const SpectralField& v0, const NoisePath& path,
                           const SolverConfig& cfg);

/// u(t) = alpha(t)^{-1} v(t): exact scalar rescaling of every per-instant
/// diagnostic (the dissipation integral is re-accumulated with midpoint
/// alpha^{-2} weights). The path overload cross-checks the recorded alpha
/// against the path; the record-only overload uses the stored column.
TrajectoryRecord recover_u(const TrajectoryRecord& traj_v, const NoisePath& path);
TrajectoryRecord recover_u(const TrajectoryRecord& traj_v);
SpectralField recover_u(const SpectralField& v, double alpha_at_t);

/// Heun (stochastic trapezoidal, Stratonovich-consistent) integration of
/// the original equation du = (nu Laplace(u) - P_n[(u.grad)u]) dt + u o dW,
/// driven by the same sampled increments. Cross-validation route only; the
/// Laplacian is explicit here, so nu * n^2 * dt must stay within the Heun
/// stability region.
TrajectoryRecord integrate_direct_stratonovich(const SpectralField& u0, const NoisePath& path,
                                               const SolverConfig& cfg);

/// Exact mode-wise heat decay coeff(k) -> exp(-nu |k|^2 t) coeff(k).
SpectralField heat_oracle(const SpectralField& v0, double t, double nu);

/// CSV with a JSON metadata comment block; header
/// t,alpha,linf_v,semi_half,semi_one,semi_three_half,l2,h1,mean_1,mean_2,mean_3,dissipation
void write_trajectory_csv(const TrajectoryRecord& record, std::ostream& out);
void write_trajectory_csv_file(const TrajectoryRecord& record, const std::string& path);
TrajectoryRecord read_trajectory_csv(std::istream& in);
TrajectoryRecord read_trajectory_csv_file(const std::string& path);

} // namespace burgers3d
