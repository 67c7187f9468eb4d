#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace burgers3d {

/// Driving noise W(t) = sum_k b_k B_k(t). The series enters the dynamics
/// only through W, which in law is a single Brownian motion with variance
/// rate b = sum b_k^2, so exactly one scalar path is sampled.
struct NoiseConfig {
    double b = 0.0; // aggregate intensity sum b_k^2, per unit time
    std::uint64_t seed = 0;
};

/// Discretized path of W on a uniform grid with alpha(t) = exp(-W(t)).
struct NoisePath {
    double b = 0.0;
    std::uint64_t seed = 0;
    double dt = 0.0;
    int refine_level = 0; // bumps the draw stream on each refinement
    std::vector<double> times;
    std::vector<double> w;
    std::vector<double> alpha;

    std::size_t steps() const { return times.empty() ? 0 : times.size() - 1; }
    double horizon() const { return times.empty() ? 0.0 : times.back(); }
    double max_w() const;
    double min_w() const;
};

/// Sample W on the grid {0, dt, ..., T}; dt must divide T within 1e-12.
/// Reproducible given (seed, dt, T, b); increments are N(0, b*dt).
NoisePath sample_path(const NoiseConfig& config, double dt, double T, std::uint64_t seed);
NoisePath sample_path(const NoiseConfig& config, double dt, double T);

/// Brownian-bridge midpoint refinement: coarse points are preserved
/// exactly, interior points are drawn from the bridge law. factor >= 1
/// (factor 1 copies the path).
NoisePath refine_path(const NoisePath& path, int factor);

/// E sup_{t<=T} alpha^{+-n} <= 2 exp(n^2 b T).
double doob_sup_moment_bound(double n, double b, double T);

/// E sup_{t<=T} alpha^{-Q} <= sqrt(2) (Q/(Q-1))^Q exp(b T Q^2 / 2), Q > 1.
double doob_sup_moment_bound_sharp(double Q, double b, double T);

/// E exp(Q W(t)) = exp(Q^2 b t / 2), exactly.
double exp_moment_exact(double Q, double b, double t);

/// CSV export with header "t,W,alpha"; binary container "B3DW" for replay.
void write_path_csv(const NoisePath& path, std::ostream& out);
void write_path_binary_file(const NoisePath& path, const std::string& file);
NoisePath read_path_binary_file(const std::string& file);

} // namespace burgers3d
