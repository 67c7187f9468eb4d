#include "burgers3d/noise.hpp"

#include "burgers3d/errors.hpp"
#include "burgers3d/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace burgers3d {

namespace {

long checked_step_count(double dt, double T) {
    if (!(dt > 0.0) || !(T > 0.0))
        throw std::domain_error("sample_path: dt and T must be positive");
    const long steps = std::lround(T / dt);
    if (steps < 1 || std::fabs(steps * dt - T) > 1e-12 * std::max(1.0, T))
        throw std::domain_error("sample_path: dt must divide T within 1e-12");
    return steps;
}

} // namespace

double NoisePath::max_w() const { return *std::max_element(w.begin(), w.end()); }
double NoisePath::min_w() const { return *std::min_element(w.begin(), w.end()); }

NoisePath sample_path(const NoiseConfig& config, double dt, double T, std::uint64_t seed) {
    if (config.b < 0.0) throw std::domain_error("sample_path: intensity b must be nonnegative");
    const long steps = checked_step_count(dt, T);
    NoisePath path;
    path.b = config.b;
    path.seed = seed;
    path.dt = dt;
    path.times.resize(steps + 1);
    path.w.resize(steps + 1);
    path.alpha.resize(steps + 1);
    path.times[0] = 0.0;
    path.w[0] = 0.0;
    path.alpha[0] = 1.0;
    const double step_std = std::sqrt(config.b * dt);
    for (long i = 0; i < steps; ++i) {
        path.times[i + 1] = (i + 1 == steps) ? T : (i + 1) * dt;
        path.w[i + 1] = path.w[i] + step_std * normal_draw(seed, /*stream=*/0, i);
        path.alpha[i + 1] = std::exp(-path.w[i + 1]);
    }
    return path;
}

NoisePath sample_path(const NoiseConfig& config, double dt, double T) {
    return sample_path(config, dt, T, config.seed);
}

NoisePath refine_path(const NoisePath& path, int factor) {
    if (factor < 1) throw std::domain_error("refine_path: factor must be >= 1");
    if (path.times.size() < 2) throw ConfigError("refine_path: path has no interval to refine");
    if (factor == 1) return path;
    NoisePath fine;
    fine.b = path.b;
    fine.seed = path.seed;
    fine.dt = path.dt / factor;
    fine.refine_level = path.refine_level + 1;
    const std::size_t coarse_steps = path.steps();
    fine.times.resize(coarse_steps * factor + 1);
    fine.w.resize(fine.times.size());
    fine.alpha.resize(fine.times.size());
    fine.times[0] = path.times[0];
    fine.w[0] = path.w[0];
    const std::uint64_t stream = 1 + static_cast<std::uint64_t>(fine.refine_level);
    std::uint64_t draw = 0;
    for (std::size_t i = 0; i < coarse_steps; ++i) {
        const double t_left = path.times[i];
        const double t_right = path.times[i + 1];
        const double w_right = path.w[i + 1];
        const double h = (t_right - t_left) / factor;
        double t_prev = t_left;
        double w_prev = fine.w[i * factor];
        for (int j = 1; j < factor; ++j) {
            const double t_new = t_left + j * h;
            const double remaining = t_right - t_prev;
            const double mean = w_prev + (w_right - w_prev) * (t_new - t_prev) / remaining;
            const double var = path.b * (t_new - t_prev) * (t_right - t_new) / remaining;
            const double z = normal_draw(path.seed, stream, draw++);
            w_prev = mean + std::sqrt(std::max(var, 0.0)) * z;
            t_prev = t_new;
            fine.times[i * factor + j] = t_new;
            fine.w[i * factor + j] = w_prev;
        }
        fine.times[(i + 1) * factor] = t_right;
        fine.w[(i + 1) * factor] = w_right;
    }
    for (std::size_t i = 0; i < fine.w.size(); ++i) fine.alpha[i] = std::exp(-fine.w[i]);
    return fine;
}

double doob_sup_moment_bound(double n, double b, double T) {
    return 2.0 * std::exp(n * n * b * T);
}

double doob_sup_moment_bound_sharp(double Q, double b, double T) {
    if (!(Q > 1.0))
        throw std::domain_error("doob_sup_moment_bound_sharp: Q must exceed 1");
    return std::sqrt(2.0) * std::pow(Q / (Q - 1.0), Q) * std::exp(b * T * Q * Q / 2.0);
}

double exp_moment_exact(double Q, double b, double t) {
    return std::exp(Q * Q * b * t / 2.0);
}

void write_path_csv(const NoisePath& path, std::ostream& out) {
    out << "t,W,alpha\n";
    char line[128];
    for (std::size_t i = 0; i < path.times.size(); ++i) {
        std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g\n", path.times[i], path.w[i],
                      path.alpha[i]);
        out << line;
    }
}

namespace {
constexpr char kPathMagic[4] = {'B', '3', 'D', 'W'};
}

void write_path_binary_file(const NoisePath& path, const std::string& file) {
    std::ofstream out(file, std::ios::binary);
    if (!out) throw DataError("cannot open for writing: " + file);
    out.write(kPathMagic, sizeof kPathMagic);
    const std::uint32_t version = 1;
    const std::uint64_t count = path.times.size();
    out.write(reinterpret_cast<const char*>(&version), sizeof version);
    out.write(reinterpret_cast<const char*>(&path.b), sizeof path.b);
    out.write(reinterpret_cast<const char*>(&path.seed), sizeof path.seed);
    out.write(reinterpret_cast<const char*>(&path.dt), sizeof path.dt);
    out.write(reinterpret_cast<const char*>(&count), sizeof count);
    out.write(reinterpret_cast<const char*>(path.times.data()), count * sizeof(double));
    out.write(reinterpret_cast<const char*>(path.w.data()), count * sizeof(double));
    if (!out) throw DataError("write_path_binary_file: stream failure");
}

NoisePath read_path_binary_file(const std::string& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw DataError("cannot open for reading: " + file);
    char magic[4];
    in.read(magic, sizeof magic);
    if (!in || std::memcmp(magic, kPathMagic, sizeof magic) != 0)
        throw DataError("read_path_binary_file: bad magic, not a B3DW container");
    std::uint32_t version = 0;
    in.read(reinterpret_cast<char*>(&version), sizeof version);
    if (version != 1) throw DataError("read_path_binary_file: unsupported version");
    NoisePath path;
    std::uint64_t count = 0;
    in.read(reinterpret_cast<char*>(&path.b), sizeof path.b);
    in.read(reinterpret_cast<char*>(&path.seed), sizeof path.seed);
    in.read(reinterpret_cast<char*>(&path.dt), sizeof path.dt);
    in.read(reinterpret_cast<char*>(&count), sizeof count);
    path.times.resize(count);
    path.w.resize(count);
    path.alpha.resize(count);
    in.read(reinterpret_cast<char*>(path.times.data()), count * sizeof(double));
    in.read(reinterpret_cast<char*>(path.w.data()), count * sizeof(double));
    if (!in) throw DataError("read_path_binary_file: truncated container");
    for (std::size_t i = 0; i < count; ++i) path.alpha[i] = std::exp(-path.w[i]);
    return path;
}

} // namespace burgers3d
