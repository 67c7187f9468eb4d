#include "burgers3d/spectral_ops.hpp"

#include "burgers3d/errors.hpp"
#include "burgers3d/fft_backend.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <string>
#include <vector>

namespace burgers3d {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kCellVolumeFactor = kTwoPi * kTwoPi * kTwoPi; // (2pi)^3

inline int wrap(int k, int m) { return k >= 0 ? k : k + m; }

inline std::size_t flat(const std::array<int, 3>& dims, int j1, int j2, int j3) {
    return (static_cast<std::size_t>(j1) * dims[1] + j2) * dims[2] + j3;
}

void require_matching(const SpectralField& field, const GridSpec& grid, const char* op) {
    if (field.resolution() != grid.n)
        throw ConfigError(std::string(op) + ": field resolution " +
                          std::to_string(field.resolution()) + " does not match grid N=" +
                          std::to_string(grid.n));
}

void require_hermitian(const SpectralField& field, const char* op) {
    const double scale = std::max(1.0, field.max_abs_coeff());
    if (field.hermitian_residual() > 1e-12 * scale)
        throw DataError(std::string(op) + ": Hermitian symmetry violated beyond tolerance");
}

/// Scatter the support box of one component onto a zeroed (d1,d2,d3)
/// buffer at wrapped indices; returns through `staging` which the caller
/// must restore to zero afterwards (clear_box).
void embed_component(const SpectralField& f, int comp, const std::array<int, 3>& dims,
                     std::complex<double>* staging) {
    const int n = f.resolution();
    for (int k1 = -f.extent(0); k1 <= f.extent(0); ++k1)
        for (int k2 = -f.extent(1); k2 <= f.extent(1); ++k2)
            for (int k3 = -f.extent(2); k3 <= f.extent(2); ++k3)
                staging[flat(dims, wrap(k1, dims[0]), wrap(k2, dims[1]), wrap(k3, dims[2]))] =
                    f.at(comp, k1 + n, k2 + n, k3 + n);
}

void embed_component_derivative(const SpectralField& f, int comp, int axis,
                                const std::array<int, 3>& dims, std::complex<double>* staging) {
    const int n = f.resolution();
    for (int k1 = -f.extent(0); k1 <= f.extent(0); ++k1)
        for (int k2 = -f.extent(1); k2 <= f.extent(1); ++k2)
            for (int k3 = -f.extent(2); k3 <= f.extent(2); ++k3) {
                const int kj = axis == 0 ? k1 : (axis == 1 ? k2 : k3);
                const auto z = f.at(comp, k1 + n, k2 + n, k3 + n);
                staging[flat(dims, wrap(k1, dims[0]), wrap(k2, dims[1]), wrap(k3, dims[2]))] =
                    std::complex<double>(-kj * z.imag(), kj * z.real()); // i*kj*z
            }
}

void clear_box(const SpectralField& f, const std::array<int, 3>& dims,
               std::complex<double>* staging) {
    for (int k1 = -f.extent(0); k1 <= f.extent(0); ++k1)
        for (int k2 = -f.extent(1); k2 <= f.extent(1); ++k2)
            for (int k3 = -f.extent(2); k3 <= f.extent(2); ++k3)
                staging[flat(dims, wrap(k1, dims[0]), wrap(k2, dims[1]), wrap(k3, dims[2]))] = 0.0;
}

struct ProductWorkspace {
    std::array<int, 3> dims{};
    std::vector<std::complex<double>> staging; // kept all-zero between embeds
    std::vector<std::complex<double>> scratch;
    std::array<std::vector<std::complex<double>>, 3> u_phys;
    std::array<std::vector<double>, 3> acc;
    std::vector<std::complex<double>> prod;

    void resize(const std::array<int, 3>& d) {
        dims = d;
        const std::size_t total = static_cast<std::size_t>(d[0]) * d[1] * d[2];
        staging.assign(total, {0.0, 0.0});
        scratch.resize(total);
        for (auto& b : u_phys) b.resize(total);
        for (auto& a : acc) a.resize(total);
        prod.resize(total);
    }
};

ProductWorkspace& workspace_for(const std::array<int, 3>& dims) {
    thread_local std::map<std::array<int, 3>, ProductWorkspace> cache;
    auto& ws = cache[dims];
    if (ws.staging.empty()) ws.resize(dims);
    return ws;
}

} // namespace

SpectralField analyze(const PhysicalField& field, const GridSpec& grid) {
    grid.validate();
    if (field.m != grid.m)
        throw ConfigError("analyze: physical resolution " + std::to_string(field.m) +
                          " does not match grid M=" + std::to_string(grid.m));
    const int m = grid.m;
    const int n = grid.n;
    const std::array<int, 3> dims = {m, m, m};
    const std::size_t total = static_cast<std::size_t>(m) * m * m;
    std::vector<std::complex<double>> in(total), out(total);
    SpectralField result(n);
    result.set_extent(n, n, n);
    const double norm = 1.0 / static_cast<double>(total);
    for (int c = 0; c < SpectralField::kComponents; ++c) {
        for (std::size_t j = 0; j < total; ++j)
            in[j] = field.values[static_cast<std::size_t>(c) * total + j];
        fft::forward(dims, in.data(), out.data());
        for (int k1 = -n; k1 <= n; ++k1)
            for (int k2 = -n; k2 <= n; ++k2)
                for (int k3 = -n; k3 <= n; ++k3)
                    result.at(c, k1 + n, k2 + n, k3 + n) =
                        norm * out[flat(dims, wrap(k1, m), wrap(k2, m), wrap(k3, m))];
    }
    result.enforce_hermitian();
    result.tighten();
    return result;
}

PhysicalField synthesize(const SpectralField& field, const GridSpec& grid) {
    grid.validate();
    require_matching(field, grid, "synthesize");
    require_hermitian(field, "synthesize");
    const int m = grid.m;
    const std::array<int, 3> dims = {m, m, m};
    const std::size_t total = static_cast<std::size_t>(m) * m * m;
    std::vector<std::complex<double>> in(total), out(total);
    PhysicalField result(m);
    for (int c = 0; c < SpectralField::kComponents; ++c) {
        std::fill(in.begin(), in.end(), std::complex<double>{0.0, 0.0});
        embed_component(field, c, dims, in.data());
        fft::backward(dims, in.data(), out.data());
        for (std::size_t j = 0; j < total; ++j)
            result.values[static_cast<std::size_t>(c) * total + j] = out[j].real();
    }
    return result;
}

SpectralField lambda_pow(const SpectralField& field, double s) {
    if (s < 0.0) throw std::domain_error("lambda_pow: s must be nonnegative");
    SpectralField result = field;
    const int n = field.resolution();
    for (int c = 0; c < SpectralField::kComponents; ++c)
        for (int k1 = -field.extent(0); k1 <= field.extent(0); ++k1)
            for (int k2 = -field.extent(1); k2 <= field.extent(1); ++k2)
                for (int k3 = -field.extent(2); k3 <= field.extent(2); ++k3) {
                    const double nsq = static_cast<double>(
                        WaveVector{k1, k2, k3}.norm_sq());
                    result.at(c, k1 + n, k2 + n, k3 + n) *= std::pow(nsq, 0.5 * s);
                }
    return result;
}

namespace {

double weighted_mode_sum(const SpectralField& field, double s, bool include_zero) {
    double sum = 0.0;
    const int n = field.resolution();
    for (int c = 0; c < SpectralField::kComponents; ++c)
        for (int k1 = -field.extent(0); k1 <= field.extent(0); ++k1)
            for (int k2 = -field.extent(1); k2 <= field.extent(1); ++k2)
                for (int k3 = -field.extent(2); k3 <= field.extent(2); ++k3) {
                    const long long nsq = WaveVector{k1, k2, k3}.norm_sq();
                    if (nsq == 0 && !include_zero) continue;
                    const auto z = field.at(c, k1 + n, k2 + n, k3 + n);
                    const double w =
                        (s == 0.0) ? 1.0 : std::pow(static_cast<double>(nsq), s);
                    sum += w * std::norm(z);
                }
    return sum;
}

} // namespace

double seminorm(const SpectralField& field, double s) {
    if (s < 0.0) throw std::domain_error("seminorm: s must be nonnegative");
    return std::sqrt(kCellVolumeFactor * weighted_mode_sum(field, s, /*include_zero=*/false));
}

double l2_norm(const SpectralField& field) {
    return std::sqrt(kCellVolumeFactor * weighted_mode_sum(field, 0.0, /*include_zero=*/true));
}

double sobolev_norm(const SpectralField& field, double s) {
    return l2_norm(field) + seminorm(field, s);
}

double lp_norm(const PhysicalField& field, double p) {
    if (!(p >= 1.0)) throw std::domain_error("lp_norm: p must satisfy p >= 1");
    const std::size_t total = static_cast<std::size_t>(field.m) * field.m * field.m;
    const double* v0 = field.values.data();
    const double* v1 = v0 + total;
    const double* v2 = v1 + total;
    if (std::isinf(p)) {
        double worst = 0.0;
        for (std::size_t j = 0; j < total; ++j)
            worst = std::max(worst, v0[j] * v0[j] + v1[j] * v1[j] + v2[j] * v2[j]);
        return std::sqrt(worst);
    }
    double sum = 0.0;
    for (std::size_t j = 0; j < total; ++j) {
        const double mag = std::sqrt(v0[j] * v0[j] + v1[j] * v1[j] + v2[j] * v2[j]);
        sum += std::pow(mag, p);
    }
    const double cell = kCellVolumeFactor / static_cast<double>(total);
    return std::pow(cell * sum, 1.0 / p);
}

SpectralField galerkin_project(const SpectralField& field, int n_ball) {
    SpectralField result = field;
    const int n = field.resolution();
    const long long r2 = static_cast<long long>(n_ball) * n_ball;
    for (int c = 0; c < SpectralField::kComponents; ++c)
        for (int k1 = -field.extent(0); k1 <= field.extent(0); ++k1)
            for (int k2 = -field.extent(1); k2 <= field.extent(1); ++k2)
                for (int k3 = -field.extent(2); k3 <= field.extent(2); ++k3)
                    if (WaveVector{k1, k2, k3}.norm_sq() > r2)
                        result.at(c, k1 + n, k2 + n, k3 + n) = 0.0;
    result.set_extent(std::min(field.extent(0), n_ball), std::min(field.extent(1), n_ball),
                      std::min(field.extent(2), n_ball));
    return result;
}

SpectralField convective_term(const SpectralField& u, const GridSpec& grid) {
    SpectralField result(u.resolution());
    convective_term_into(u, grid, result);
    return result;
}

void convective_term_into(const SpectralField& u, const GridSpec& grid, SpectralField& result) {
    grid.validate();
    require_matching(u, grid, "convective_term");
    if (&result == &u) throw ConfigError("convective_term: output must not alias the input");
    if (result.resolution() != u.resolution())
        throw ConfigError("convective_term: output resolution mismatch");
    if (grid.dealias == DealiasRule::two_thirds && grid.m < grid.dealias_min_m())
        throw ConfigError("convective_term: grid M=" + std::to_string(grid.m) +
                          " too small for the two-thirds rule (need M >= " +
                          std::to_string(grid.dealias_min_m()) + ")");
    require_hermitian(u, "convective_term");

    const int n = u.resolution();
    const std::array<int, 3> a = {u.extent(0), u.extent(1), u.extent(2)};
    clear_support(result);
    if (a[0] == 0 && a[1] == 0 && a[2] == 0) return; // gradient of a constant

    // Product band per axis: true modes reach 2a_j, retained up to n. A
    // grid of m_j >= 2a_j + min(2a_j, n) + 1 keeps every retained output
    // mode clear of alias images (m_j = 3n+1 in the fully occupied case).
    std::array<int, 3> dims;
    for (int j = 0; j < 3; ++j) {
        if (a[j] == 0)
            dims[j] = 1;
        else
            dims[j] = grid.dealias == DealiasRule::two_thirds
                          ? GridSpec::next_fast_even(2 * a[j] + std::min(2 * a[j], n) + 1)
                          : grid.m;
    }
    const std::size_t total = static_cast<std::size_t>(dims[0]) * dims[1] * dims[2];
    auto& ws = workspace_for(dims);

    for (int j = 0; j < 3; ++j) {
        embed_component(u, j, dims, ws.staging.data());
        fft::backward(dims, ws.staging.data(), ws.u_phys[j].data());
        clear_box(u, dims, ws.staging.data());
    }
    for (int j = 0; j < 3; ++j) {
        for (int i = 0; i < 3; ++i) {
            embed_component_derivative(u, i, j, dims, ws.staging.data());
            fft::backward(dims, ws.staging.data(), ws.scratch.data());
            clear_box(u, dims, ws.staging.data());
            const std::complex<double>* uj = ws.u_phys[j].data();
            const std::complex<double>* di = ws.scratch.data();
            double* acc = ws.acc[i].data();
            if (j == 0)
                for (std::size_t x = 0; x < total; ++x) acc[x] = uj[x].real() * di[x].real();
            else
                for (std::size_t x = 0; x < total; ++x) acc[x] += uj[x].real() * di[x].real();
        }
    }

    std::array<int, 3> out_ext;
    for (int j = 0; j < 3; ++j)
        out_ext[j] = a[j] == 0 ? 0
                               : std::min(n, grid.dealias == DealiasRule::two_thirds ? 2 * a[j]
                                                                                     : n);
    const double norm = 1.0 / static_cast<double>(total);
    for (int i = 0; i < 3; ++i) {
        for (std::size_t x = 0; x < total; ++x) ws.prod[x] = {ws.acc[i][x], 0.0};
        fft::forward(dims, ws.prod.data(), ws.scratch.data());
        for (int k1 = -out_ext[0]; k1 <= out_ext[0]; ++k1)
            for (int k2 = -out_ext[1]; k2 <= out_ext[1]; ++k2)
                for (int k3 = -out_ext[2]; k3 <= out_ext[2]; ++k3)
                    result.at(i, k1 + n, k2 + n, k3 + n) =
                        norm * ws.scratch[flat(dims, wrap(k1, dims[0]), wrap(k2, dims[1]),
                                               wrap(k3, dims[2]))];
    }
    result.set_extent(out_ext[0], out_ext[1], out_ext[2]);
    result.enforce_hermitian();
}

std::array<double, 3> spatial_mean(const SpectralField& field) {
    const int n = field.resolution();
    std::array<double, 3> mean;
    for (int c = 0; c < SpectralField::kComponents; ++c) {
        const auto z = field.at(c, n, n, n);
        if (std::abs(z.imag()) > 1e-12 * std::max(1.0, std::abs(z)))
            throw DataError("spatial_mean: zero mode has a non-real coefficient");
        mean[c] = kCellVolumeFactor * z.real();
    }
    return mean;
}

double grid_sup_norm(const SpectralField& field, const GridSpec& grid) {
    grid.validate();
    require_matching(field, grid, "grid_sup_norm");
    std::array<int, 3> dims;
    for (int j = 0; j < 3; ++j) dims[j] = field.extent(j) == 0 ? 1 : grid.m;
    const std::size_t total = static_cast<std::size_t>(dims[0]) * dims[1] * dims[2];
    auto& ws = workspace_for(dims);
    for (int c = 0; c < 3; ++c) {
        embed_component(field, c, dims, ws.staging.data());
        fft::backward(dims, ws.staging.data(), ws.u_phys[c].data());
        clear_box(field, dims, ws.staging.data());
    }
    double worst = 0.0;
    for (std::size_t x = 0; x < total; ++x) {
        const double m0 = ws.u_phys[0][x].real();
        const double m1 = ws.u_phys[1][x].real();
        const double m2 = ws.u_phys[2][x].real();
        worst = std::max(worst, m0 * m0 + m1 * m1 + m2 * m2);
    }
    return std::sqrt(worst);
}

double grid_lp_norm(const SpectralField& field, const GridSpec& grid, double p) {
    if (std::isinf(p)) return grid_sup_norm(field, grid);
    if (!(p >= 1.0)) throw std::domain_error("grid_lp_norm: p must satisfy p >= 1");
    grid.validate();
    require_matching(field, grid, "grid_lp_norm");
    std::array<int, 3> dims;
    for (int j = 0; j < 3; ++j) dims[j] = field.extent(j) == 0 ? 1 : grid.m;
    const std::size_t total = static_cast<std::size_t>(dims[0]) * dims[1] * dims[2];
    auto& ws = workspace_for(dims);
    for (int c = 0; c < 3; ++c) {
        embed_component(field, c, dims, ws.staging.data());
        fft::backward(dims, ws.staging.data(), ws.u_phys[c].data());
        clear_box(field, dims, ws.staging.data());
    }
    double sum = 0.0;
    for (std::size_t x = 0; x < total; ++x) {
        const double m0 = ws.u_phys[0][x].real();
        const double m1 = ws.u_phys[1][x].real();
        const double m2 = ws.u_phys[2][x].real();
        sum += std::pow(std::sqrt(m0 * m0 + m1 * m1 + m2 * m2), p);
    }
    const double cell = kCellVolumeFactor / static_cast<double>(total);
    return std::pow(cell * sum, 1.0 / p);
}

std::vector<double> extract_x1_profile(const SpectralField& field, int m_points) {
    if (m_points < 2 * field.extent(0) + 1)
        throw ConfigError("extract_x1_profile: sample grid cannot resolve the retained modes");
    const int n = field.resolution();
    std::vector<double> out(m_points, 0.0);
    for (int j = 0; j < m_points; ++j) {
        const double x = kTwoPi * j / m_points;
        std::complex<double> sum = 0.0;
        for (int k2 = -field.extent(1); k2 <= field.extent(1); ++k2)
            for (int k3 = -field.extent(2); k3 <= field.extent(2); ++k3)
                for (int k1 = -field.extent(0); k1 <= field.extent(0); ++k1)
                    sum += field.at(0, k1 + n, k2 + n, k3 + n) *
                           std::polar(1.0, k1 * x);
        out[j] = sum.real();
    }
    return out;
}

void add_scaled(SpectralField& y, const SpectralField& x, double a) {
    const int n = y.resolution();
    if (x.resolution() != n) throw ConfigError("add_scaled: resolution mismatch");
    for (int c = 0; c < SpectralField::kComponents; ++c)
        for (int k1 = -x.extent(0); k1 <= x.extent(0); ++k1)
            for (int k2 = -x.extent(1); k2 <= x.extent(1); ++k2)
                for (int k3 = -x.extent(2); k3 <= x.extent(2); ++k3)
                    y.at(c, k1 + n, k2 + n, k3 + n) += a * x.at(c, k1 + n, k2 + n, k3 + n);
    y.set_extent(std::max(y.extent(0), x.extent(0)), std::max(y.extent(1), x.extent(1)),
                 std::max(y.extent(2), x.extent(2)));
}

void scale_in_place(SpectralField& field, double a) {
    const int n = field.resolution();
    for (int c = 0; c < SpectralField::kComponents; ++c)
        for (int k1 = -field.extent(0); k1 <= field.extent(0); ++k1)
            for (int k2 = -field.extent(1); k2 <= field.extent(1); ++k2)
                for (int k3 = -field.extent(2); k3 <= field.extent(2); ++k3)
                    field.at(c, k1 + n, k2 + n, k3 + n) *= a;
}

void clear_support(SpectralField& field) {
    const int n = field.resolution();
    for (int c = 0; c < SpectralField::kComponents; ++c)
        for (int k1 = -field.extent(0); k1 <= field.extent(0); ++k1)
            for (int k2 = -field.extent(1); k2 <= field.extent(1); ++k2)
                for (int k3 = -field.extent(2); k3 <= field.extent(2); ++k3)
                    field.at(c, k1 + n, k2 + n, k3 + n) = 0.0;
    field.set_extent(0, 0, 0);
}

void apply_heat_multiplier(SpectralField& field, double nu_dt) {
    const int n = field.resolution();
    for (int c = 0; c < SpectralField::kComponents; ++c)
        for (int k1 = -field.extent(0); k1 <= field.extent(0); ++k1)
            for (int k2 = -field.extent(1); k2 <= field.extent(1); ++k2)
                for (int k3 = -field.extent(2); k3 <= field.extent(2); ++k3) {
                    const double nsq =
                        static_cast<double>(WaveVector{k1, k2, k3}.norm_sq());
                    field.at(c, k1 + n, k2 + n, k3 + n) *= std::exp(-nu_dt * nsq);
                }
}

} // namespace burgers3d
