#include "burgers3d/cole_hopf.hpp"

#include "burgers3d/errors.hpp"
#include "burgers3d/fft_backend.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace burgers3d {

namespace {

using cvec = std::vector<std::complex<double>>;

void fft1(cvec& inout, bool forward) {
    cvec out(inout.size());
    const std::array<int, 3> dims = {1, 1, static_cast<int>(inout.size())};
    if (forward)
        fft::forward(dims, inout.data(), out.data());
    else
        fft::backward(dims, inout.data(), out.data());
    inout = std::move(out);
}

inline int signed_mode(std::size_t idx, std::size_t m) {
    return idx <= m / 2 ? static_cast<int>(idx) : static_cast<int>(idx) - static_cast<int>(m);
}

/// Evaluate the profile at one internal resolution; returns samples on the
/// original input grid (input_m must divide resolution).
std::vector<double> evaluate(const cvec& u0_hat, std::size_t input_m, std::size_t resolution,
                             double nu, double t) {
    // Primitive of u0 on the fine grid: P_k = u0_k / (i k), k != 0.
    cvec primitive(resolution, {0.0, 0.0});
    const std::size_t half = u0_hat.size() / 2;
    for (std::size_t idx = 0; idx < u0_hat.size(); ++idx) {
        const int k = signed_mode(idx, u0_hat.size());
        if (k == 0) continue;
        if (static_cast<std::size_t>(std::abs(k)) > half) continue;
        const std::size_t fine_idx = k >= 0 ? static_cast<std::size_t>(k)
                                            : resolution + static_cast<std::size_t>(k);
        primitive[fine_idx] = u0_hat[idx] / std::complex<double>(0.0, k);
    }
    fft1(primitive, /*forward=*/false);

    // phi(0,x) = exp(-P(x)/(2 nu)); shift P by its minimum so the
    // exponential stays bounded (u is invariant under phi -> c*phi).
    double pmin = primitive[0].real();
    for (const auto& z : primitive) pmin = std::min(pmin, z.real());
    cvec phi(resolution);
    for (std::size_t j = 0; j < resolution; ++j)
        phi[j] = {std::exp(-(primitive[j].real() - pmin) / (2.0 * nu)), 0.0};

    fft1(phi, /*forward=*/true);
    const double norm = 1.0 / static_cast<double>(resolution);
    cvec dphi(resolution);
    for (std::size_t idx = 0; idx < resolution; ++idx) {
        const int k = signed_mode(idx, resolution);
        const double decay = std::exp(-nu * static_cast<double>(k) * k * t) * norm;
        phi[idx] *= decay;
        dphi[idx] = phi[idx] * std::complex<double>(0.0, k);
    }
    fft1(phi, /*forward=*/false);
    fft1(dphi, /*forward=*/false);

    std::vector<double> out(input_m);
    const std::size_t stride = resolution / input_m;
    for (std::size_t j = 0; j < input_m; ++j) {
        const auto& p = phi[j * stride];
        const auto& dp = dphi[j * stride];
        out[j] = -2.0 * nu * dp.real() / p.real();
    }
    return out;
}

} // namespace

std::vector<double> cole_hopf_oracle_1d(const std::vector<double>& u0_samples, double nu,
                                        double t) {
    if (u0_samples.size() < 2) throw std::domain_error("cole_hopf_oracle_1d: too few samples");
    if (!(nu > 0.0)) throw std::domain_error("cole_hopf_oracle_1d: nu must be positive");
    if (t < 0.0) throw std::domain_error("cole_hopf_oracle_1d: t must be nonnegative");
    const std::size_t m = u0_samples.size();

    cvec u0_hat(m);
    for (std::size_t j = 0; j < m; ++j) u0_hat[j] = {u0_samples[j], 0.0};
    fft1(u0_hat, /*forward=*/true);
    for (auto& z : u0_hat) z /= static_cast<double>(m);
    double scale = 0.0;
    for (const auto& z : u0_hat) scale = std::max(scale, std::abs(z));
    if (std::abs(u0_hat[0]) > 1e-10 * std::max(1.0, scale))
        throw std::domain_error("cole_hopf_oracle_1d: u0 must have zero mean");

    // Internal grid is m * 2^j so downsampling lands on the input points.
    std::size_t resolution = m;
    while (resolution < std::max<std::size_t>(1024, 4 * m)) resolution *= 2;
    std::vector<double> coarse = evaluate(u0_hat, m, resolution, nu, t);
    for (int level = 0; level < 4; ++level) {
        const std::vector<double> fine = evaluate(u0_hat, m, 2 * resolution, nu, t);
        double diff = 0.0, mag = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            diff = std::max(diff, std::fabs(fine[j] - coarse[j]));
            mag = std::max(mag, std::fabs(fine[j]));
        }
        if (diff <= 1e-8 * std::max(1.0, mag)) return fine;
        resolution *= 2;
        coarse = fine;
    }
    throw NumericalFailure("cole_hopf_oracle_1d: self-convergence not reached", t);
}

} // namespace burgers3d
