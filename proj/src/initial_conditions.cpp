#include "burgers3d/initial_conditions.hpp"

#include "burgers3d/errors.hpp"
#include "burgers3d/rng.hpp"
#include "burgers3d/spectral_ops.hpp"

#include <cmath>
#include <complex>

namespace burgers3d {

namespace {

SpectralField build_single_mode(const GridSpec& grid, const WaveVector& k, int component,
                                double amplitude) {
    SpectralField f(grid.n);
    if (component < 0 || component >= SpectralField::kComponents)
        throw ConfigError("single_mode: component out of range");
    // amplitude * cos(k.x) in the chosen component
    f.set_coeff(component, k, {0.5 * amplitude, 0.0});
    f.set_coeff(component, -k, {0.5 * amplitude, 0.0});
    return f;
}

SpectralField build_sine_shear(const GridSpec& grid, double amplitude) {
    SpectralField f(grid.n);
    // amplitude * sin(x1) in component 1: coefficients -+ i a/2 at k1 = +-1
    f.set_coeff(0, {1, 0, 0}, {0.0, -0.5 * amplitude});
    f.set_coeff(0, {-1, 0, 0}, {0.0, 0.5 * amplitude});
    return f;
}

SpectralField build_random_smooth(const GridSpec& grid, double amplitude, double decay_r,
                                  std::uint64_t seed) {
    SpectralField f(grid.n);
    const int n = grid.n;
    std::uint64_t draw = 0;
    for (int c = 0; c < SpectralField::kComponents; ++c)
        for (int k1 = -n; k1 <= n; ++k1)
            for (int k2 = -n; k2 <= n; ++k2)
                for (int k3 = -n; k3 <= n; ++k3) {
                    const WaveVector k{k1, k2, k3};
                    if (k.norm_sq() == 0) {
                        draw += 2;
                        continue;
                    }
                    const double envelope =
                        std::pow(static_cast<double>(k.norm_sq()), -0.5 * decay_r);
                    const double re = normal_draw(seed, /*stream=*/7, draw++);
                    const double im = normal_draw(seed, /*stream=*/7, draw++);
                    f.at(c, k1 + n, k2 + n, k3 + n) =
                        std::complex<double>(re, im) * envelope;
                }
    f.set_extent(n, n, n);
    f.enforce_hermitian();
    const double sup = grid_sup_norm(f, grid);
    if (sup > 0.0) scale_in_place(f, amplitude / sup);
    return f;
}

} // namespace

SpectralField InitialCondition::build(const GridSpec& grid) const {
    switch (family) {
        case InitialFamily::single_mode:
            return build_single_mode(grid, mode, component, amplitude);
        case InitialFamily::sine_shear:
            return build_sine_shear(grid, amplitude);
        case InitialFamily::random_smooth:
            return build_random_smooth(grid, amplitude, decay_r, seed);
    }
    throw ConfigError("unknown initial-condition family");
}

InitialFamily parse_initial_family(const std::string& name) {
    if (name == "single_mode") return InitialFamily::single_mode;
    if (name == "sine_shear") return InitialFamily::sine_shear;
    if (name == "random_smooth") return InitialFamily::random_smooth;
    throw ConfigError("unknown initial-condition family: " + name);
}

std::string to_string(InitialFamily family) {
    switch (family) {
        case InitialFamily::single_mode: return "single_mode";
        case InitialFamily::sine_shear: return "sine_shear";
        case InitialFamily::random_smooth: return "random_smooth";
    }
    return "?";
}

} // namespace burgers3d
