#pragma once

#include "burgers3d/grid.hpp"
#include "burgers3d/spectral_field.hpp"

#include <cstdint>
#include <string>

namespace burgers3d {

enum class InitialFamily { single_mode, sine_shear, random_smooth };

/// Initial-condition library. sine_shear is amplitude*sin(x1) in component 1
/// (also the 1D embedding used against the Cole-Hopf oracle); random_smooth
/// draws Hermitian coefficients with an |k|^-decay_r envelope, normalized so
/// |u0|_inf equals amplitude.
struct InitialCondition {
    InitialFamily family = InitialFamily::sine_shear;
    double amplitude = 1.0;
    WaveVector mode{1, 0, 0}; // single_mode only
    int component = 0;        // single_mode only
    double decay_r = 4.0;     // random_smooth only
    std::uint64_t seed = 0;   // random_smooth only

    SpectralField build(const GridSpec& grid) const;
};

InitialFamily parse_initial_family(const std::string& name);
std::string to_string(InitialFamily family);

} // namespace burgers3d
