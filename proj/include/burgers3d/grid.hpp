#pragma once

#include <cstdint>

namespace burgers3d {

/// Fourier mode index on the torus [0,2pi)^3.
struct WaveVector {
    int k1 = 0;
    int k2 = 0;
    int k3 = 0;

    long long norm_sq() const {
        return static_cast<long long>(k1) * k1 + static_cast<long long>(k2) * k2 +
               static_cast<long long>(k3) * k3;
    }
    WaveVector operator-() const { return {-k1, -k2, -k3}; }
    bool operator==(const WaveVector& o) const = default;
};

enum class DealiasRule { two_thirds, none };

/// Spectral truncation N (max |k|_inf retained) paired with the physical
/// grid size M per axis. Torus side length is fixed at 2pi.
struct GridSpec {
    int n = 0;
    int m = 0;
    DealiasRule dealias = DealiasRule::two_thirds;

    /// Smallest even {2,3,5}-smooth integer >= lo (fast FFT sizes).
    static int next_fast_even(int lo);

    /// Grid with an alias-free product grid for truncation n: M >= 3N+1,
    /// rounded up to a fast even size.
    static GridSpec standard(int n, DealiasRule rule = DealiasRule::two_thirds);

    /// Minimum M for alias-free quadratic products at this truncation.
    int dealias_min_m() const { return 3 * n + 1; }

    /// Throws ConfigError on violated invariants (M even, M >= 2N+2 under
    /// the two-thirds rule).
    void validate() const;
};

} // namespace burgers3d
