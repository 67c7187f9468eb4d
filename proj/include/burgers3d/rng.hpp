#pragma once

#include <array>
#include <cstdint>

namespace burgers3d {

/// Philox4x64-10 counter-based generator (Salmon et al., SC'11), the same
/// variant numpy.random.Philox implements. Output is a pure function of
/// (key, counter), so streams sliced by seed / stream id / draw index are
/// reproducible across platforms and thread counts. Pinned: changing this
/// generator or the normal inverse CDF below is a breaking format change.
struct Philox4x64 {
    static std::array<std::uint64_t, 4> block(const std::array<std::uint64_t, 2>& key,
                                              const std::array<std::uint64_t, 4>& counter);
};

/// One uniform double in (0,1) from lane 0 of the block addressed by
/// (seed, stream, index). Never returns 0 or 1.
double uniform_draw(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

/// Standard normal via the inverse CDF (Wichura's AS241 PPND16, ~1e-15
/// relative accuracy), applied to uniform_draw. Deterministic per
/// (seed, stream, index).
double normal_draw(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

/// Inverse of the standard normal CDF on (0,1).
double normal_inverse_cdf(double p);

/// SplitMix64 finalizer; used to derive per-path seeds from a base seed.
std::uint64_t splitmix64(std::uint64_t x);

} // namespace burgers3d
