#pragma once

#include <vector>

namespace burgers3d {

/// Closed-form reference for deterministic 1D viscous Burgers on [0,2pi):
/// u = -2 nu d_x log(phi) with phi solving the heat equation from
/// phi(0) = exp(-(1/2nu) int u0). Input and output are samples on the
/// uniform grid x_j = 2pi j / M; u0 must have zero mean. The internal
/// spectral resolution is doubled until two consecutive levels agree to
/// 1e-8, so the returned profile is accurate to that level.
std::vector<double> cole_hopf_oracle_1d(const std::vector<double>& u0_samples, double nu,
                                        double t);

} // namespace burgers3d
