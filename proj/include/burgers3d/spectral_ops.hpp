#pragma once

#include "burgers3d/grid.hpp"
#include "burgers3d/spectral_field.hpp"

#include <array>

namespace burgers3d {

/// Forward transform: uniform samples -> Fourier coefficients of
/// f(x) = sum_k fhat_k e^{i k.x}, modes with |k|_inf > grid.n discarded.
/// Output is exactly Hermitian-symmetric.
SpectralField analyze(const PhysicalField& field, const GridSpec& grid);

/// Inverse transform onto the M^3 grid. Requires Hermitian symmetry
/// (residual above 1e-12 of the coefficient magnitude raises DataError);
/// the rounding-level imaginary residue is truncated.
PhysicalField synthesize(const SpectralField& field, const GridSpec& grid);

/// Mode-wise multiplier |k|^s (Euclidean |k|), s >= 0.
SpectralField lambda_pow(const SpectralField& field, double s);

/// Seminorm |Lambda^s f|_2 = ( (2pi)^3 sum_{k != 0} |k|^{2s} |fhat_k|^2 )^{1/2},
/// summed over the three components.
double seminorm(const SpectralField& field, double s);

/// |f|_2 under the same (2pi)^3 Parseval convention, k = 0 included.
double l2_norm(const SpectralField& field);

/// H^s norm in the sum form l2_norm(f) + seminorm(f, s).
double sobolev_norm(const SpectralField& field, double s);

/// Rectangle-rule quadrature of (int |f|^p dx)^{1/p} on the uniform grid;
/// p = infinity returns the max pointwise Euclidean magnitude.
double lp_norm(const PhysicalField& field, double p);

/// Galerkin projection P_n: keep modes with k1^2+k2^2+k3^2 <= n^2.
SpectralField galerkin_project(const SpectralField& field, int n);

/// Pseudo-spectral (u.grad)u: spectral derivatives, synthesis onto an
/// alias-free product grid, pointwise products, analysis, dealias mask.
/// The product grid adapts per axis to the spectral support (directions
/// with no content stay collapsed), which leaves the result unchanged but
/// makes effectively one-dimensional states cheap.
SpectralField convective_term(const SpectralField& u, const GridSpec& grid);

/// Allocation-free variant for integrator loops: writes into `out` (same
/// resolution), clearing only its previous support box.
void convective_term_into(const SpectralField& u, const GridSpec& grid, SpectralField& out);

/// (2pi)^3 times the k=0 coefficient; raises DataError if the zero mode
/// has an imaginary part above 1e-12.
std::array<double, 3> spatial_mean(const SpectralField& field);

/// |f|_infinity on the grid of `grid`, with directions that carry no
/// spectral content collapsed (equal to lp_norm(synthesize(f,grid), inf)).
double grid_sup_norm(const SpectralField& field, const GridSpec& grid);

/// lp_norm of the synthesized field, with the same exact collapse of
/// content-free directions.
double grid_lp_norm(const SpectralField& field, const GridSpec& grid, double p);

/// Samples of component 1 along the x1 axis (x2 = x3 = 0) on an m-point
/// grid; the 1D profile of an x1-only field.
std::vector<double> extract_x1_profile(const SpectralField& field, int m_points);

/// In-place helpers used by the integrators. add_scaled widens the support
/// box of y to cover x.
void add_scaled(SpectralField& y, const SpectralField& x, double a);
void scale_in_place(SpectralField& field, double a);
/// Zero the support box and collapse the extents.
void clear_support(SpectralField& field);
/// Multiply each mode by exp(-nu_dt |k|^2).
void apply_heat_multiplier(SpectralField& field, double nu_dt);

} // namespace burgers3d
