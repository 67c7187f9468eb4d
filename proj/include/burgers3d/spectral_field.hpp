#pragma once

#include "burgers3d/grid.hpp"

#include <array>
#include <complex>
#include <cstddef>
#include <vector>

namespace burgers3d {

/// Three-component velocity field stored as Fourier coefficients on the
/// cube |k|_inf <= N. Coefficients follow f(x) = sum_k fhat_k e^{i k.x}.
///
/// Alongside the dense cube the field tracks a conservative support box
/// (max |k_j| that may hold a nonzero coefficient); kernels loop over the
/// box only, which is what makes effectively 1D/2D states cheap at large N.
class SpectralField {
  public:
    static constexpr int kComponents = 3;

    SpectralField() = default;
    explicit SpectralField(int resolution);

    int resolution() const { return n_; }
    int side() const { return 2 * n_ + 1; }

    /// Support extents: coefficients vanish wherever |k_j| > extent(j).
    int extent(int axis) const { return ext_[axis]; }
    void set_extent(int e1, int e2, int e3);
    /// Shrink extents to the actual nonzero support.
    void tighten();

    std::complex<double> coeff(int comp, const WaveVector& k) const;
    void set_coeff(int comp, const WaveVector& k, std::complex<double> value);

    /// Raw access; index arguments are offsets in [0, 2N].
    std::complex<double>& at(int comp, int i1, int i2, int i3) {
        return data_[offset(comp, i1, i2, i3)];
    }
    const std::complex<double>& at(int comp, int i1, int i2, int i3) const {
        return data_[offset(comp, i1, i2, i3)];
    }

    void clear();
    bool empty() const { return data_.empty(); }

    /// Max |fhat(k) - conj(fhat(-k))| over the support box.
    double hermitian_residual() const;
    /// Symmetrize: fhat(k) <- (fhat(k) + conj(fhat(-k)))/2.
    void enforce_hermitian();
    double max_abs_coeff() const;
    bool all_finite() const;

    const std::vector<std::complex<double>>& data() const { return data_; }
    std::vector<std::complex<double>>& data() { return data_; }

  private:
    std::size_t offset(int comp, int i1, int i2, int i3) const {
        const std::size_t s = static_cast<std::size_t>(side());
        return ((static_cast<std::size_t>(comp) * s + i1) * s + i2) * s + i3;
    }

    int n_ = 0;
    std::array<int, 3> ext_ = {0, 0, 0};
    std::vector<std::complex<double>> data_;
};

/// Real velocity samples on the uniform M^3 grid x_j = 2pi j / M.
struct PhysicalField {
    int m = 0;
    std::vector<double> values; // component-major, then x1-major

    PhysicalField() = default;
    explicit PhysicalField(int m_points)
        : m(m_points),
          values(static_cast<std::size_t>(SpectralField::kComponents) * m_points * m_points *
                 m_points) {}

    double& at(int comp, int j1, int j2, int j3) {
        return values[((static_cast<std::size_t>(comp) * m + j1) * m + j2) * m + j3];
    }
    double at(int comp, int j1, int j2, int j3) const {
        return values[((static_cast<std::size_t>(comp) * m + j1) * m + j2) * m + j3];
    }
};

} // namespace burgers3d
