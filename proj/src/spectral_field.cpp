#include "burgers3d/spectral_field.hpp"

#include "burgers3d/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace burgers3d {

SpectralField::SpectralField(int resolution) : n_(resolution) {
    if (resolution < 0) throw ConfigError("SpectralField: resolution must be nonnegative");
    const std::size_t s = static_cast<std::size_t>(side());
    data_.assign(static_cast<std::size_t>(kComponents) * s * s * s, {0.0, 0.0});
}

void SpectralField::set_extent(int e1, int e2, int e3) {
    ext_ = {std::clamp(e1, 0, n_), std::clamp(e2, 0, n_), std::clamp(e3, 0, n_)};
}

void SpectralField::tighten() {
    std::array<int, 3> t = {0, 0, 0};
    for (int c = 0; c < kComponents; ++c)
        for (int i1 = n_ - ext_[0]; i1 <= n_ + ext_[0]; ++i1)
            for (int i2 = n_ - ext_[1]; i2 <= n_ + ext_[1]; ++i2)
                for (int i3 = n_ - ext_[2]; i3 <= n_ + ext_[2]; ++i3) {
                    const auto& z = at(c, i1, i2, i3);
                    if (z.real() != 0.0 || z.imag() != 0.0) {
                        t[0] = std::max(t[0], std::abs(i1 - n_));
                        t[1] = std::max(t[1], std::abs(i2 - n_));
                        t[2] = std::max(t[2], std::abs(i3 - n_));
                    }
                }
    ext_ = t;
}

std::complex<double> SpectralField::coeff(int comp, const WaveVector& k) const {
    if (std::abs(k.k1) > n_ || std::abs(k.k2) > n_ || std::abs(k.k3) > n_) return {0.0, 0.0};
    return at(comp, k.k1 + n_, k.k2 + n_, k.k3 + n_);
}

void SpectralField::set_coeff(int comp, const WaveVector& k, std::complex<double> value) {
    if (std::abs(k.k1) > n_ || std::abs(k.k2) > n_ || std::abs(k.k3) > n_)
        throw DataError("SpectralField: mode outside the retained cube");
    at(comp, k.k1 + n_, k.k2 + n_, k.k3 + n_) = value;
    ext_[0] = std::max(ext_[0], std::abs(k.k1));
    ext_[1] = std::max(ext_[1], std::abs(k.k2));
    ext_[2] = std::max(ext_[2], std::abs(k.k3));
}

void SpectralField::clear() {
    std::fill(data_.begin(), data_.end(), std::complex<double>{0.0, 0.0});
    ext_ = {0, 0, 0};
}

double SpectralField::hermitian_residual() const {
    double worst = 0.0;
    for (int c = 0; c < kComponents; ++c)
        for (int i1 = n_ - ext_[0]; i1 <= n_ + ext_[0]; ++i1)
            for (int i2 = n_ - ext_[1]; i2 <= n_ + ext_[1]; ++i2)
                for (int i3 = n_ - ext_[2]; i3 <= n_ + ext_[2]; ++i3) {
                    const auto z = at(c, i1, i2, i3);
                    const auto w = at(c, 2 * n_ - i1, 2 * n_ - i2, 2 * n_ - i3);
                    worst = std::max(worst, std::abs(z - std::conj(w)));
                }
    return worst;
}

void SpectralField::enforce_hermitian() {
    for (int c = 0; c < kComponents; ++c)
        for (int i1 = n_ - ext_[0]; i1 <= n_ + ext_[0]; ++i1)
            for (int i2 = n_ - ext_[1]; i2 <= n_ + ext_[1]; ++i2)
                for (int i3 = n_ - ext_[2]; i3 <= n_ + ext_[2]; ++i3) {
                    auto& z = at(c, i1, i2, i3);
                    auto& w = at(c, 2 * n_ - i1, 2 * n_ - i2, 2 * n_ - i3);
                    if (&z == &w) {
                        z = {z.real(), 0.0};
                        continue;
                    }
                    const auto sym = 0.5 * (z + std::conj(w));
                    z = sym;
                    w = std::conj(sym);
                }
}

double SpectralField::max_abs_coeff() const {
    double worst = 0.0;
    for (int c = 0; c < kComponents; ++c)
        for (int i1 = n_ - ext_[0]; i1 <= n_ + ext_[0]; ++i1)
            for (int i2 = n_ - ext_[1]; i2 <= n_ + ext_[1]; ++i2)
                for (int i3 = n_ - ext_[2]; i3 <= n_ + ext_[2]; ++i3)
                    worst = std::max(worst, std::abs(at(c, i1, i2, i3)));
    return worst;
}

bool SpectralField::all_finite() const {
    for (int c = 0; c < kComponents; ++c)
        for (int i1 = n_ - ext_[0]; i1 <= n_ + ext_[0]; ++i1)
            for (int i2 = n_ - ext_[1]; i2 <= n_ + ext_[1]; ++i2)
                for (int i3 = n_ - ext_[2]; i3 <= n_ + ext_[2]; ++i3) {
                    const auto z = at(c, i1, i2, i3);
                    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
                }
    return true;
}

} // namespace burgers3d
