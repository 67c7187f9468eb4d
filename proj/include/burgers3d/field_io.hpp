#pragma once

#include "burgers3d/spectral_field.hpp"

#include <iosfwd>
#include <string>

namespace burgers3d {

/// Binary container: magic "B3DS", u32 version, u32 N, u32 component count,
/// then coefficients in lexicographic (k1,k2,k3) order, per mode the three
/// components as little-endian f64 (re, im) pairs.
void write_field_binary(const SpectralField& field, std::ostream& out);
SpectralField read_field_binary(std::istream& in);
void write_field_binary_file(const SpectralField& field, const std::string& path);
SpectralField read_field_binary_file(const std::string& path);

/// Plain-text dump, one line per stored mode and component:
/// "k1 k2 k3 comp re im".
void write_field_text(const SpectralField& field, std::ostream& out);

} // namespace burgers3d
