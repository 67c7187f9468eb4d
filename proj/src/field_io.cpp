#include "burgers3d/field_io.hpp"

#include "burgers3d/errors.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <ostream>

namespace burgers3d {

namespace {

constexpr char kMagic[4] = {'B', '3', 'D', 'S'};
constexpr std::uint32_t kFormatVersion = 1;

// This codebase targets little-endian hosts; the format is little-endian
// by definition.
static_assert(std::endian::native == std::endian::little,
              "field container assumes a little-endian host");

void put_u32(std::ostream& out, std::uint32_t v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

std::uint32_t get_u32(std::istream& in) {
    std::uint32_t v = 0;
    in.read(reinterpret_cast<char*>(&v), sizeof v);
    return v;
}

} // namespace

void write_field_binary(const SpectralField& field, std::ostream& out) {
    out.write(kMagic, sizeof kMagic);
    put_u32(out, kFormatVersion);
    put_u32(out, static_cast<std::uint32_t>(field.resolution()));
    put_u32(out, SpectralField::kComponents);
    const int n = field.resolution();
    for (int k1 = -n; k1 <= n; ++k1)
        for (int k2 = -n; k2 <= n; ++k2)
            for (int k3 = -n; k3 <= n; ++k3)
                for (int c = 0; c < SpectralField::kComponents; ++c) {
                    const auto z = field.at(c, k1 + n, k2 + n, k3 + n);
                    const double re = z.real(), im = z.imag();
                    out.write(reinterpret_cast<const char*>(&re), sizeof re);
                    out.write(reinterpret_cast<const char*>(&im), sizeof im);
                }
    if (!out) throw DataError("write_field_binary: stream failure");
}

SpectralField read_field_binary(std::istream& in) {
    char magic[4];
    in.read(magic, sizeof magic);
    if (!in || std::memcmp(magic, kMagic, sizeof kMagic) != 0)
        throw DataError("read_field_binary: bad magic, not a B3DS container");
    const std::uint32_t version = get_u32(in);
    if (version != kFormatVersion)
        throw DataError("read_field_binary: unsupported container version");
    const std::uint32_t n = get_u32(in);
    const std::uint32_t comps = get_u32(in);
    if (comps != SpectralField::kComponents)
        throw DataError("read_field_binary: unexpected component count");
    SpectralField field(static_cast<int>(n));
    const int nn = static_cast<int>(n);
    for (int k1 = -nn; k1 <= nn; ++k1)
        for (int k2 = -nn; k2 <= nn; ++k2)
            for (int k3 = -nn; k3 <= nn; ++k3)
                for (int c = 0; c < SpectralField::kComponents; ++c) {
                    double re = 0, im = 0;
                    in.read(reinterpret_cast<char*>(&re), sizeof re);
                    in.read(reinterpret_cast<char*>(&im), sizeof im);
                    field.at(c, k1 + nn, k2 + nn, k3 + nn) = {re, im};
                }
    if (!in) throw DataError("read_field_binary: truncated container");
    field.set_extent(nn, nn, nn);
    field.tighten();
    return field;
}

void write_field_binary_file(const SpectralField& field, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open for writing: " + path);
    write_field_binary(field, out);
}

SpectralField read_field_binary_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open for reading: " + path);
    return read_field_binary(in);
}

void write_field_text(const SpectralField& field, std::ostream& out) {
    const int n = field.resolution();
    char line[128];
    for (int k1 = -n; k1 <= n; ++k1)
        for (int k2 = -n; k2 <= n; ++k2)
            for (int k3 = -n; k3 <= n; ++k3)
                for (int c = 0; c < SpectralField::kComponents; ++c) {
                    const auto z = field.at(c, k1 + n, k2 + n, k3 + n);
                    std::snprintf(line, sizeof line, "%d %d %d %d %.17g %.17g\n", k1, k2, k3, c,
                                  z.real(), z.imag());
                    out << line;
                }
}

} // namespace burgers3d
