#include "tfns/field_io.hpp"

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "tfns/errors.hpp"

namespace tfns::io {

namespace {

constexpr std::uint32_t kFormatVersion = 1;

void put_u32(std::ofstream& os, std::uint32_t v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

void put_f64(std::ofstream& os, double v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

std::uint32_t get_u32(std::ifstream& is, const std::string& path) {
    std::uint32_t v = 0;
    if (!is.read(reinterpret_cast<char*>(&v), sizeof v)) throw io_error(path + ": truncated header");
    return v;
}

double get_f64(std::ifstream& is, const std::string& path) {
    double v = 0.0;
    if (!is.read(reinterpret_cast<char*>(&v), sizeof v)) throw io_error(path + ": truncated data");
    return v;
}

}  // namespace

void write_field(const std::string& path, const SpectralField& u, double time) {
    validate(u);
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw io_error(path + ": cannot open for writing");
    os.write(kFieldMagic, sizeof kFieldMagic);
    put_u32(os, kFormatVersion);
    put_u32(os, static_cast<std::uint32_t>(u.grid.dim));
    put_u32(os, static_cast<std::uint32_t>(u.grid.m));
    put_u32(os, static_cast<std::uint32_t>(u.n_comps()));
    put_f64(os, time);
    for (const auto& comp : u.comps)
        for (const Complex& z : comp) {
            put_f64(os, z.real());
            put_f64(os, z.imag());
        }
    if (!os) throw io_error(path + ": write failed");
}

StampedField read_field(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw io_error(path + ": cannot open for reading");
    char magic[sizeof kFieldMagic];
    if (!is.read(magic, sizeof magic) || std::memcmp(magic, kFieldMagic, sizeof magic) != 0)
        throw io_error(path + ": not a field file");
    const std::uint32_t version = get_u32(is, path);
    if (version != kFormatVersion)
        throw io_error(path + ": unsupported format version " + std::to_string(version));
    const std::uint32_t dim = get_u32(is, path);
    const std::uint32_t m = get_u32(is, path);
    const std::uint32_t n_comps = get_u32(is, path);
    if (n_comps < 1 || n_comps > 16) throw io_error(path + ": implausible component count");

    StampedField out;
    out.time = get_f64(is, path);
    try {
        out.field = SpectralField::zeros(TorusGrid::make(static_cast<int>(dim), static_cast<int>(m)),
                                         static_cast<int>(n_comps));
    } catch (const std::domain_error& e) {
        throw io_error(path + ": " + e.what());
    }
    for (auto& comp : out.field.comps)
        for (Complex& z : comp) {
            const double re = get_f64(is, path);
            const double im = get_f64(is, path);
            z = Complex{re, im};
        }
    try {
        validate(out.field);
    } catch (const std::domain_error& e) {
        throw io_error(path + ": " + e.what());
    }
    return out;
}

std::string csv_cell(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
    std::ofstream os(path, std::ios::trunc);
    if (!os) throw io_error(path + ": cannot open for writing");
    for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
    os << "\n";
    for (const auto& row : rows) {
        if (row.size() != header.size()) throw io_error(path + ": ragged CSV row");
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
        os << "\n";
    }
    if (!os) throw io_error(path + ": write failed");
}

std::vector<std::pair<double, double>> read_signal_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw io_error(path + ": cannot open for reading");
    std::string line;
    if (!std::getline(is, line)) throw io_error(path + ": empty file");
    std::vector<std::pair<double, double>> out;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const std::size_t comma = line.find(',');
        if (comma == std::string::npos) throw io_error(path + ": expected two comma-separated columns");
        char* end = nullptr;
        const double t = std::strtod(line.c_str(), &end);
        const double v = std::strtod(line.c_str() + comma + 1, &end);
        out.emplace_back(t, v);
    }
    if (out.empty()) throw io_error(path + ": no data rows");
    return out;
}

}  // namespace tfns::io
