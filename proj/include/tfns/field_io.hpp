#pragma once

#include <string>
#include <utility>
#include <vector>

#include "tfns/field.hpp"

namespace tfns::io {

// Binary field format, little-endian throughout:
//   bytes 0..7   magic "TFNSFLD1"
//   u32          format version (1)
//   u32          dim
//   u32          points per axis
//   u32          component count
//   f64          time stamp
//   then component-major complex coefficients, each mode as two f64 (re, im),
//   flat index order as defined by TorusGrid.
inline constexpr char kFieldMagic[8] = {'T', 'F', 'N', 'S', 'F', 'L', 'D', '1'};

struct StampedField {
    SpectralField field;
    double time = 0.0;
};

void write_field(const std::string& path, const SpectralField& u, double time);
StampedField read_field(const std::string& path);

// Deterministic CSV cell for a double: shortest round-trippable decimal via
// %.17g. Reproducibility tests byte-compare these files.
std::string csv_cell(double x);

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

// Two-column (t, value) CSV with a one-line header; used by the signal
// subcommands.
std::vector<std::pair<double, double>> read_signal_csv(const std::string& path);

}  // namespace tfns::io
