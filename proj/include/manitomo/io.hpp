#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include "manitomo/grid.hpp"

namespace manitomo {

/// Malformed input file. `line()` is 1-based; 0 when the file itself is unreadable.
class ParseError : public std::runtime_error {
public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::size_t line() const { return line_; }

private:
  std::size_t line_;
};

/// 17 significant digits: parses back to the identical double.
std::string format_decimal(double value);

// Field files:
//   manitomo-field 1
//   H W m
//   H*W lines of m decimals, row-major.
// The format carries no extent; readers supply it.
void write_field(std::ostream& out, const VectorField& field);
void write_field(const std::filesystem::path& path, const VectorField& field);
VectorField read_field(std::istream& in, double extent = 1.0);
VectorField read_field(const std::filesystem::path& path, double extent = 1.0);

// Sinogram files:
//   manitomo-sino 1
//   n_r n_phi M extent
//   n_r*n_phi lines of M decimals, offset-major.
void write_sinogram(std::ostream& out, const Sinogram& sino);
void write_sinogram(const std::filesystem::path& path, const Sinogram& sino);
Sinogram read_sinogram(std::istream& in);
Sinogram read_sinogram(const std::filesystem::path& path);

/// Angle fields are stored as single-channel field files.
VectorField as_field(const AngleField& angles);
AngleField as_angles(const VectorField& field, bool normalized);

}  // namespace manitomo
