#include "manitomo/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

namespace manitomo {
namespace {

constexpr const char* kFieldMagic = "manitomo-field 1";
constexpr const char* kSinoMagic = "manitomo-sino 1";

void check_finite(const FieldMatrix<double>& data, const char* what) {
  if (!data.allFinite()) throw std::invalid_argument(std::string(what) + " contains non-finite values");
}

void write_rows(std::ostream& out, const FieldMatrix<double>& data) {
  std::string line;
  for (Eigen::Index r = 0; r < data.rows(); ++r) {
    line.clear();
    for (Eigen::Index c = 0; c < data.cols(); ++c) {
      if (c) line += ' ';
      line += format_decimal(data(r, c));
    }
    line += '\n';
    out << line;
  }
}

class LineReader {
public:
  explicit LineReader(std::istream& in) : in_(in) {}

  std::string next(const char* expecting) {
    std::string line;
    if (!std::getline(in_, line)) throw ParseError(number_ + 1, std::string("unexpected end of file, expected ") + expecting);
    ++number_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
  }

  std::size_t number() const { return number_; }

  void expect_end() {
    std::string line;
    while (std::getline(in_, line)) {
      ++number_;
      if (line.find_first_not_of(" \t\r") != std::string::npos) throw ParseError(number_, "trailing data after last row");
    }
  }

private:
  std::istream& in_;
  std::size_t number_ = 0;
};

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) ++pos;
    if (pos >= line.size()) break;
    std::size_t end = pos;
    while (end < line.size() && line[end] != ' ' && line[end] != '\t') ++end;
    tokens.push_back(line.substr(pos, end - pos));
    pos = end;
  }
  return tokens;
}

double parse_double(std::string_view token, std::size_t line) {
  double value = 0.0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  if (!token.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) throw ParseError(line, "malformed number '" + std::string(token) + "'");
  if (!std::isfinite(value)) throw ParseError(line, "non-finite value '" + std::string(token) + "'");
  return value;
}

long parse_positive(std::string_view token, std::size_t line, const char* what) {
  long value = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size() || value <= 0) {
    throw ParseError(line, std::string("invalid ") + what + " '" + std::string(token) + "'");
  }
  return value;
}

void read_body(LineReader& reader, FieldMatrix<double>& data) {
  for (Eigen::Index r = 0; r < data.rows(); ++r) {
    const std::string line = reader.next("data row");
    const auto tokens = split(line);
    if (static_cast<Eigen::Index>(tokens.size()) != data.cols()) {
      throw ParseError(reader.number(), "expected " + std::to_string(data.cols()) + " values, found " +
                                            std::to_string(tokens.size()));
    }
    for (Eigen::Index c = 0; c < data.cols(); ++c) data(r, c) = parse_double(tokens[c], reader.number());
  }
  reader.expect_end();
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(0, "cannot open '" + path.string() + "' for reading");
  return in;
}

}  // namespace

std::string format_decimal(double value) {
  char buffer[32];
  const int n = std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return std::string(buffer, static_cast<std::size_t>(n));
}

void write_field(std::ostream& out, const VectorField& field) {
  check_finite(field.data(), "field");
  out << kFieldMagic << '\n'
      << field.grid().height() << ' ' << field.grid().width() << ' ' << field.channels() << '\n';
  write_rows(out, field.data());
}

void write_field(const std::filesystem::path& path, const VectorField& field) {
  auto out = open_out(path);
  write_field(out, field);
  if (!out) throw std::runtime_error("write to '" + path.string() + "' failed");
}

VectorField read_field(std::istream& in, double extent) {
  LineReader reader(in);
  if (reader.next("header") != kFieldMagic) throw ParseError(1, "expected header 'manitomo-field 1'");
  const std::string header = reader.next("dimensions");
  const auto dims = split(header);
  if (dims.size() != 3) throw ParseError(2, "expected 'H W m'");
  const long h = parse_positive(dims[0], 2, "height");
  const long w = parse_positive(dims[1], 2, "width");
  const long m = parse_positive(dims[2], 2, "channel count");
  if (h != w) throw ParseError(2, "only square grids are supported");
  if (h < 2) throw ParseError(2, "grid size must be at least 2");
  const Grid grid(static_cast<int>(h), extent);
  FieldMatrix<double> data(grid.pixels(), m);
  read_body(reader, data);
  return {grid, std::move(data)};
}

VectorField read_field(const std::filesystem::path& path, double extent) {
  auto in = open_in(path);
  return read_field(in, extent);
}

void write_sinogram(std::ostream& out, const Sinogram& sino) {
  check_finite(sino.data(), "sinogram");
  out << kSinoMagic << '\n'
      << sino.offsets_count() << ' ' << sino.angles_count() << ' ' << sino.channels() << ' '
      << format_decimal(sino.extent()) << '\n';
  write_rows(out, sino.data());
}

void write_sinogram(const std::filesystem::path& path, const Sinogram& sino) {
  auto out = open_out(path);
  write_sinogram(out, sino);
  if (!out) throw std::runtime_error("write to '" + path.string() + "' failed");
}

Sinogram read_sinogram(std::istream& in) {
  LineReader reader(in);
  if (reader.next("header") != kSinoMagic) throw ParseError(1, "expected header 'manitomo-sino 1'");
  const std::string header = reader.next("dimensions");
  const auto dims = split(header);
  if (dims.size() != 4) throw ParseError(2, "expected 'n_r n_phi M extent'");
  const long n_r = parse_positive(dims[0], 2, "offset count");
  const long n_phi = parse_positive(dims[1], 2, "angle count");
  const long m = parse_positive(dims[2], 2, "channel count");
  const double extent = parse_double(dims[3], 2);
  if (n_r < 2) throw ParseError(2, "need at least 2 offsets");
  if (!(extent > 0.0)) throw ParseError(2, "extent must be positive");
  FieldMatrix<double> data(n_r * n_phi, m);
  read_body(reader, data);
  return {static_cast<int>(n_r), static_cast<int>(n_phi), extent, std::move(data)};
}

Sinogram read_sinogram(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_sinogram(in);
}

VectorField as_field(const AngleField& angles) {
  return {angles.grid(), FieldMatrix<double>(angles.data())};
}

AngleField as_angles(const VectorField& field, bool normalized) {
  if (field.channels() != 1) throw std::invalid_argument("angle field must have exactly one channel");
  return {field.grid(), AngleField::Values(field.data().col(0)), normalized};
}

}  // namespace manitomo
