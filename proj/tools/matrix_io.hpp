#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include "ranksieve/model.hpp"

namespace ranksieve::cli {

/// Malformed or unreadable input file.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// CSV: UTF-8 text, no header, one sample per line, comma separated.
//
// RSMX: little-endian binary.
//   bytes  0..3   ASCII "RSMX"
//   bytes  4..7   u32 rows
//   bytes  8..11  u32 cols
//   bytes 12..15  u32 reserved, written as 0
//   then rows*cols IEEE-754 float64 values, row-major.
//
// The reader picks the format from the first four bytes, not the extension.

Matrix read_matrix(const std::filesystem::path& path);

/// Accepts an n x 1 or 1 x n matrix in either format.
Vector read_vector(const std::filesystem::path& path);

void write_matrix_csv(const std::filesystem::path& path, const Matrix& m);
void write_matrix_rsmx(const std::filesystem::path& path, const Matrix& m);
void write_vector_csv(const std::filesystem::path& path, const Vector& v);

/// Shortest text that reads back to the same double.
std::string format_double(double v);

}  // namespace ranksieve::cli
