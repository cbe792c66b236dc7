#include "matrix_io.hpp"

#include <array>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

namespace ranksieve::cli {
namespace {

constexpr std::array<char, 4> kMagic{'R', 'S', 'M', 'X'};

std::uint32_t load_u32(const unsigned char* p) {
  return std::uint32_t{p[0]} | std::uint32_t{p[1]} << 8 | std::uint32_t{p[2]} << 16 |
         std::uint32_t{p[3]} << 24;
}

void store_u32(unsigned char* p, std::uint32_t v) {
  for (int k = 0; k < 4; ++k) p[k] = static_cast<unsigned char>(v >> (8 * k));
}

double load_f64(const unsigned char* p) {
  std::uint64_t bits = 0;
  for (int k = 7; k >= 0; --k) bits = bits << 8 | p[k];
  double v;
  std::memcpy(&v, &bits, sizeof v);
  return v;
}

void store_f64(unsigned char* p, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, sizeof v);
  for (int k = 0; k < 8; ++k) p[k] = static_cast<unsigned char>(bits >> (8 * k));
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return std::move(ss).str();
}

Matrix parse_rsmx(const std::string& bytes, const std::string& name) {
  if (bytes.size() < 16) throw ParseError(name + ": truncated RSMX header");
  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
  const std::uint64_t rows = load_u32(p + 4);
  const std::uint64_t cols = load_u32(p + 8);
  if (bytes.size() != 16 + 8 * rows * cols)
    throw ParseError(name + ": RSMX payload size does not match " + std::to_string(rows) + "x" +
                     std::to_string(cols));
  Matrix m(static_cast<Index>(rows), static_cast<Index>(cols));
  const unsigned char* data = p + 16;
  for (std::uint64_t i = 0; i < rows; ++i)
    for (std::uint64_t j = 0; j < cols; ++j)
      m(static_cast<Index>(i), static_cast<Index>(j)) = load_f64(data + 8 * (i * cols + j));
  return m;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

Matrix parse_csv(const std::string& text, const std::string& name) {
  std::vector<double> values;
  Index cols = -1;
  Index rows = 0;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  // tolerate a UTF-8 byte order mark
  if (text.rfind("\xEF\xBB\xBF", 0) == 0) pos = 3;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string::npos) end = text.size();
    std::string_view line = trim(std::string_view(text).substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (line.empty()) continue;
    Index count = 0;
    while (true) {
      const std::size_t comma = line.find(',');
      const std::string_view cell = trim(line.substr(0, comma));
      double v = 0;
      const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size())
        throw ParseError(name + ":" + std::to_string(line_no) + ": bad number '" +
                         std::string(cell) + "'");
      values.push_back(v);
      ++count;
      if (comma == std::string_view::npos) break;
      line.remove_prefix(comma + 1);
    }
    if (cols < 0) cols = count;
    if (count != cols)
      throw ParseError(name + ":" + std::to_string(line_no) + ": expected " +
                       std::to_string(cols) + " columns, found " + std::to_string(count));
    ++rows;
  }
  if (rows == 0) throw ParseError(name + ": no data");
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) m(i, j) = values[static_cast<std::size_t>(i * cols + j)];
  return m;
}

void write_bytes(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace

std::string format_double(double v) {
  std::array<char, 32> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

Matrix read_matrix(const std::filesystem::path& path) {
  const std::string bytes = slurp(path);
  if (bytes.size() >= 4 && std::memcmp(bytes.data(), kMagic.data(), 4) == 0)
    return parse_rsmx(bytes, path.string());
  return parse_csv(bytes, path.string());
}

Vector read_vector(const std::filesystem::path& path) {
  const Matrix m = read_matrix(path);
  if (m.cols() == 1) return m.col(0);
  if (m.rows() == 1) return m.row(0).transpose();
  throw ParseError(path.string() + ": expected a single row or column");
}

void write_matrix_csv(const std::filesystem::path& path, const Matrix& m) {
  std::string out;
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j) out += ',';
      out += format_double(m(i, j));
    }
    out += '\n';
  }
  write_bytes(path, out);
}

void write_matrix_rsmx(const std::filesystem::path& path, const Matrix& m) {
  if (m.rows() > 0xFFFFFFFFLL || m.cols() > 0xFFFFFFFFLL)
    throw std::invalid_argument("write_matrix_rsmx: dimensions exceed u32");
  std::string bytes(16 + 8 * static_cast<std::size_t>(m.size()), '\0');
  auto* p = reinterpret_cast<unsigned char*>(bytes.data());
  std::memcpy(p, kMagic.data(), 4);
  store_u32(p + 4, static_cast<std::uint32_t>(m.rows()));
  store_u32(p + 8, static_cast<std::uint32_t>(m.cols()));
  store_u32(p + 12, 0);
  unsigned char* data = p + 16;
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j)
      store_f64(data + 8 * static_cast<std::size_t>(i * m.cols() + j), m(i, j));
  write_bytes(path, bytes);
}

void write_vector_csv(const std::filesystem::path& path, const Vector& v) {
  write_matrix_csv(path, Matrix(v));
}

}  // namespace ranksieve::cli
