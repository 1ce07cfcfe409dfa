#include "mbsp/io.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "mbsp/error.hpp"

namespace mbsp::io {
namespace {

static_assert(std::endian::native == std::endian::little,
              "chain files are written with native little-endian stores");

constexpr char kMagic[4] = {'M', 'B', 'S', 'P'};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    cells.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

bool parse_number(std::string_view cell, double& out) {
  if (cell.empty()) return false;
  if (cell.front() == '+') cell.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), out);
  return ec == std::errc() && ptr == cell.data() + cell.size() && std::isfinite(out);
}

bool is_missing_marker(std::string_view c) {
  return c.empty() || c == "NA" || c == "na" || c == "NaN" || c == "nan" || c == "null" ||
         c == "." || c == "?";
}

// A header row has no missing markers and at least one non-numeric cell.
bool looks_like_header(const std::vector<std::string_view>& cells) {
  bool any_text = false;
  for (const auto c : cells) {
    if (is_missing_marker(c)) return false;
    double value;
    if (!parse_number(c, value)) any_text = true;
  }
  return any_text;
}

std::string unquote(std::string_view cell) {
  if (cell.size() >= 2 && cell.front() == '"' && cell.back() == '"')
    cell = cell.substr(1, cell.size() - 2);
  return std::string(cell);
}

std::string location(const std::filesystem::path& path, std::size_t line) {
  return path.string() + ":" + std::to_string(line) + ": ";
}

template <typename T>
void put(std::ostream& out, T value) {
  char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  out.write(bytes, sizeof(T));
}

template <typename T>
bool get(std::istream& in, T& value) {
  char bytes[sizeof(T)];
  if (!in.read(bytes, sizeof(T))) return false;
  std::memcpy(&value, bytes, sizeof(T));
  return true;
}

std::vector<std::string> coefficient_names(std::uint64_t rows, std::uint64_t cols) {
  std::vector<std::string> names;
  names.reserve(rows * cols);
  for (std::uint64_t i = 1; i <= rows; ++i)
    for (std::uint64_t j = 1; j <= cols; ++j)
      names.push_back("b_" + std::to_string(i) + "_" + std::to_string(j));
  return names;
}

StoredChain read_chain_binary(std::istream& in, const std::filesystem::path& path) {
  in.seekg(sizeof kMagic);
  StoredChain chain;
  std::uint32_t version = 0;
  if (!get(in, version)) throw FormatError(path.string() + ": truncated header (version)");
  if (version != kChainFormatVersion)
    throw FormatError(path.string() + ": unsupported chain format version " + std::to_string(version));
  if (!get(in, chain.p) || !get(in, chain.q) || !get(in, chain.draw_count))
    throw FormatError(path.string() + ": truncated header (dimensions)");
  if (chain.p == 0 || chain.q == 0)
    throw FormatError(path.string() + ": header declares an empty coefficient matrix");

  const std::uint64_t stride = chain.p * chain.q;
  if (stride / chain.q != chain.p || stride > (std::uint64_t{1} << 40))
    throw FormatError(path.string() + ": implausible dimensions in header");

  in.seekg(0, std::ios::end);
  const auto file_size = static_cast<std::uint64_t>(in.tellg());
  constexpr std::uint64_t header_size = sizeof kMagic + 4 + 3 * 8;
  const std::uint64_t payload = file_size - header_size;
  const std::uint64_t draw_bytes = stride * sizeof(double);
  if (payload / draw_bytes < chain.draw_count)
    throw FormatError(path.string() + ": truncated at draw record " +
                      std::to_string(payload / draw_bytes + 1) + " of " +
                      std::to_string(chain.draw_count));
  if (payload != chain.draw_count * draw_bytes)
    throw FormatError(path.string() + ": " + std::to_string(payload - chain.draw_count * draw_bytes) +
                      " trailing bytes after draw record " + std::to_string(chain.draw_count));

  in.seekg(static_cast<std::streamoff>(header_size));
  chain.draws.resize(chain.draw_count * stride);
  in.read(reinterpret_cast<char*>(chain.draws.data()),
          static_cast<std::streamsize>(chain.draws.size() * sizeof(double)));
  if (!in) throw FormatError(path.string() + ": read error in draw payload");
  for (std::uint64_t t = 0; t < chain.draw_count; ++t)
    for (std::uint64_t k = 0; k < stride; ++k)
      if (!std::isfinite(chain.draws[t * stride + k]))
        throw FormatError(path.string() + ": non-finite value in draw record " + std::to_string(t + 1));
  return chain;
}

StoredChain read_chain_csv(const std::filesystem::path& path) {
  CsvTable table;
  try {
    table = read_csv(path);
  } catch (const InputError& e) {
    throw FormatError(e.what());
  }
  if (table.header.empty()) throw FormatError(path.string() + ":1: chain CSV needs a b_i_j header");

  StoredChain chain;
  // The last column name carries the dimensions, e.g. b_500_3.
  const std::string& last = table.header.back();
  unsigned long long rows = 0, cols = 0;
  if (std::sscanf(last.c_str(), "b_%llu_%llu", &rows, &cols) != 2)
    throw FormatError(path.string() + ":1: unrecognized chain column '" + last + "'");
  chain.p = rows;
  chain.q = cols;
  const auto expected = coefficient_names(chain.p, chain.q);
  if (table.header != expected)
    throw FormatError(path.string() + ":1: chain header does not enumerate b_i_j row-major");

  chain.draw_count = static_cast<std::uint64_t>(table.values.rows());
  chain.draws.resize(static_cast<std::size_t>(table.values.size()));
  const RowMatrix row_major = table.values;
  std::copy(row_major.data(), row_major.data() + row_major.size(), chain.draws.begin());
  return chain;
}

}  // namespace

std::string format_double(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());

  CsvTable table;
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split(line);

    if (rows.empty() && table.header.empty()) {
      if (looks_like_header(cells)) {
        for (const auto c : cells) table.header.push_back(unquote(c));
        width = cells.size();
        continue;
      }
    }
    if (width == 0) width = cells.size();
    if (cells.size() != width)
      throw InputError(location(path, line_no) + "expected " + std::to_string(width) +
                       " fields, found " + std::to_string(cells.size()));

    std::vector<double> row(width);
    for (std::size_t j = 0; j < width; ++j) {
      if (is_missing_marker(cells[j]))
        throw InputError(location(path, line_no) + "missing value in column " + std::to_string(j + 1));
      if (!parse_number(cells[j], row[j]))
        throw InputError(location(path, line_no) + "non-numeric value '" + std::string(cells[j]) +
                         "' in column " + std::to_string(j + 1));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw InputError(path.string() + ": no data rows");

  table.values.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(width));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < width; ++j)
      table.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  return table;
}

Matrix read_csv_matrix(const std::filesystem::path& path) { return read_csv(path).values; }

ChainFormat parse_chain_format(const std::string& name) {
  if (name == "binary") return ChainFormat::binary;
  if (name == "csv") return ChainFormat::csv;
  throw InputError("unknown chain format '" + name + "' (expected binary or csv)");
}

void write_chain(const std::filesystem::path& path, std::span<const double> draws,
                 std::uint64_t rows, std::uint64_t cols, std::uint64_t draw_count,
                 ChainFormat format) {
  if (draws.size() != rows * cols * draw_count) throw ParameterError("chain buffer size mismatch");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write " + path.string());

  if (format == ChainFormat::binary) {
    out.write(kMagic, sizeof kMagic);
    put(out, kChainFormatVersion);
    put(out, rows);
    put(out, cols);
    put(out, draw_count);
    out.write(reinterpret_cast<const char*>(draws.data()),
              static_cast<std::streamsize>(draws.size() * sizeof(double)));
  } else {
    const auto names = coefficient_names(rows, cols);
    for (std::size_t k = 0; k < names.size(); ++k) out << (k ? "," : "") << names[k];
    out << '\n';
    const std::uint64_t stride = rows * cols;
    for (std::uint64_t t = 0; t < draw_count; ++t) {
      for (std::uint64_t k = 0; k < stride; ++k)
        out << (k ? "," : "") << format_double(draws[t * stride + k]);
      out << '\n';
    }
  }
  if (!out) throw InputError("write failed for " + path.string());
}

void write_chain(const std::filesystem::path& path, const ChainOutput& chain, ChainFormat format) {
  write_chain(path, chain.b_draws, static_cast<std::uint64_t>(chain.p),
              static_cast<std::uint64_t>(chain.q), chain.draw_count, format);
}

StoredChain read_chain(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  char magic[sizeof kMagic] = {};
  in.read(magic, sizeof magic);
  if (in.gcount() == sizeof magic && std::memcmp(magic, kMagic, sizeof kMagic) == 0)
    return read_chain_binary(in, path);
  in.close();
  return read_chain_csv(path);
}

void write_history_csv(const std::filesystem::path& path, const StoredChain& chain) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw InputError("cannot write " + path.string());
  out << "draw";
  for (const auto& name : coefficient_names(chain.p, chain.q)) out << ',' << name;
  out << '\n';
  const std::uint64_t stride = chain.p * chain.q;
  for (std::uint64_t t = 0; t < chain.draw_count; ++t) {
    out << t + 1;
    for (std::uint64_t k = 0; k < stride; ++k) out << ',' << format_double(chain.draws[t * stride + k]);
    out << '\n';
  }
  if (!out) throw InputError("write failed for " + path.string());
}

}  // namespace mbsp::io
