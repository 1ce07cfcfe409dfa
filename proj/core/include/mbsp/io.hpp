#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "mbsp/linalg.hpp"
#include "mbsp/sampler.hpp"

namespace mbsp::io {

// Numeric CSV. A first row containing any non-numeric cell is treated as a
// header. Empty cells, NA markers, ragged rows and non-numeric values throw
// InputError naming the 1-based line.
struct CsvTable {
  std::vector<std::string> header;  // empty when the file had none
  Matrix values;
};

CsvTable read_csv(const std::filesystem::path& path);
Matrix read_csv_matrix(const std::filesystem::path& path);

// Shortest form that still round-trips: printf "%.17g".
std::string format_double(double value);

// Coefficient draws as loaded from disk, laid out like ChainOutput::b_draws.
struct StoredChain {
  std::uint64_t p = 0;
  std::uint64_t q = 0;
  std::uint64_t draw_count = 0;
  std::vector<double> draws;
};

enum class ChainFormat { binary, csv };

ChainFormat parse_chain_format(const std::string& name);

// Binary container: "MBSP", u32 version, u64 p, u64 q, u64 draw count (all
// little-endian), then draw_count * p * q little-endian IEEE-754 doubles,
// each draw row-major.
inline constexpr std::uint32_t kChainFormatVersion = 1;

void write_chain(const std::filesystem::path& path, std::span<const double> draws,
                 std::uint64_t rows, std::uint64_t cols, std::uint64_t draw_count,
                 ChainFormat format);
void write_chain(const std::filesystem::path& path, const ChainOutput& chain, ChainFormat format);

// Detects the format from the leading magic bytes. Throws FormatError
// naming the offending record on truncation or malformed content.
StoredChain read_chain(const std::filesystem::path& path);

// One row per stored draw: "draw,b_1_1,b_1_2,...".
void write_history_csv(const std::filesystem::path& path, const StoredChain& chain);

}  // namespace mbsp::io
