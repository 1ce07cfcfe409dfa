#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

namespace mbsp::cli {

// Serializes `value` with two-space indentation and every floating-point
// number printed as %.17g, so files are byte-stable and round-trip exactly.
std::string dump_json(const nlohmann::json& value);

void write_json(const std::filesystem::path& path, const nlohmann::json& value);

nlohmann::json read_json(const std::filesystem::path& path);

}  // namespace mbsp::cli
