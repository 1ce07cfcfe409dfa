#include "json_writer.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "mbsp/error.hpp"
#include "mbsp/io.hpp"

namespace mbsp::cli {
namespace {

void emit(std::ostream& out, const nlohmann::json& v, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
  switch (v.type()) {
    case nlohmann::json::value_t::object: {
      if (v.empty()) {
        out << "{}";
        return;
      }
      out << "{\n";
      bool first = true;
      for (auto it = v.begin(); it != v.end(); ++it) {
        if (!first) out << ",\n";
        first = false;
        out << inner << nlohmann::json(it.key()).dump() << ": ";
        emit(out, it.value(), indent + 1);
      }
      out << '\n' << pad << '}';
      return;
    }
    case nlohmann::json::value_t::array: {
      // Arrays of scalars stay on one line; nested arrays get one row per line.
      const bool flat = std::none_of(v.begin(), v.end(),
                                     [](const auto& e) { return e.is_structured(); });
      if (v.empty() || flat) {
        out << '[';
        for (std::size_t i = 0; i < v.size(); ++i) {
          if (i) out << ", ";
          emit(out, v[i], indent + 1);
        }
        out << ']';
        return;
      }
      out << "[\n";
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out << ",\n";
        out << inner;
        emit(out, v[i], indent + 1);
      }
      out << '\n' << pad << ']';
      return;
    }
    case nlohmann::json::value_t::number_float: {
      const double d = v.get<double>();
      if (!std::isfinite(d)) {
        out << "null";
        return;
      }
      std::string s = io::format_double(d);
      // Keep the value typed as a float when read back.
      if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
      out << s;
      return;
    }
    default:
      out << v.dump();
  }
}

}  // namespace

std::string dump_json(const nlohmann::json& value) {
  std::ostringstream out;
  emit(out, value, 0);
  out << '\n';
  return out.str();
}

void write_json(const std::filesystem::path& path, const nlohmann::json& value) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write " + path.string());
  out << dump_json(value);
  if (!out) throw InputError("write failed for " + path.string());
}

nlohmann::json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

}  // namespace mbsp::cli
