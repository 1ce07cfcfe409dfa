#include <doctest.h>

#include <cmath>
#include <limits>
#include <string>

#include "mbsp/error.hpp"
#include "mbsp/io.hpp"
#include "temp_dir.hpp"

namespace {

std::string error_of(const std::filesystem::path& path) {
  try {
    mbsp::io::read_csv(path);
  } catch (const mbsp::InputError& e) {
    return e.what();
  }
  return {};
}

std::string chain_error_of(const std::filesystem::path& path) {
  try {
    mbsp::io::read_chain(path);
  } catch (const mbsp::FormatError& e) {
    return e.what();
  }
  return {};
}

std::vector<double> sample_draws() {
  std::vector<double> d(3 * 2 * 4);
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = std::sin(static_cast<double>(i) + 0.1) * 1e3 / 7.0;
  return d;
}

}  // namespace

TEST_SUITE("io") {
  TEST_CASE("csv with and without a header") {
    TempDir dir;
    write_text(dir / "a.csv", "x1,x2\n1,2.5\n-3,4e-2\n");
    const auto t = mbsp::io::read_csv(dir / "a.csv");
    CHECK(t.header == std::vector<std::string>{"x1", "x2"});
    REQUIRE(t.values.rows() == 2);
    CHECK(t.values(1, 1) == 0.04);

    write_text(dir / "b.csv", "1,2\r\n3,4\r\n");
    const auto u = mbsp::io::read_csv(dir / "b.csv");
    CHECK(u.header.empty());
    CHECK(u.values(1, 0) == 3.0);
  }

  TEST_CASE("csv errors name the line") {
    TempDir dir;
    write_text(dir / "ragged.csv", "1,2\n3,4\n5\n");
    CHECK(error_of(dir / "ragged.csv").find(":3:") != std::string::npos);

    write_text(dir / "text.csv", "a,b\n1,2\n3,oops\n");
    const auto text = error_of(dir / "text.csv");
    CHECK(text.find(":3:") != std::string::npos);
    CHECK(text.find("oops") != std::string::npos);

    write_text(dir / "missing.csv", "1,2\n3,NA\n");
    CHECK(error_of(dir / "missing.csv").find(":2:") != std::string::npos);
    write_text(dir / "empty_cell.csv", "1,2\n,4\n");
    CHECK(error_of(dir / "empty_cell.csv").find(":2:") != std::string::npos);
    // A first row with a missing marker is data with a gap, not a header.
    write_text(dir / "first.csv", "NA,2\n3,4\n");
    CHECK(error_of(dir / "first.csv").find(":1:") != std::string::npos);

    write_text(dir / "none.csv", "");
    CHECK_FALSE(error_of(dir / "none.csv").empty());
    CHECK_FALSE(error_of(dir / "absent.csv").empty());
  }

  TEST_CASE("format_double round-trips") {
    for (const double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23}) {
      CHECK(std::stod(mbsp::io::format_double(v)) == v);
    }
  }

  TEST_CASE("chain round-trip is bit exact in both formats") {
    TempDir dir;
    const auto draws = sample_draws();
    for (const auto format : {mbsp::io::ChainFormat::binary, mbsp::io::ChainFormat::csv}) {
      const auto path = dir / (format == mbsp::io::ChainFormat::binary ? "c.bin" : "c.csv");
      mbsp::io::write_chain(path, draws, 3, 2, 4, format);
      const auto back = mbsp::io::read_chain(path);
      CHECK(back.p == 3);
      CHECK(back.q == 2);
      CHECK(back.draw_count == 4);
      CHECK(back.draws == draws);
    }
    CHECK(mbsp::io::parse_chain_format("csv") == mbsp::io::ChainFormat::csv);
    CHECK_THROWS_AS(mbsp::io::parse_chain_format("hdf5"), mbsp::InputError);
  }

  TEST_CASE("binary layout") {
    TempDir dir;
    const auto draws = sample_draws();
    mbsp::io::write_chain(dir / "c.bin", draws, 3, 2, 4, mbsp::io::ChainFormat::binary);
    const std::string bytes = read_bytes(dir / "c.bin");
    REQUIRE(bytes.size() == 4 + 4 + 24 + draws.size() * 8);
    CHECK(bytes.substr(0, 4) == "MBSP");
    CHECK(static_cast<unsigned char>(bytes[4]) == 1);
    CHECK(static_cast<unsigned char>(bytes[8]) == 3);
    CHECK(static_cast<unsigned char>(bytes[16]) == 2);
    CHECK(static_cast<unsigned char>(bytes[24]) == 4);
  }

  TEST_CASE("corrupt chains are rejected with the record") {
    TempDir dir;
    const auto draws = sample_draws();
    mbsp::io::write_chain(dir / "c.bin", draws, 3, 2, 4, mbsp::io::ChainFormat::binary);
    const std::string good = read_bytes(dir / "c.bin");

    write_text(dir / "truncated.bin", good.substr(0, good.size() - 10));
    CHECK(chain_error_of(dir / "truncated.bin").find("draw record 4") != std::string::npos);

    write_text(dir / "trailing.bin", good + "xyz");
    CHECK(chain_error_of(dir / "trailing.bin").find("trailing") != std::string::npos);

    std::string nan_record = good;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    nan_record.replace(32 + 6 * 8 + 8, 8, reinterpret_cast<const char*>(&nan), 8);
    write_text(dir / "nan.bin", nan_record);
    CHECK(chain_error_of(dir / "nan.bin").find("draw record 2") != std::string::npos);

    write_text(dir / "header.bin", good.substr(0, 12));
    CHECK(chain_error_of(dir / "header.bin").find("header") != std::string::npos);

    std::string version = good;
    version[4] = 9;
    write_text(dir / "version.bin", version);
    CHECK(chain_error_of(dir / "version.bin").find("version") != std::string::npos);

    write_text(dir / "bad.csv", "b_1_1,b_1_2\n1,2\n3,x\n");
    CHECK(chain_error_of(dir / "bad.csv").find(":3:") != std::string::npos);
    write_text(dir / "noheader.csv", "1,2\n3,4\n");
    CHECK_FALSE(chain_error_of(dir / "noheader.csv").empty());
  }

  TEST_CASE("history export") {
    TempDir dir;
    mbsp::io::StoredChain chain{3, 2, 4, sample_draws()};
    mbsp::io::write_history_csv(dir / "h.csv", chain);
    const auto t = mbsp::io::read_csv(dir / "h.csv");
    CHECK(t.header.front() == "draw");
    CHECK(t.header[1] == "b_1_1");
    CHECK(t.header.back() == "b_3_2");
    CHECK(t.values.rows() == 4);
    CHECK(t.values(3, 0) == 4.0);
    CHECK(t.values(1, 1) == chain.draws[6]);
  }
}
