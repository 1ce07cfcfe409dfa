#include <doctest.h>

#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "commands.hpp"
#include "json_writer.hpp"
#include "mbsp/io.hpp"
#include "mbsp/rng.hpp"
#include "temp_dir.hpp"

namespace {

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult cli(std::vector<std::string> args) {
  args.insert(args.begin(), "mbsp");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = mbsp::cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

int run_binary(const std::string& args) {
  const std::string command = std::string(MBSP_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(command.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void write_matrix(const std::filesystem::path& path, const mbsp::Matrix& m,
                  const std::string& header = "") {
  std::ofstream out(path);
  if (!header.empty()) out << header << '\n';
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << mbsp::io::format_double(m(i, j));
    }
    out << '\n';
  }
}

// Writes a small regression problem; returns nothing, files land in `dir`.
void toy_problem(const TempDir& dir, Eigen::Index n, Eigen::Index p, Eigen::Index q,
                 std::uint64_t seed = 1) {
  mbsp::RngStream rng(seed);
  const mbsp::Matrix x = mbsp::sample_std_normal_matrix(rng, n, p);
  mbsp::Matrix b = mbsp::Matrix::Zero(p, q);
  b(0, 0) = 2.0;
  if (p > 1) b(1, q - 1) = -1.5;
  const mbsp::Matrix y = x * b + 0.5 * mbsp::sample_std_normal_matrix(rng, n, q);
  write_matrix(dir / "x.csv", x);
  write_matrix(dir / "y.csv", y, q == 1 ? "response" : "");
}

std::string s(const std::filesystem::path& p) { return p.string(); }

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("fit writes the summary, chain and effective config") {
    TempDir dir;
    toy_problem(dir, 10, 2, 1);
    const auto r = cli({"fit", s(dir / "x.csv"), s(dir / "y.csv"), "--iterations", "600",
                        "--burn-in", "100", "--out", s(dir / "fit")});
    INFO(r.err);
    REQUIRE(r.code == 0);
    const auto summary = mbsp::cli::read_json(dir / "fit" / "summary.json");
    REQUIRE(summary["median"].size() == 2);
    CHECK(summary["median"][0].size() == 1);
    CHECK(summary["level"].get<double>() == 0.95);
    CHECK(summary["active_rows"].size() == 2);
    for (const char* key : {"ci_lower", "ci_upper", "hyperparameters"}) CHECK(summary.contains(key));
    const auto chain = mbsp::io::read_chain(dir / "fit" / "chain.bin");
    CHECK(chain.draw_count == 500);
    const auto config = mbsp::cli::read_json(dir / "fit" / "config.json");
    CHECK(config["command"] == "fit");
    CHECK(config["hyperparameters"]["tau"].is_number());
    CHECK(config["hyperparameters"]["k"].is_number());
  }

  TEST_CASE("same seed gives byte-identical artifacts") {
    TempDir dir;
    toy_problem(dir, 30, 8, 2);
    for (const char* out : {"a", "b"}) {
      REQUIRE(cli({"fit", s(dir / "x.csv"), s(dir / "y.csv"), "--seed", "42", "--iterations",
                   "800", "--burn-in", "200", "--store-sigma", "--out", s(dir / out)})
                  .code == 0);
    }
    for (const char* f : {"summary.json", "chain.bin", "sigma_chain.bin"})
      CHECK(read_bytes(dir / "a" / f) == read_bytes(dir / "b" / f));
    REQUIRE(cli({"fit", s(dir / "x.csv"), s(dir / "y.csv"), "--seed", "43", "--iterations",
                 "800", "--burn-in", "200", "--out", s(dir / "c")})
                .code == 0);
    CHECK(read_bytes(dir / "a" / "chain.bin") != read_bytes(dir / "c" / "chain.bin"));
  }

  TEST_CASE("default tau is recorded in the effective config") {
    TempDir dir;
    toy_problem(dir, 100, 500, 1);
    REQUIRE(cli({"fit", s(dir / "x.csv"), s(dir / "y.csv"), "--iterations", "20", "--burn-in",
                 "10", "--out", s(dir / "fit")})
                .code == 0);
    const auto config = mbsp::cli::read_json(dir / "fit" / "config.json");
    CHECK(config["hyperparameters"]["tau"].get<double>() == doctest::Approx(9.320e-5).epsilon(1e-3));
  }

  TEST_CASE("explicit hyperparameters override the defaults") {
    TempDir dir;
    toy_problem(dir, 20, 3, 1);
    REQUIRE(cli({"fit", s(dir / "x.csv"), s(dir / "y.csv"), "--iterations", "50", "--burn-in",
                 "10", "--tau", "0.25", "--k", "1.5", "--d", "4", "--u", "1", "--a", "0.7",
                 "--thin", "4", "--no-center", "--chain-format", "csv", "--out", s(dir / "fit")})
                .code == 0);
    const auto config = mbsp::cli::read_json(dir / "fit" / "config.json");
    const auto& h = config["hyperparameters"];
    CHECK(h["tau"].get<double>() == 0.25);
    CHECK(h["k"].get<double>() == 1.5);
    CHECK(h["d"].get<double>() == 4.0);
    CHECK(h["u"].get<double>() == 1.0);
    CHECK(h["a"].get<double>() == 0.7);
    CHECK(h["thin"].get<int>() == 4);
    CHECK(config["center"] == false);
    CHECK(mbsp::io::read_chain(dir / "fit" / "chain.csv").draw_count == 10);
  }

  TEST_CASE("summarize reproduces the fit summary and nests intervals") {
    TempDir dir;
    toy_problem(dir, 25, 6, 2);
    REQUIRE(cli({"fit", s(dir / "x.csv"), s(dir / "y.csv"), "--iterations", "700", "--burn-in",
                 "200", "--out", s(dir / "fit")})
                .code == 0);
    REQUIRE(cli({"summarize", s(dir / "fit" / "chain.bin"), "--out", s(dir / "s95")}).code == 0);
    CHECK(read_bytes(dir / "fit" / "summary.json") == read_bytes(dir / "s95" / "summary.json"));

    REQUIRE(cli({"summarize", s(dir / "fit" / "chain.bin"), "--level", "0.5", "--out",
                 s(dir / "s50")})
                .code == 0);
    const auto wide = mbsp::cli::read_json(dir / "s95" / "summary.json");
    const auto narrow = mbsp::cli::read_json(dir / "s50" / "summary.json");
    for (std::size_t i = 0; i < 6; ++i)
      for (std::size_t j = 0; j < 2; ++j) {
        CHECK(wide["ci_lower"][i][j].get<double>() <= narrow["ci_lower"][i][j].get<double>());
        CHECK(narrow["ci_upper"][i][j].get<double>() <= wide["ci_upper"][i][j].get<double>());
      }
    const auto history = mbsp::io::read_csv(dir / "s50" / "history.csv");
    CHECK(history.values.rows() == 500);
    CHECK(history.values.cols() == 13);
  }

  TEST_CASE("re-running from the written config reproduces the outputs") {
    TempDir dir;
    toy_problem(dir, 25, 6, 2);
    REQUIRE(cli({"fit", s(dir / "x.csv"), s(dir / "y.csv"), "--seed", "9", "--iterations", "500",
                 "--burn-in", "100", "--level", "0.9", "--out", s(dir / "first")})
                .code == 0);
    REQUIRE(cli({"fit", "--config", s(dir / "first" / "config.json"), "--out", s(dir / "second")})
                .code == 0);
    for (const char* f : {"summary.json", "chain.bin"})
      CHECK(read_bytes(dir / "first" / f) == read_bytes(dir / "second" / f));

    REQUIRE(cli({"experiment", "--id", "3", "--replications", "2", "--iterations", "60",
                 "--burn-in", "20", "--seed", "4", "--out", s(dir / "e1")})
                .code == 0);
    REQUIRE(cli({"experiment", "--config", s(dir / "e1" / "config.json"), "--out", s(dir / "e2")})
                .code == 0);
    CHECK(read_bytes(dir / "e1" / "report.json") == read_bytes(dir / "e2" / "report.json"));
  }

  TEST_CASE("experiment report") {
    TempDir dir;
    const auto r = cli({"experiment", "--id", "3", "--replications", "3", "--iterations", "60",
                        "--burn-in", "20", "--out", s(dir / "e")});
    REQUIRE(r.code == 0);
    const auto report = mbsp::cli::read_json(dir / "e" / "report.json");
    CHECK(report["experiment"]["n"] == 50);
    CHECK(report["experiment"]["p"] == 200);
    CHECK(report["experiment"]["q"] == 5);
    CHECK(report["experiment"]["n_active"] == 20);
    for (const char* key : {"mse_est", "mse_pred", "fdr", "fnr", "mp"})
      CHECK(report["average"].contains(key));
    const auto table = mbsp::io::read_csv(dir / "e" / "replications.csv");
    CHECK(table.values.rows() == 3);
    CHECK(table.header[0] == "replication");
    CHECK(table.header[10] == "wall_time_s");
  }

  TEST_CASE("cross-validation command") {
    TempDir dir;
    toy_problem(dir, 40, 5, 2);
    const auto r = cli({"cv", s(dir / "x.csv"), s(dir / "y.csv"), "--iterations", "300",
                        "--burn-in", "100", "--out", s(dir / "cv")});
    REQUIRE(r.code == 0);
    const auto cv = mbsp::cli::read_json(dir / "cv" / "cv.json");
    CHECK(cv["folds"] == 5);
    double sum = 0.0;
    for (const auto& v : cv["fold_mspe"]) sum += v.get<double>();
    CHECK(cv["mspe"].get<double>() == doctest::Approx(sum / 5.0).epsilon(1e-15));
    CHECK(r.out.find("MSPE") != std::string::npos);
  }

  TEST_CASE("input errors exit with code 2 and name the line") {
    TempDir dir;
    toy_problem(dir, 10, 2, 1);
    write_text(dir / "ragged.csv", "1,2\n3,4\n5\n6,7\n7,8\n8,9\n1,1\n2,2\n3,3\n4,4\n");
    auto r = cli({"fit", s(dir / "ragged.csv"), s(dir / "y.csv"), "--out", s(dir / "o")});
    CHECK(r.code == 2);
    CHECK(r.err.find("ragged.csv:3:") != std::string::npos);

    write_text(dir / "short.csv", "1\n2\n3\n");
    r = cli({"fit", s(dir / "x.csv"), s(dir / "short.csv"), "--out", s(dir / "o")});
    CHECK(r.code == 2);
    CHECK(r.err.find("row-count mismatch") != std::string::npos);

    write_text(dir / "broken.bin", "MBSP\x01");
    r = cli({"summarize", s(dir / "broken.bin"), "--out", s(dir / "o")});
    CHECK(r.code == 2);

    CHECK(cli({"fit", s(dir / "x.csv"), s(dir / "y.csv"), "--burn-in", "20000"}).code == 2);
    CHECK(cli({"experiment", "--id", "9"}).code == 2);
    CHECK(cli({"frobnicate"}).code == 2);
    CHECK(cli({"--help"}).code == 0);
  }

  TEST_CASE("numeric failures exit with code 3") {
    TempDir dir;
    mbsp::Matrix x(4, 2);
    x << 1e200, 2e200, -3e200, 1e200, 2e200, -1e200, 5e199, 3e200;
    mbsp::Matrix y(4, 1);
    y << 1.0, 2.0, -1.0, 0.5;
    write_matrix(dir / "x.csv", x);
    write_matrix(dir / "y.csv", y);
    const auto r = cli({"fit", s(dir / "x.csv"), s(dir / "y.csv"), "--iterations", "20",
                        "--burn-in", "10", "--out", s(dir / "o")});
    INFO(r.err);
    CHECK(r.code == 3);
  }

  TEST_CASE("the installed binary maps errors to exit codes") {
    TempDir dir;
    toy_problem(dir, 10, 2, 1);
    CHECK(run_binary("fit " + s(dir / "x.csv") + " " + s(dir / "y.csv") +
                     " --iterations 50 --burn-in 10 --out " + s(dir / "ok")) == 0);
    CHECK(run_binary("fit " + s(dir / "missing.csv") + " " + s(dir / "y.csv")) == 2);
    CHECK(run_binary("summarize") == 2);
  }
}
