#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>

#include "cli.hpp"
#include "hypmax/errors.hpp"
#include "hypmax/report.hpp"

using hypmax::cli::dispatch;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST_CASE("geom queries") {
  Run v = run({"geom", "volume", "--dim", "2", "--radius", "1"});
  CHECK(v.code == 0);
  CHECK(v.out.rfind("3.41227626", 0) == 0);
  v = run({"geom", "volume", "--dim", "3", "--radius", "1"});
  CHECK(std::stod(v.out) == doctest::Approx(M_PI * (std::sinh(2.0) - 2.0)).epsilon(1e-12));
  CHECK(run({"geom", "volume", "--dim", "2", "--radius", "-1"}).code == 2);
  CHECK(run({"geom", "volume", "--dim", "1", "--radius", "1"}).code == 2);

  const Run d = run({"geom", "distance", "--x", "0,0", "--y", "0.5,0"});
  CHECK(d.code == 0);
  CHECK(std::stod(d.out) == doctest::Approx(std::log(3.0)).epsilon(1e-14));
  CHECK(run({"geom", "distance", "--x", "0,0", "--y", "0.5,0,0"}).code == 2);
  CHECK(run({"geom", "distance", "--x", "0,0", "--y", "1,0"}).code == 2);
}

TEST_CASE("usage errors exit 2 with usage text") {
  CHECK(run({"verify", "lemma31", "--trials", "0"}).code == 2);
  Run r = run({"frobnicate"});
  CHECK(r.code == 2);
  CHECK(r.err.find("Usage:") != std::string::npos);
  r = run({"verify", "prop21", "--no-such-flag"});
  CHECK(r.code == 2);
  CHECK(r.err.find("Usage:") != std::string::npos);
  CHECK(run({}).code == 2);
  CHECK(run({"verify", "prop21", "--radii", "5..2"}).code == 2);
  CHECK(run({"check-weight", "--weight", "gamma:2", "--condition", "ap-loc"}).code == 2);
  CHECK(run({"check-weight", "--weight", "const", "--condition", "eq99"}).code == 2);
  CHECK(run({"experiment", "example41", "--case", "7"}).code == 2);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("grid grammar") {
  CHECK(hypmax::cli::parse_int_range("2..5") == std::vector<int>{2, 3, 4, 5});
  CHECK(hypmax::cli::parse_int_range("7") == std::vector<int>{7});
  CHECK(hypmax::cli::parse_real_range("0..1:0.25") == std::vector<double>{0, 0.25, 0.5, 0.75, 1});
  CHECK(hypmax::cli::parse_real_range("0..1:0.4").back() == 1.0);
  CHECK_THROWS_AS(hypmax::cli::parse_real_range("0..1:0"), hypmax::UsageError);
  CHECK_THROWS_AS(hypmax::cli::parse_int_range("a..3"), hypmax::UsageError);
}

TEST_CASE("exit code reflects declared checks") {
  CHECK(run({"check-weight", "--weight", "const", "--condition", "ap-loc", "--tau", "0..2:1"}).code == 0);
  CHECK(run({"check-weight", "--weight", "const", "--condition", "ap-loc", "--tau", "0..2:1", "--bound",
             "0.5"})
            .code == 1);
}

TEST_CASE("reports echo the effective config and are byte-identical across runs") {
  const auto dir = std::filesystem::temp_directory_path() / "hypmax_cli_test";
  std::filesystem::create_directories(dir);
  const std::vector<std::string> base = {"verify", "prop21", "--dim", "2", "--radii", "2..3", "--d-steps",
                                         "2", "--samples", "5000", "--seed", "42"};
  auto with = [&](std::vector<std::string> extra) {
    std::vector<std::string> a = base;
    a.insert(a.end(), extra.begin(), extra.end());
    return a;
  };
  const Run a = run(with({"--out", (dir / "a.json").string()}));
  const Run b = run(with({"--out", (dir / "b.json").string(), "--threads", "2"}));
  CHECK(a.code != 2);
  CHECK(a.code == b.code);
  const std::string ja = slurp(dir / "a.json");
  CHECK_FALSE(ja.empty());
  CHECK(ja == slurp(dir / "b.json"));

  const hypmax::Json j = hypmax::Json::parse(ja);
  CHECK(j["seed"] == 42);
  CHECK(j["params"]["config"]["subcommand"] == "verify prop21");
  CHECK(j["params"]["config"]["samples"] == 5000);
  CHECK(j["params"]["config"]["grids"]["radii"] == "2..3");

  const Run c = run(with({"--format", "csv"}));
  CHECK(c.code == a.code);
  CHECK(c.out.substr(0, c.out.find('\n')).find("cell") != std::string::npos);
  std::filesystem::remove_all(dir);
}
