#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "drsplit/cli.hpp"
#include "drsplit/errors.hpp"
#include "drsplit/pgm.hpp"
#include "drsplit/selftest.hpp"

using namespace drsplit;
namespace fs = std::filesystem;

namespace {

std::vector<std::uint8_t> bytes(const std::string& s) { return {s.begin(), s.end()}; }

fs::path temp_dir() {
  const fs::path p = fs::temp_directory_path() / "drsplit_unit";
  fs::create_directories(p);
  return p;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST_CASE("PGM parsing") {
  SUBCASE("ASCII endpoints") {
    const GridImage img = parse_pgm(bytes("P2 2 1 255\n0 255\n"));
    CHECK(img.width() == 2);
    CHECK(img.height() == 1);
    CHECK(img.vector() == Vec{0.0, 1.0});
  }
  SUBCASE("binary scaling and comments") {
    std::string s = "P5\n# a comment\n1 1\n# another\n255\n";
    s.push_back(static_cast<char>(128));
    CHECK(parse_pgm(bytes(s)).values()[0] == 128.0 / 255.0);
  }
  SUBCASE("16-bit samples are big-endian") {
    std::string s = "P5 2 1 1000\n";
    s += std::string{'\x01', '\xF4', '\x03', '\xE8'};
    CHECK(parse_pgm(bytes(s)).vector() == Vec{0.5, 1.0});
  }
  SUBCASE("errors carry byte offsets") {
    try {
      parse_pgm(bytes("P7 1 1 255\n"));
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.offset() <= 1);
    }
    try {
      parse_pgm(bytes("P5 4 4 255\nabc"));
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.offset() > 10);
    }
    CHECK_THROWS_AS(parse_pgm(bytes("P2 1 1 255\n300\n")), ParseError);
    CHECK_THROWS_AS(parse_pgm(bytes("P2 1 1 70000\n3\n")), ParseError);
    CHECK_THROWS_AS(parse_pgm(bytes("P2 2")), ParseError);
  }
}

TEST_CASE("PGM encoding") {
  CHECK(encode_pgm(GridImage(3, 2, 0.0)) == bytes(std::string("P5\n3 2\n255\n") + std::string(6, '\0')));
  const std::vector<std::uint8_t> half = encode_pgm(GridImage(1, 1, 0.5));
  CHECK(half.back() == 128);
  const std::vector<std::uint8_t> clamped = encode_pgm(GridImage(2, 1, Vec{-0.3, 1.7}));
  CHECK(clamped[clamped.size() - 2] == 0);
  CHECK(clamped.back() == 255);

  std::string src = "P5\n16 16\n255\n";
  for (int v = 0; v < 256; ++v) src.push_back(static_cast<char>(v));
  CHECK(encode_pgm(parse_pgm(bytes(src))) == bytes(src));

  const fs::path path = temp_dir() / "roundtrip.pgm";
  write_pgm(parse_pgm(bytes(src)), path.string());
  CHECK(read_pgm(path.string()) == parse_pgm(bytes(src)));
  CHECK_THROWS_AS(read_pgm((temp_dir() / "missing.pgm").string()), IoError);
}

TEST_CASE("command-line parsing") {
  SUBCASE("defaults") {
    const CliConfig c = parse_cli({"denoise", "--synthetic", "8x8"});
    CHECK(c.subcommand == Subcommand::denoise);
    CHECK(c.algorithm == Algorithm::adr);
    CHECK(c.precond == "gs2");
    CHECK(c.tol == 1e-7);
    CHECK(c.log_every == 10);
    CHECK_FALSE(c.alpha.has_value());
  }
  SUBCASE("round trip through arguments") {
    const std::vector<std::vector<std::string>> cases{
        {"denoise", "--input", "a.pgm", "--output", "b.pgm", "--model", "huber", "--alpha", "0.3", "--lambda",
         "0.01", "--algorithm", "padrsc", "--sigma", "0.15", "--gamma", "0.25", "--precond", "ssor:1.2:3",
         "--tol", "1e-9", "--max-iter", "77", "--seed", "5", "--noise", "0.05", "--csv", "log.csv",
         "--log-every", "3", "--threads", "2", "--permissive"},
        {"bench", "--synthetic", "32x16", "--algorithms", "dr,padr@gs3", "--tolerances", "1e-3,1e-6", "--tau0",
         "2.5"},
        {"selftest", "--inject-fault", "div-sign"},
    };
    for (const auto& args : cases) {
      const CliConfig c = parse_cli(args);
      CHECK(parse_cli(to_args(c)) == c);
    }
    const CliConfig b = parse_cli(cases[1]);
    CHECK(b.algorithms == std::vector<std::string>{"dr", "padr@gs3"});
    CHECK(b.tolerances == std::vector<double>{1e-3, 1e-6});
    CHECK(b.tau0 == 2.5);
  }
  SUBCASE("invalid input") {
    CHECK_THROWS_AS(parse_cli({}), ConfigError);
    CHECK_THROWS_AS(parse_cli({"denoise"}), ConfigError);
    CHECK_THROWS_AS(parse_cli({"denoise", "--synthetic", "8x8", "--algorithm", "fista"}), ConfigError);
    CHECK_THROWS_AS(parse_cli({"denoise", "--synthetic", "8x8", "--threads", "0"}), ConfigError);
    CHECK_THROWS_AS(parse_cli({"denoise", "--synthetic", "8x8", "--bogus"}), ConfigError);
    CHECK_THROWS_AS(parse_cli({"denoise", "--synthetic", "8by8"}), ConfigError);
  }
}

TEST_CASE("denoise subcommand") {
  const fs::path dir = temp_dir();
  SUBCASE("constant input is returned unchanged") {
    write_pgm(GridImage(9, 4, 77.0 / 255.0), (dir / "c.pgm").string());
    CliConfig c = parse_cli({"denoise", "--input", (dir / "c.pgm").string(), "--output",
                             (dir / "c_out.pgm").string(), "--csv", (dir / "c.csv").string()});
    std::ostringstream out, err;
    REQUIRE(run_denoise(c, out, err) == kExitOk);
    std::ifstream a(dir / "c.pgm", std::ios::binary), b(dir / "c_out.pgm", std::ios::binary);
    CHECK(std::string(std::istreambuf_iterator<char>(a), {}) == std::string(std::istreambuf_iterator<char>(b), {}));
    std::ifstream csv(dir / "c.csv");
    const auto rows = lines(std::string(std::istreambuf_iterator<char>(csv), {}));
    REQUIRE(rows.size() == 2);
    CHECK(rows[0] == kCsvHeader);
    CHECK(rows[1].rfind("1,0,", 0) == 0);
  }
  SUBCASE("exact preconditioner reproduces DR in the log") {
    auto gaps = [&](const std::string& alg, const std::string& precond) {
      CliConfig c = parse_cli({"denoise", "--synthetic", "24x24", "--noise", "0.1", "--algorithm", alg,
                               "--precond", precond, "--max-iter", "200", "--output", (dir / "o.pgm").string(),
                               "--csv", (dir / (alg + ".csv")).string()});
      std::ostringstream out, err;
      REQUIRE(run_denoise(c, out, err) == kExitOk);
      std::ifstream in(dir / (alg + ".csv"));
      std::vector<double> g;
      for (const auto& row : lines(std::string(std::istreambuf_iterator<char>(in), {}))) {
        if (row == kCsvHeader) continue;
        g.push_back(std::stod(row.substr(row.find(',') + 1)));
      }
      return g;
    };
    const auto a = gaps("dr", "exact"), b = gaps("pdr", "exact");
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) <= 1e-12);
  }
  SUBCASE("CSV columns increase") {
    CliConfig c = parse_cli({"denoise", "--synthetic", "32x32", "--noise", "0.1", "--max-iter", "300", "--output",
                             (dir / "o.pgm").string(), "--csv", (dir / "inc.csv").string()});
    std::ostringstream out, err;
    REQUIRE(run_denoise(c, out, err) == kExitOk);
    std::ifstream in(dir / "inc.csv");
    long prev_iter = 0;
    double prev_ms = -1.0;
    for (const auto& row : lines(std::string(std::istreambuf_iterator<char>(in), {}))) {
      if (row == kCsvHeader) continue;
      const long it = std::stol(row.substr(0, row.find(',')));
      const double ms = std::stod(row.substr(row.rfind(',') + 1));
      CHECK(it > prev_iter);
      CHECK(ms > prev_ms);
      prev_iter = it;
      prev_ms = ms;
    }
  }
  SUBCASE("prerequisites") {
    CliConfig c = parse_cli({"denoise", "--synthetic", "8x8", "--algorithm", "adrsc", "--output",
                             (dir / "o.pgm").string()});
    std::ostringstream out, err;
    CHECK_THROWS_AS(run_denoise(c, out, err), ConfigError);
  }
}

TEST_CASE("bench subcommand") {
  CliConfig c = parse_cli({"bench", "--synthetic", "32x32", "--noise", "0.1", "--algorithms", "dr,adr,padr@gs3",
                           "--tolerances", "1e-4,1e-6"});
  std::ostringstream out, err;
  REQUIRE(run_bench(c, out, err) == kExitOk);
  const auto rows = lines(out.str());
  REQUIRE(rows.size() == 4);
  CHECK(rows[0] == "algorithm,0.0001,1e-06");
  CHECK(rows[3].rfind("padr@gs3,", 0) == 0);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    // alg,"i1,ms1","i2,ms2"
    const auto q1 = rows[r].find('"'), q3 = rows[r].find('"', rows[r].find('"', q1 + 1) + 1);
    const long i1 = std::stol(rows[r].substr(q1 + 1)), i2 = std::stol(rows[r].substr(q3 + 1));
    CHECK(i1 <= i2);
  }

  CliConfig single = parse_cli({"bench", "--synthetic", "16x16", "--algorithms", "dr", "--tolerances", "1e-3"});
  std::ostringstream out1, err1;
  REQUIRE(run_bench(single, out1, err1) == kExitOk);
  CHECK(lines(out1.str()).size() == 2);
}

TEST_CASE("selftest") {
  for (const auto& check : run_selftest_suite("")) {
    CAPTURE(check.name);
    CAPTURE(check.detail);
    CHECK(check.passed);
  }
  const auto faulty = run_selftest_suite("div-sign");
  CHECK_FALSE(faulty.front().passed);
  std::ostringstream out, err;
  CHECK(run_selftest(parse_cli({"selftest", "--inject-fault", "div-sign"}), out, err) == kExitSelftestFailed);
  CHECK(run_selftest(parse_cli({"selftest"}), out, err) == kExitOk);
}
