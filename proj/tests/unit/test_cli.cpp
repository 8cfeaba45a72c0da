#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "abeltheta/cli.hpp"

using namespace abeltheta;

namespace {

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::InvalidArgument;
}

const char* kSquare = R"({"n": 1, "delta": [2], "Z_re": [[0]], "Z_im": [[1]]})";

}  // namespace

TEST_CASE("config parsing") {
  const Config c = parse_config("{n:1, delta:[1], Z_re:[[0]], Z_im:[[1]]}");
  CHECK(c.n == 1);
  CHECK(c.delta == std::vector<int>{1});
  CHECK(c.eps == 1e-12);
  CHECK(c.nodes == 32);
  CHECK(c.seed == 42);
  CHECK(c.period().Z()(0, 0) == cd(0.0, 1.0));

  const Config d = parse_config(R"({"n": 2, "delta": [1, 2], "Z_im": [[1, 0], [0, 2]], "eps": 1e-10, "seed": 7})");
  CHECK(d.Z_re.isZero());
  CHECK(d.eps == 1e-10);
  CHECK(d.seed == 7);
}

TEST_CASE("config errors separate syntax from admissibility") {
  CHECK(code_of([] { parse_config("{n:1, delta:[1], Z_im:[[-1]]}"); }) == ErrorCode::ValidationError);
  try {
    parse_config("{n:1, delta:[1], Z_im:[[-1]]}");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("Z_im") != std::string::npos);
    CHECK(std::string(e.what()).find("NotPositiveDefinite") != std::string::npos);
  }
  CHECK(code_of([] { parse_config("{n:2, delta:[2,3], Z_im:[[1,0],[0,1]]}"); }) == ErrorCode::ValidationError);
  CHECK(code_of([] { parse_config("{n:1, delta:[1]}"); }) == ErrorCode::ValidationError);
  CHECK(code_of([] { parse_config("{n:2, delta:[1], Z_im:[[1]]}"); }) == ErrorCode::ValidationError);
  CHECK(code_of([] { parse_config("{n:1, delta:[1], Z_im:[[1]], eps: 0.5}"); }) == ErrorCode::ValidationError);
  CHECK(code_of([] { parse_config("{n:1, delta:[1], Z_im:[[1]], nodes: 2}"); }) == ErrorCode::ValidationError);
  CHECK(code_of([] { parse_config("{n:1, delta:[1], Z_im:[[1]], colour: 3}"); }) == ErrorCode::ParseError);
  CHECK(code_of([] { parse_config("{n:1, delta:[1], Z_im:[[1]]"); }) == ErrorCode::ParseError);
  CHECK(code_of([] { parse_config("{n:1.5, delta:[1], Z_im:[[1]]}"); }) == ErrorCode::ParseError);
  CHECK(code_of([] { load_config("/nonexistent/config.json"); }) == ErrorCode::ParseError);
}

TEST_CASE("number formatting") {
  CHECK(format_complex(cd(1.5, -2.0)) == "1.5-2i");
  CHECK(format_complex(cd(1.5, 2.0)) == "1.5+2i");
  CHECK(format_complex(cd(-0.0, -0.0)) == "0+0i");
  CHECK(format_real(0.1) == "0.10000000000000001");
  CHECK(format_characteristic(Characteristic{{0, 1}}) == "(0,1)");
}

TEST_CASE("checks and the exit contract") {
  CHECK(make_check("a", 0.5, 1.0).pass);
  CHECK_FALSE(make_check("a", 1.0, 1.0).pass);
  CHECK(make_check("a", 0.0, 0.0).pass);
  CHECK_FALSE(make_check("a", 1e-300, 0.0).pass);
  CHECK_FALSE(make_check("a", std::nan(""), 1.0).pass);
  CHECK(make_floor_check("a", 2.0, 1.0).pass);

  Report r;
  r.command = "verify";
  r.checks = {make_check("good", 0.1, 1.0), make_check("bad", 2.0, 1.0)};
  CHECK_FALSE(r.all_pass());
  const std::string text = r.render();
  CHECK(text.find("[FAIL] bad value=2 threshold=1") != std::string::npos);
  CHECK(text.find("summary: 1/2 checks passed") != std::string::npos);
}

TEST_CASE("gram command prints the closed-form diagonal") {
  const Report r = run_command("gram", parse_config(kSquare), {});
  CHECK(r.all_pass());
  CHECK(r.csv.rfind("\"m\",\"(0)\",\"(1)\"\n", 0) == 0);
  const auto row0 = r.csv.find("\n\"(0)\",") + 1;
  const auto row1 = r.csv.find("\n\"(1)\",") + 1;
  REQUIRE(row0 != 0);
  REQUIRE(row1 != 0);
  const double g00 = std::stod(r.csv.substr(row0 + 6));
  const auto comma = r.csv.find(',', row1 + 6);
  const double g11 = std::stod(r.csv.substr(comma + 1));
  CHECK(g00 == doctest::Approx(std::sqrt(2.0)).epsilon(1e-8));
  CHECK(g11 == doctest::Approx(std::sqrt(2.0) * std::exp(std::numbers::pi / 2.0)).epsilon(1e-8));
}

TEST_CASE("eval command validates its options") {
  const Config c = parse_config(kSquare);
  CommandOptions o;
  o.m = {5};
  CHECK(code_of([&] { run_command("eval", c, o); }) == ErrorCode::CharacteristicOutOfRange);
  o.m = {0, 1};
  CHECK(code_of([&] { run_command("eval", c, o); }) == ErrorCode::DimensionMismatch);
  o.m = {1};
  o.z_re = {0.3};
  const Report r = run_command("eval", c, o);
  CHECK(r.all_pass());
  CHECK(code_of([&] { run_command("plot", c, {}); }) == ErrorCode::UnknownCommand);
}

TEST_CASE("reports are reproducible") {
  const Config c = parse_config(kSquare);
  CHECK(run_command("verify", c, {}).render() == run_command("verify", c, {}).render());
  CHECK(run_command("curvature", c, {}).all_pass());
}
