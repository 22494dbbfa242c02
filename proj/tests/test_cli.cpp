#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "hauteur/cli.hpp"
#include "hauteur/error.hpp"
#include "hauteur/heights_q.hpp"
#include "hauteur/measure_lab.hpp"
#include "hauteur/numeric/parse.hpp"

using namespace hauteur;
using nlohmann::json;

namespace {

std::filesystem::path scratch() {
  auto d = std::filesystem::temp_directory_path() / "hauteur_test_cli";
  std::filesystem::create_directories(d);
  return d;
}

std::string fixture(const char* name) { return cli::fixture_dir() + "/" + name; }

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

struct Run {
  int code;
  json report;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli::run(args, out, err);
  const std::string text = out.str().empty() ? err.str() : out.str();
  return {code, json::parse(text)};
}

ErrorCode code_of(const std::string& text) {
  try {
    cli::parse_config_text(text);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error");
  return ErrorCode::Usage;
}

}  // namespace

TEST_CASE("bundled fixtures") {
  cli::JobConfig s = cli::parse_config(fixture("silverman.json"));
  CHECK_FALSE(s.constant_x);
  std::vector<Rat> finite;
  bool inf = false;
  for (const auto& sp : singular_parameters(s.model)) {
    if (sp.place.is_infinity()) inf = true;
    else if (sp.place.kind == FfPlace::Kind::Rational) finite.push_back(sp.place.value);
  }
  CHECK(inf);
  REQUIRE(finite.size() == 3);
  CHECK(finite[0] == Rat(-1));
  CHECK(finite[1] == parse_rational_value("-2/27"));
  CHECK(finite[2] == Rat(0));

  cli::JobConfig l = cli::parse_config(fixture("legendre_x2.json"));
  CHECK(l.constant_x);
  CHECK_FALSE(l.point.y.has_value());
  // bare file names fall back to the fixture directory
  CHECK(cli::parse_config("legendre_x5.json").constant_x);
}

TEST_CASE("config errors") {
  const std::string bad_a6 = R"({"curve": {"a6": "t/("}, "section": {"x": "0"}})";
  try {
    cli::parse_config_text(bad_a6);
    FAIL("accepted");
  } catch (const ParseError& e) {
    CHECK(e.position() == 3);
    CHECK(std::string(e.what()).find("curve.a6") != std::string::npos);
  }
  const ErrorCode malformed = code_of(R"({"curve": {"a1": )");
  const ErrorCode off = code_of(R"({"curve": {"a1": "1/t", "a2": "2/t", "a3": "1/t"}, "section": {"x": "1", "y": "2"}})");
  const ErrorCode zero_disc = code_of(R"({"curve": {"a4": "0", "a6": "0"}, "section": {"x": "0"}})");
  CHECK(malformed == ErrorCode::Parse);
  CHECK(off == ErrorCode::OffCurve);
  CHECK(zero_disc == ErrorCode::NotEllipticSurface);

  Run r = run({"height", fixture("silverman.json"), "--t", "1/0"});
  CHECK(r.code == 1);
  CHECK(r.report["status"] == "error");
  CHECK(r.report["error"].contains("code"));
}

TEST_CASE("fnv1a") {
  CHECK(cli::hex64(cli::fnv1a("")) == "cbf29ce484222325");
  CHECK(cli::hex64(cli::fnv1a("a")) == "af63dc4c8601ec8c");
  CHECK(cli::hex64(cli::fnv1a("foobar")) == "85944171f73967e8");
}

TEST_CASE("torsion subcommand") {
  auto csv = scratch() / "t2.csv";
  Run r = run({"torsion", fixture("legendre_x2.json"), "--n", "2", "--out", csv.string()});
  CHECK(r.code == 0);
  CHECK(r.report["status"] == "ok");
  const std::string text = slurp(csv);
  CHECK(text.find("1,2,0,0,1,1,2\r\n") != std::string::npos);
  CHECK(text.find("2,4,0,1,2,1,4\r\n") != std::string::npos);
  bool t2 = false, t4 = false;
  for (const auto& e : r.report["result"]["rational"]) {
    t2 = t2 || (e["t"] == "2" && e["order"] == 2);
    t4 = t4 || (e["t"] == "4" && e["order"] == 4);
  }
  CHECK(t2);
  CHECK(t4);
  // key order is fixed
  std::ostringstream out, err;
  cli::run({"torsion", fixture("legendre_x2.json"), "--n", "2", "--out", csv.string()}, out, err);
  const std::string s = out.str();
  CHECK(s.find("\"command\"") < s.find("\"tool_version\""));
  CHECK(s.find("\"tool_version\"") < s.find("\"inputs_digest\""));
  CHECK(s.find("\"result\"") < s.find("\"status\""));
  CHECK(s.find("timings") == std::string::npos);
}

TEST_CASE("pair subcommand") {
  Run r = run({"pair", fixture("legendre_x2.json"), fixture("legendre_x5.json"), "--nmax", "6"});
  CHECK(r.code == 0);
  CHECK(r.report["result"]["common"].empty());
}

TEST_CASE("render determinism") {
  auto a = scratch() / "r1.ppm", b = scratch() / "r2.ppm";
  std::ostringstream o1, o2, e;
  int c1 = cli::run({"render", fixture("silverman.json"), "--region", "-2,1,-1,1", "--nx", "97", "--ny", "65", "--out",
                     a.string()}, o1, e);
  int c2 = cli::run({"render", fixture("silverman.json"), "--region", "-2,1,-1,1", "--nx", "97", "--ny", "65", "--out",
                     b.string()}, o2, e);
  CHECK(c1 == 0);
  CHECK(c2 == 0);
  const std::string pa = slurp(a), pb = slurp(b);
  CHECK(pa.size() > 97 * 65 * 3);
  CHECK(pa == pb);
  CHECK(json::parse(o1.str())["artifacts"][0]["fnv1a"] == json::parse(o2.str())["artifacts"][0]["fnv1a"]);
}

TEST_CASE("numbers round-trip") {
  Run h = run({"height", fixture("silverman.json"), "--t", "3", "--depth", "5"});
  REQUIRE(h.code == 0);
  cli::JobConfig c = cli::parse_config(fixture("silverman.json"));
  Curve<Rat> E = specialize_cleared(c.model, Rat(3));
  const Rat x = parse_rational_value(h.report["result"]["x"].get<std::string>());
  CanonicalHeight ch = canonical_height(E, x, 5);
  CHECK(h.report["result"]["canonical_height"].get<double>() == ch.value);
  CHECK(h.report["result"]["limit_estimate"].get<double>() == ch.limit_estimate);
  CHECK(parse_rational_value(h.report["result"]["surface_height"].get<std::string>()) == ff_canonical_height(c.point).value);

  auto base = scratch() / "dens";
  Run d = run({"density", fixture("legendre_x2.json"), "--region", "-3,5,-4,4", "--nx", "33", "--out", base.string()});
  REQUIRE(d.code != 1);
  cli::JobConfig l = cli::parse_config(fixture("legendre_x2.json"));
  GridSpec g = parse_region("-3,5,-4,4", 33, 33);
  DensityGrid ref = laplacian_density(grid_potential(l.point, g), divisor_DEP(l.point).degree);
  CHECK(d.report["result"]["mass"].get<double>() == ref.mass);
  std::istringstream csv(slurp(scratch() / "dens.csv"));
  std::string line;
  std::getline(csv, line);
  CHECK(line == "re,im,value\r");
  std::size_t k = 0, exact = 0;
  while (std::getline(csv, line)) {
    const std::string v = line.substr(line.rfind(',') + 1, line.size() - line.rfind(',') - 2);
    if (!v.empty() && std::strtod(v.c_str(), nullptr) == ref.values[k]) ++exact;
    if (v.empty() && std::isnan(ref.values[k])) ++exact;
    ++k;
  }
  CHECK(k == g.size());
  CHECK(exact == k);
}
