#include "stabforge/errors.hpp"
#include "stabforge/report.hpp"
#include "stabforge/scenario.hpp"

#include <doctest.h>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>

using namespace stabforge;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected a stabforge::Error");
  return ErrorCode::IOFailure;
}

Config data_config(const std::string& name) { return Config::load(std::string(STABFORGE_TEST_DATA) + "/" + name); }

}  // namespace

TEST_CASE("config text: sections, comments, errors") {
  const Config c = Config::parse("kind = mirror  # trailing\n\n[closed]\nr_lo = 0.5\n[]\na = 1,2\n");
  CHECK(c.get("kind") == "mirror");
  CHECK(c.get("closed.r_lo") == "0.5");
  CHECK(c.get("a") == "1,2");
  CHECK(c.get_or("missing", "x") == "x");
  CHECK(code_of([] { Config::parse("a = 1\na = 2\n"); }) == ErrorCode::ConfigInvalid);
  CHECK(code_of([] { Config::parse("just words\n"); }) == ErrorCode::ConfigInvalid);
  CHECK(code_of([] { Config::parse("[open\n"); }) == ErrorCode::ConfigInvalid);
  CHECK(code_of([] { Config::parse("bad key = 1\n"); }) == ErrorCode::ConfigInvalid);
  CHECK(code_of([&] { c.get("nope"); }) == ErrorCode::ConfigInvalid);
  CHECK(code_of([] { Config::load("/nonexistent/config.cfg"); }) == ErrorCode::IOFailure);
}

TEST_CASE("value parsers") {
  CHECK(parse_complex("1.5") == cplx{1.5, 0.0});
  CHECK(parse_complex(" -1 , 2e-1 ") == cplx{-1.0, 0.2});
  CHECK(parse_int("-12") == -12);
  CHECK(code_of([] { parse_int("1.5"); }) == ErrorCode::ConfigInvalid);
  CHECK(code_of([] { parse_real("nan"); }) == ErrorCode::ConfigInvalid);
  CHECK(code_of([] { parse_complex("1,2,3"); }) == ErrorCode::ConfigInvalid);
  const Generator g = parse_generator("O(1)*Sky[2]");
  CHECK(g.to_string() == "O(1)*Sky[2]");
  CHECK(parse_generator("O(-3)").shift == 0);
  CHECK(code_of([] { parse_generator("O(1)*L(2)"); }) == ErrorCode::ConfigInvalid);
  const FormalObject obj = parse_object("O(0)*O(1); Sky*O(2)[-1]");
  CHECK(obj.n == 2);
  CHECK(obj.filtration.size() == 2);
  CHECK(code_of([] { parse_object("O(0)*O(1);O(2)"); }) == ErrorCode::ConfigInvalid);
}

TEST_CASE("schema validation happens before any computation") {
  auto bad = [](const std::string& text) { return code_of([&] { run_scenario(Config::parse(text)); }); };
  CHECK(bad("a = 1\n") == ErrorCode::ConfigInvalid);
  CHECK(bad("kind = torus\n") == ErrorCode::ConfigInvalid);
  CHECK(bad("kind = mirror\nradius = 2\n") == ErrorCode::ConfigInvalid);
  CHECK(bad("kind = mirror\nk = 0.5\n") == ErrorCode::ConfigInvalid);
  CHECK(bad("kind = p1\n") == ErrorCode::ConfigInvalid);
  CHECK(bad("kind = p1\nstab.type = geometric\nstab.tau = 0,-1\n") == ErrorCode::ConfigInvalid);
  CHECK(bad("kind = product\nfactors = 1\nfactor.0.type = geometric\nfactor.1.type = algebraic\n") == ErrorCode::ConfigInvalid);
  CHECK(bad("kind = product\nfactors = 2\nfactor.0.type = geometric\nfactor.1.type = geometric\n") == ErrorCode::ConfigInvalid);
  CHECK(bad("kind = slag\nseeds = 0,0\n") == ErrorCode::ConfigInvalid);
  CHECK(bad("kind = surface\ntau1 = 1,0\n") == ErrorCode::ConfigInvalid);
}

TEST_CASE("JSON lines: fields, witness rule, ordering") {
  ReportRecord r;
  r.id = "b.check";
  r.module = "m";
  r.operation = "op";
  r.params = {{"x", "1"}};
  r.values = {{"err", 1e-3, 1e-2}, {"count", 4.0, std::nullopt}};
  const auto j = nlohmann::json::parse(to_json_line(r));
  CHECK(j["status"] == "pass");
  CHECK(j["witness"].is_null());
  CHECK(j["values"]["err"] == 1e-3);
  CHECK(j["tolerances"]["err"] == 1e-2);
  CHECK_FALSE(j["tolerances"].contains("count"));
  CHECK(j["provenance"]["params"]["x"] == "1");
  CHECK(j["provenance"]["params_hash"].get<std::string>().size() == 16);

  r.status = Status::Fail;
  CHECK_THROWS_AS(to_json_line(r), std::logic_error);
  r.witness = "counterexample";
  CHECK(nlohmann::json::parse(to_json_line(r))["witness"] == "counterexample");

  ReportRecord a = r;
  a.id = "a.check";
  a.status = Status::Skipped;
  const std::string out = render_report({r, a});
  CHECK(out.find("a.check") < out.find("b.check"));
  CHECK(exit_code({a}) == 0);
  CHECK(exit_code({a, r}) == 1);
}

TEST_CASE("params hash is FNV-1a over sorted key=value lines") {
  CHECK(params_hash({}) == 1469598103934665603ull);
  CHECK(params_hash({{"a", "1"}}) != params_hash({{"a", "2"}}));
  CHECK(params_hash({{"a", "1"}, {"b", "2"}}) == params_hash({{"b", "2"}, {"a", "1"}}));
}

TEST_CASE("scenario kinds produce passing records from the bundled configs") {
  for (const char* name : {"p1_geometric.cfg", "product_mixed.cfg", "surface.cfg", "elliptic.cfg", "mirror.cfg"}) {
    const auto recs = run_scenario(data_config(name));
    CHECK(!recs.empty());
    CHECK(exit_code(recs) == 0);
  }
  const auto half = run_scenario(data_config("product_half_step.cfg"));
  CHECK(exit_code(half) == 1);
  bool found = false;
  for (const auto& r : half)
    if (r.id == "product.ext-exceptional") {
      found = true;
      CHECK(r.status == Status::Fail);
      CHECK(r.witness.find("Hom^") != std::string::npos);
    }
  CHECK(found);
}

TEST_CASE("identical configs give byte-identical reports") {
  const Config c = data_config("product_mixed.cfg");
  CHECK(render_report(run_scenario(c)) == render_report(run_scenario(c)));
}

TEST_CASE("emit_paths writes one CSV per path and nothing for no paths") {
  const auto dir = std::filesystem::temp_directory_path() / "stabforge_emit_test";
  std::filesystem::remove_all(dir);
  CHECK(emit_paths({}, dir.string()).empty());
  CHECK_FALSE(std::filesystem::exists(dir));
  SLagProblem p;
  p.seed = {0.8, 0.3};
  const auto files = emit_paths({trace_slag(p), trace_slag(p)}, dir.string());
  REQUIRE(files.size() == 2);
  std::ifstream f0(files[0]), f1(files[1]);
  const std::string s0((std::istreambuf_iterator<char>(f0)), {}), s1((std::istreambuf_iterator<char>(f1)), {});
  CHECK(s0 == s1);
  CHECK(s0 == path_csv(trace_slag(p)));
  std::filesystem::remove_all(dir);
  CHECK(code_of([&] { emit_paths({trace_slag(p)}, "/proc/stabforge/cannot"); }) == ErrorCode::IOFailure);
}

TEST_CASE("closed orbit CSV starts and ends at the same point") {
  const ClosedSearch cs = find_closed_slag({}, {}, 0.5, 3.141592653589793, 1.0, 2.0, 2, 1e-6);
  REQUIRE(cs.orbit);
  const std::string csv = path_csv(*cs.orbit);
  const auto first = csv.find('\n', csv.find('\n') + 1) + 1;
  const auto last = csv.rfind('\n', csv.size() - 2) + 1;
  auto z = [&](std::size_t pos) {
    double t, x, y;
    std::sscanf(csv.c_str() + pos, "%lf,%lf,%lf", &t, &x, &y);
    return cplx{x, y};
  };
  CHECK(std::abs(z(first) - z(last)) <= 1e-6 * (1.0 + std::abs(z(first))));
}
