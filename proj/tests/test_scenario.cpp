#include "anw/scenario.hpp"

#include "support.hpp"

#include <doctest.h>

using namespace anw;
using nlohmann::json;

namespace {

json base() {
  return json::parse(R"({
    "array": {"n": 5, "coupling_strength": 0.24, "length": 30.0},
    "pump": {"amplitudes": [0.092, 0.089, 0.091, 0.091, 0.092], "phases_pi": [-0.5, -0.5, -0.5, -0.5, -0.5]},
    "measurement": {"theta_pi": [0, 0, 0, 0, 0]},
    "graph": {"preset": "linear"}
  })");
}

RunOutput run(const std::string& cmd, const json& sc, RunOptions opt = {}) {
  return run_scenario(cmd, load_scenario(sc.dump()), opt);
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::internal;
}

}  // namespace

TEST_CASE("commands") {
  CHECK(scenario_commands().size() == 6);
}

TEST_CASE("schema violations are config errors") {
  json sc = base();
  sc["array"]["bogus"] = 1;
  CHECK(code_of([&] { load_scenario(sc.dump()); }) == ErrorCode::config);
  sc = base();
  sc["extra"] = {};
  CHECK(code_of([&] { load_scenario(sc.dump()); }) == ErrorCode::config);
  CHECK(code_of([&] { load_scenario("{not json"); }) == ErrorCode::config);
  sc = base();
  sc["pump"]["amplitudes"] = {0.1, 0.1};
  CHECK(code_of([&] { load_scenario(sc.dump()); }) == ErrorCode::config);
  sc = base();
  sc["array"]["n"] = "five";
  CHECK(code_of([&] { load_scenario(sc.dump()); }) == ErrorCode::config);
  sc = base();
  sc["graph"]["preset"] = "hexagon";
  CHECK(code_of([&] { run("verify", sc); }) == ErrorCode::config);
  CHECK(code_of([&] { run("nope", base()); }) == ErrorCode::invalid_argument);
}

TEST_CASE("parsed blocks") {
  json sc = base();
  sc["graph"] = json::parse(R"({"adjacency": [[0,1,0,0,0],[1,0,1,0,0],[0,1,0,1,0],[0,0,1,0,1],[0,0,0,1,0]],
                                "labeling": [2,1,3,4,5], "bounds": [[1,2,1.5]]})");
  const GraphSpec g = parse_graph(sc, 5);
  CHECK(g.labeling[0] == 1);
  CHECK(g.bounds[0].first == 0);
  CHECK(g.bounds[0].second == 1);
  CHECK(g.bounds[0].bound == 1.5);
  const PumpProfile p = parse_pump(base(), 5);
  CHECK(p.phases[0] == doctest::Approx(-M_PI / 2));
  json flat = base();
  flat["pump"] = {{"flat", 0.015}, {"phase_pi", 0.5}};
  CHECK(parse_pump(flat, 5).is_flat());
  RunOptions opt;
  opt.seed = 77;
  CHECK(parse_optimizer(base(), opt).seed == 77);
}

TEST_CASE("verify certifies a reference row and rejects vacuum") {
  const RunOutput ok = run("verify", base());
  CHECK(ok.certified == 1);
  CHECK(ok.record["certified"] == true);
  json vac = base();
  vac.erase("pump");
  const RunOutput bad = run("verify", vac);
  CHECK(bad.certified == 0);
  CHECK(bad.csv.find("node,nullifier_variance") == 0);
}

TEST_CASE("verify without a graph checks the vlf inequalities") {
  json sc = base();
  sc.erase("graph");
  const RunOutput r = run("verify", sc);
  CHECK(r.certified >= 0);
  CHECK(r.record["results"]["vlf"].size() == 4);
}

TEST_CASE("supermodes") {
  const RunOutput r = run("supermodes", base());
  CHECK(r.record["results"]["eigenvalues"].size() == 5);
  CHECK(r.csv.rfind("k,lambda,m_1", 0) == 0);
  CHECK(r.certified == -1);
}

TEST_CASE("propagate") {
  json sc = base();
  sc["sweep"] = {{"from", 0.0}, {"to", 30.0}, {"steps", 4}};
  const RunOutput r = run("propagate", sc);
  CHECK(r.record["results"]["rows"].size() == 4);
  CHECK(r.csv.rfind("z_mm,individual_1_var,individual_1_db", 0) == 0);
  // the z = 0 row is vacuum
  CHECK(r.record["results"]["rows"][0][1].get<double>() == doctest::Approx(1.0));
}

TEST_CASE("vlf sweep without optimization") {
  json sc = base();
  sc["pump"] = {{"flat", 0.015}};
  sc["sweep"] = {{"variable", "eta"}, {"from", 0.0}, {"to", 0.015}, {"steps", 2}};
  const RunOutput r = run("vlf", sc);
  const auto& pts = r.record["results"]["points"];
  REQUIRE(pts.size() == 2);
  CHECK(pts[0]["rho_sum"].get<double>() == doctest::Approx(16.0));
}

TEST_CASE("cluster with zero generations reproduces the start point") {
  json sc = base();
  sc["optimizer"] = {{"fitness", "F_C"}, {"generations", 0}};
  const RunOutput r = run("cluster", sc);
  const auto& v = r.record["results"]["certification"]["nullifier_variances"];
  const std::vector<double> reference{0.20, 0.39, 0.37, 0.38, 0.20};
  for (std::size_t i = 0; i < 5; ++i) CHECK(std::abs(v[i].get<double>() - reference[i]) <= 0.1);
  CHECK(r.certified == 1);
}

TEST_CASE("records are re-runnable") {
  json sc = base();
  sc["optimizer"] = {{"fitness", "F_C"}, {"generations", 3}, {"population", 8}, {"parents", 2}};
  RunOptions opt;
  opt.seed = 5;
  const RunOutput a = run("cluster", sc, opt);
  const RunOutput b = run_scenario("cluster", load_scenario(a.record.dump()), RunOptions{});
  CHECK(a.record["results"] == b.record["results"]);
  CHECK(b.record["seed"] == 5);

  json v = base();
  v["pump"] = {{"flat", 0.015}};
  const RunOutput c = run("vlf", v, opt);
  const RunOutput d = run_scenario("vlf", load_scenario(c.record.dump()), RunOptions{});
  CHECK(c.record["results"] == d.record["results"]);
}

TEST_CASE("oracle-check on a flat pump") {
  json sc = base();
  sc["pump"] = {{"flat", 0.015}};
  sc["oracle"] = {{"eta_steps", 3}};
  const RunOutput r = run("oracle-check", sc);
  const auto& cmp = r.record["results"]["comparisons"];
  REQUIRE(cmp.size() == 4);
  CHECK(cmp[0]["second"] == "rk4");
  CHECK(cmp[0]["agree"] == true);
  CHECK(cmp[2]["agree"] == true);  // exact vs closed form
}
