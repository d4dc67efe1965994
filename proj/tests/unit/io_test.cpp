#include <doctest.h>

#include <random>
#include <sstream>

#include "fracphi/error.hpp"
#include "fracphi/io.hpp"
#include "oracles.hpp"

using namespace fracphi;
using io::json;

TEST_CASE("diagram json round trip") {
  for (const Diagram& d : {catalog::tree_vertex(), catalog::fish(), catalog::sunset(), catalog::nut(),
                           catalog::vacuum_triangle()}) {
    CHECK(io::diagram_from_json(json::parse(io::to_json(d).dump())) == d);
  }
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    const Diagram d = oracle::random_diagram(2 + static_cast<int>(rng() % 3), 2 * static_cast<int>(rng() % 3), rng);
    CHECK(io::diagram_from_json(io::to_json(d)) == d);
  }
  const json j = io::to_json(catalog::sunset());
  CHECK(j["n"] == 2);
  CHECK(j["edges"].size() == 3);
  CHECK(j["legs"][0] == json::array({1, 0}));
}

TEST_CASE("malformed diagram json") {
  CHECK_THROWS_AS(io::diagram_from_json(json::parse(R"({"edges": []})")), InvalidArgument);
  CHECK_THROWS_AS(io::diagram_from_json(json::parse(R"({"n": 1, "edges": [], "legs": [[1, 0]]})")), InvalidArgument);
  CHECK_THROWS_AS(io::diagram_from_json(json::parse(R"({"n": 1, "edges": [[0]], "legs": []})")), InvalidArgument);
  CHECK_THROWS_AS(io::resolve_diagram("no-such-diagram.json"), InvalidArgument);
  CHECK(io::resolve_diagram("sunset") == catalog::sunset());
}

TEST_CASE("enumeration json round trip") {
  const auto ws = enumerate_diagrams(3, 2);
  const json j = io::enumeration_json(ws);
  REQUIRE(j.size() == ws.size());
  CHECK(j[0].contains("certificate"));
  CHECK(j[0]["symmetryFactor"].get<std::string>().find('/') != std::string::npos);
  const auto back = io::enumeration_from_json(json::parse(j.dump()));
  REQUIRE(back.size() == ws.size());
  for (std::size_t i = 0; i < ws.size(); ++i) {
    CHECK(back[i].diagram == ws[i].diagram);
    CHECK(back[i].form == ws[i].form);
    CHECK(back[i].contraction_count == ws[i].contraction_count);
  }
}

TEST_CASE("doubles print in shortest round-trip form") {
  CHECK(io::format_double(0.1) == "0.1");
  CHECK(io::format_double(100.0) == "100");
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 1000; ++i) {
    const double x = u(rng) * std::pow(10.0, static_cast<int>(rng() % 20) - 10);
    CHECK(std::stod(io::format_double(x)) == x);
  }
}

TEST_CASE("csv round trip with metadata and quoting") {
  io::CsvTable t;
  t.metadata = {{"tool", "fracphi"}, {"config", R"({"a":1})"}};
  t.columns = {"name", "value"};
  t.rows = {{"plain", "1"}, {"with,comma", "2"}, {"with \"quote\"", "3"}};
  std::stringstream ss;
  io::write_csv(ss, t);
  const io::CsvTable back = io::read_csv(ss);
  CHECK(back.metadata == t.metadata);
  CHECK(back.columns == t.columns);
  CHECK(back.rows == t.rows);
  std::stringstream ragged("a,b\n1,2\n3\n");
  CHECK_THROWS_AS(io::read_csv(ragged), InvalidArgument);
  std::stringstream empty("# only: metadata\n");
  CHECK_THROWS_AS(io::read_csv(empty), InvalidArgument);
}

TEST_CASE("integration tables feed scaling points") {
  const std::vector<ScalingPoint> pts{{100.0, 1.5, 0.01}, {1000.0, 2.25, 0.02}};
  const std::vector<IntegralResult> res{{1.5, 0.01, 10, Method::kAdaptiveQuadrature},
                                        {2.25, 0.02, 20, Method::kAdaptiveQuadrature}};
  io::CsvTable t = io::integration_csv(pts, res);
  CHECK(t.columns == std::vector<std::string>{"kappa", "value", "error", "evaluations"});
  std::stringstream ss;
  io::write_csv(ss, t);
  const auto back = io::scaling_points(io::read_csv(ss));
  REQUIRE(back.size() == 2);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(back[i].kappa == pts[i].kappa);
    CHECK(back[i].value == pts[i].value);
    CHECK(back[i].error == pts[i].error);
  }
}

TEST_CASE("classification and counterterm tables") {
  const auto table = classify(Alpha(2, 3), 3);
  const io::CsvTable c = io::classification_csv(table.alpha, table.divergent);
  CHECK(c.columns == std::vector<std::string>{"alpha", "n", "L", "E", "l", "degree", "divergent", "certificate"});
  CHECK(c.rows.size() == 3);
  const io::CsvTable ct = io::counterterm_csv(counterterm_report(table));
  CHECK(ct.columns == std::vector<std::string>{"E", "degree", "operator", "cutoffBehavior"});
}

TEST_CASE("recipe json") {
  const auto ri = build_renormalized_integrand(catalog::fish(), Alpha(3, 4));
  const json j = io::recipe_json(ri, route_momenta(catalog::fish()));
  REQUIRE(j.size() == 2);
  CHECK(j[0]["sign"] == 1);
  CHECK(j[0]["zeroedMomenta"].empty());
  CHECK(j[1]["sign"] == -1);
  CHECK(j[1]["zeroedMomenta"][0]["order"] == 0);
  CHECK(j[1]["factors"].size() == 2);
}

TEST_CASE("scaling json schema") {
  std::vector<ScalingPoint> pts;
  for (double k : {1e2, 1e3, 1e4, 1e5}) pts.push_back({k, std::sqrt(k), 1e-3});
  const json j = io::scaling_json(scaling_fit(pts));
  for (const char* key : {"model", "exponent", "standardError", "interceptB", "residual", "kappaGrid", "decisive"}) {
    CHECK(j.contains(key));
  }
  CHECK(j["model"] == "power");
}
