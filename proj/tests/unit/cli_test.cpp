#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fracphi/cli.hpp"
#include "fracphi/io.hpp"

using namespace fracphi;
using io::json;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  Run r;
  r.code = cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string last_line(const std::string& s) {
  std::istringstream is(s);
  std::string line, last;
  while (std::getline(is, line)) {
    if (!line.empty()) last = line;
  }
  return last;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "fracphi_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

io::CsvTable table(const std::string& text) {
  std::istringstream is(text);
  return io::read_csv(is);
}

std::string meta(const io::CsvTable& t, const std::string& key) {
  for (const auto& [k, v] : t.metadata) {
    if (k == key) return v;
  }
  return {};
}

}  // namespace

TEST_CASE("enumerate a single vertex") {
  const Run r = run({"enumerate", "--order", "1", "--legs", "4"});
  REQUIRE(r.code == cli::kOk);
  const json j = json::parse(r.out);
  REQUIRE(j.size() == 1);
  CHECK(j[0]["symmetryFactor"] == "1/1");
  CHECK(j[0]["contractionCount"] == 24);
  const json m = json::parse(r.err.substr(2));
  CHECK(m["tool"] == "fracphi");
  CHECK(m["command"] == "enumerate");
}

TEST_CASE("classify at 5/8") {
  const Run r = run({"classify", "--alpha", "5/8", "--max-order", "5"});
  REQUIRE(r.code == cli::kOk);
  const io::CsvTable t = table(r.out);
  REQUIRE(t.rows.size() == 1);
  CHECK(t.rows[0][1] == "2");
  CHECK(t.rows[0][2] == "4");
  CHECK(t.rows[0][3] == "0");
  CHECK(t.rows[0][5] == "0");
  CHECK(meta(t, "tool") == "fracphi");
  CHECK_FALSE(meta(t, "version").empty());
  CHECK(json::parse(meta(t, "config"))["alpha"] == "5/8");
}

TEST_CASE("counterterms at 3/4") {
  const Run r = run({"classify", "--alpha", "3/4", "--max-order", "3", "--counterterms"});
  REQUIRE(r.code == cli::kOk);
  const io::CsvTable t = table(r.out);
  CHECK(t.columns == std::vector<std::string>{"E", "degree", "operator", "cutoffBehavior"});
  CHECK(t.rows.size() == 3);
}

TEST_CASE("invalid configuration gives one machine-readable line") {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"classify", "--alpha", "0.625"},
           {"classify", "--alpha", "7/4"},
           {"classify", "--alpha", "x"},
           {"integrate", "--diagram", "missing.json", "--alpha", "1/2", "--kappa", "10"},
           {"integrate", "--diagram", "sunset", "--alpha", "1/2", "--kappa", "10", "--method", "magic"},
           {"reproduce", "--case", "unknown"},
           {"frobnicate"},
           {"classify", "--max-order", "two"}}) {
    const Run r = run(args);
    CAPTURE(args[0]);
    CHECK(r.code == cli::kInvalidConfig);
    const json e = json::parse(last_line(r.err));
    CHECK(e["error"] == "invalid_config");
    CHECK(e["message"].is_string());
  }
}

TEST_CASE("decimal alpha away from the boundaries warns") {
  const Run r = run({"classify", "--alpha", "0.6", "--max-order", "3"});
  CHECK(r.code == cli::kOk);
  CHECK(r.err.find("warning") != std::string::npos);
}

TEST_CASE("nonconvergence has its own exit code") {
  const Run r = run({"renormalize", "--diagram", "fish", "--alpha", "3/4", "--p", "1", "--bare", "--max-doublings", "1",
                     "--kappa-start", "100"});
  CHECK(r.code == cli::kNonConvergence);
  CHECK(json::parse(last_line(r.err))["error"] == "nonconvergence");
}

TEST_CASE("integrate then fit through files") {
  const fs::path csv = scratch("sunset.csv");
  const Run a = run({"integrate", "--diagram", "sunset", "--alpha", "3/4", "--kappa", "100,316.22776601683796,1000,3162.2776601683795,10000",
                     "--out", csv.string()});
  REQUIRE(a.code == cli::kOk);
  const std::string first = slurp(csv);
  std::ifstream f(csv);
  const io::CsvTable t = io::read_csv(f);
  CHECK(t.columns == std::vector<std::string>{"kappa", "value", "error", "evaluations"});
  CHECK(t.rows.size() == 5);
  CHECK(meta(t, "seed") == "1");

  REQUIRE(run({"integrate", "--diagram", "sunset", "--alpha", "3/4", "--kappa",
               "100,316.22776601683796,1000,3162.2776601683795,10000", "--out", csv.string()})
              .code == cli::kOk);
  CHECK(slurp(csv) == first);

  const fs::path fit = scratch("fit.json");
  const Run s = run({"scaling", "--in", csv.string(), "--out", fit.string()});
  REQUIRE(s.code == cli::kOk);
  const json j = json::parse(slurp(fit));
  CHECK(j["model"] == "power");
  CHECK(std::fabs(j["exponent"].get<double>() - 0.5) <= 0.05);
  CHECK(fs::exists(fit.string() + ".meta.json"));
  CHECK(json::parse(slurp(fit.string() + ".meta.json"))["command"] == "scaling");
}

TEST_CASE("sampling output is byte-identical for a fixed seed") {
  const fs::path paths = scratch("paths.csv");
  const std::vector<std::string> args{"sample", "--kappa", "10", "--count", "2000", "--max-lag", "1", "--lag-step",
                                      "0.25", "--alpha", "3/10", "--dump", "3", "--out", paths.string(), "--seed", "17"};
  const Run a = run(args);
  REQUIRE(a.code == cli::kOk);
  const std::string dumped = slurp(paths);
  const Run b = run(args);
  CHECK(a.out == b.out);
  CHECK(slurp(paths) == dumped);
  std::vector<std::string> threaded = args;
  threaded.insert(threaded.end(), {"--workers", "3"});
  CHECK(run(threaded).out.substr(a.out.find("lag,")) == a.out.substr(a.out.find("lag,")));
  std::ifstream f(paths);
  const io::CsvTable t = io::read_csv(f);
  CHECK(t.columns == std::vector<std::string>{"path", "t", "x", "xalpha"});
  CHECK(t.rows.size() == 15);
}

TEST_CASE("worker count from the environment") {
  ::setenv("FRACPHI_WORKERS", "zero", 1);
  CHECK(run({"sample", "--count", "10"}).code == cli::kInvalidConfig);
  ::setenv("FRACPHI_WORKERS", "2", 1);
  CHECK(run({"sample", "--count", "10", "--kappa", "5"}).code == cli::kOk);
  ::unsetenv("FRACPHI_WORKERS");
}

TEST_CASE("forests and recipes") {
  const Run r = run({"forests", "--diagram", "sunset", "--alpha", "3/4"});
  REQUIRE(r.code == cli::kOk);
  const Run recipe = run({"forests", "--diagram", "fish", "--alpha", "3/4", "--recipe"});
  REQUIRE(recipe.code == cli::kOk);
  const json j = json::parse(recipe.out);
  REQUIRE(j.size() == 2);
  CHECK(j[1]["sign"] == -1);
}

TEST_CASE("perturbation check report") {
  const Run r = run({"perturbcheck", "--lambda", "0.01", "--alpha", "3/10", "--samples", "5000"});
  REQUIRE(r.code == cli::kOk);
  const json j = json::parse(r.out);
  for (const char* key : {"estimate", "oracle", "sigma", "pass"}) CHECK(j.contains(key));
  CHECK(j["twoPoint"]["pass"] == true);
}

TEST_CASE("reproduce sunset at 3/4") {
  const Run r = run({"reproduce", "--case", "sunset-3/4"});
  CHECK(r.code == cli::kOk);
  CHECK(r.err.find("PASS") != std::string::npos);
  const json j = json::parse(r.out);
  CHECK(j["pass"] == true);
}

TEST_CASE("help exits cleanly") {
  CHECK(run({"--help"}).code == cli::kOk);
  CHECK(run({"integrate", "--help"}).code == cli::kOk);
}
