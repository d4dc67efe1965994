#include "fracphi/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "fracphi/error.hpp"

namespace fracphi::io {

std::string library_version() { return FRACPHI_VERSION; }

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

namespace {

double parse_double(const std::string& s) {
  if (s == "nan") return std::nan("");
  if (s == "inf") return INFINITY;
  if (s == "-inf") return -INFINITY;
  double x = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw InvalidArgument("not a number: '" + s + "'");
  }
  return x;
}

}  // namespace

json to_json(const Diagram& d) {
  json j;
  j["n"] = d.vertex_count();
  j["edges"] = json::array();
  for (const auto& e : d.edges()) j["edges"].push_back({e.u, e.v});
  j["legs"] = json::array();
  for (const auto& l : d.legs()) j["legs"].push_back({l.external, l.vertex});
  return j;
}

Diagram diagram_from_json(const json& j) {
  try {
    if (!j.is_object()) throw InvalidArgument("diagram JSON must be an object");
    const int n = j.at("n").get<int>();
    std::vector<Edge> edges;
    for (const auto& e : j.value("edges", json::array())) {
      if (!e.is_array() || e.size() != 2) throw InvalidArgument("diagram edge must be [u, v]");
      int u = e[0].get<int>(), v = e[1].get<int>();
      if (u > v) std::swap(u, v);
      edges.push_back({u, v});
    }
    std::vector<Leg> legs;
    for (const auto& l : j.value("legs", json::array())) {
      if (!l.is_array() || l.size() != 2) throw InvalidArgument("diagram leg must be [external, vertex]");
      legs.push_back({l[0].get<int>(), l[1].get<int>()});
    }
    return Diagram(n, std::move(edges), std::move(legs));
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("malformed diagram JSON: ") + e.what());
  }
}

Diagram read_diagram(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open diagram file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw InvalidArgument("malformed diagram JSON in '" + path + "'");
  }
  return diagram_from_json(j);
}

Diagram resolve_diagram(const std::string& name_or_path) {
  if (name_or_path == "sunset") return catalog::sunset();
  if (name_or_path == "fish") return catalog::fish();
  if (name_or_path == "nut") return catalog::nut();
  if (name_or_path == "tree") return catalog::tree_vertex();
  if (name_or_path == "triangle") return catalog::vacuum_triangle();
  return read_diagram(name_or_path);
}

json enumeration_json(const std::vector<WeightedDiagram>& ws) {
  json arr = json::array();
  for (const auto& w : ws) {
    json e;
    e["diagram"] = to_json(w.diagram);
    e["certificate"] = w.form.hex();
    e["contractionCount"] = w.contraction_count;
    e["symmetryFactor"] = to_string(symmetry_factor(w));
    arr.push_back(std::move(e));
  }
  return arr;
}

std::vector<WeightedDiagram> enumeration_from_json(const json& j, LegLabels legs) {
  if (!j.is_array()) throw InvalidArgument("enumeration JSON must be an array");
  std::vector<WeightedDiagram> out;
  for (const auto& e : j) {
    WeightedDiagram w;
    w.diagram = diagram_from_json(e.at("diagram"));
    w.form = canonicalize(w.diagram, legs);
    w.contraction_count = e.at("contractionCount").get<std::uint64_t>();
    if (e.contains("symmetryFactor") &&
        parse_rational(e["symmetryFactor"].get<std::string>()) != symmetry_factor(w)) {
      throw InvalidArgument("symmetry factor does not match contraction count");
    }
    out.push_back(std::move(w));
  }
  return out;
}

namespace {

std::vector<int> line_list(std::uint32_t mask) {
  std::vector<int> lines;
  for (int j = 0; j < 32; ++j) {
    if (mask >> j & 1u) lines.push_back(j);
  }
  return lines;
}

std::string line_factor_text(const std::string& q, const Alpha& alpha) {
  const std::string e = to_short_string(alpha.two_alpha());
  const std::string num = alpha.value() == Rational(0) ? "1" : "|" + q + "|^(" + e + ")";
  return num + "/((" + q + ")^2+m^2)";
}

}  // namespace

json recipe_json(const RenormalizedIntegrand& ri, const MomentumRouting& r) {
  json arr = json::array();
  for (const auto& term : ri.terms) {
    json t;
    t["sign"] = term.sign;
    t["zeroedMomenta"] = json::array();
    for (const auto& s : term.subtractions) {
      json z;
      z["lines"] = line_list(s.part.lines);
      z["degree"] = to_short_string(s.degree);
      z["order"] = s.order;
      t["zeroedMomenta"].push_back(std::move(z));
    }
    t["factors"] = json::array();
    for (const auto& line : r.lines) t["factors"].push_back(line_factor_text(line.str(), ri.alpha));
    arr.push_back(std::move(t));
  }
  return arr;
}

json forests_json(const Diagram& d, const Alpha& alpha, const std::vector<Forest>& forests) {
  json out;
  out["diagram"] = to_json(d);
  out["alpha"] = to_string(alpha);
  out["forests"] = json::array();
  for (const auto& f : forests) {
    json parts = json::array();
    for (const auto& p : f.parts) {
      json part;
      part["lines"] = line_list(p.lines);
      part["n"] = p.n;
      part["L"] = p.L;
      part["E"] = p.E;
      part["degree"] = to_short_string(degree(p, alpha));
      parts.push_back(std::move(part));
    }
    out["forests"].push_back(std::move(parts));
  }
  return out;
}

namespace {

json model_json(const ModelFit& f) {
  json j;
  j["model"] = to_string(f.model);
  j["parameter"] = f.parameter;
  j["parameterError"] = f.parameter_error;
  j["amplitude"] = f.amplitude;
  j["intercept"] = f.intercept;
  j["residual"] = f.residual;
  j["chi2"] = f.chi2;
  return j;
}

json comparison_json(const Comparison& c) {
  json j;
  j["estimate"] = c.estimate;
  j["oracle"] = c.oracle;
  j["sigma"] = c.sigma;
  j["pass"] = c.pass;
  j["noisy"] = c.noisy;
  return j;
}

}  // namespace

json scaling_json(const ScalingFit& fit) {
  json j;
  j["model"] = to_string(fit.model);
  if (fit.model == ScalingModel::kPower) {
    j["exponent"] = fit.parameter;
  } else if (fit.model == ScalingModel::kLog) {
    j["coefficient"] = fit.parameter;
  }
  j["standardError"] = fit.parameter_error;
  j["interceptB"] = fit.intercept;
  j["residual"] = fit.residual;
  j["kappaGrid"] = fit.kappa_grid;
  j["decisive"] = fit.decisive;
  j["powerOverLogResidual"] = fit.log_advantage;
  j["coefficientDrift"] = fit.coefficient_drift;
  j["fits"] = {{"power", model_json(fit.power)},
               {"log", model_json(fit.log)},
               {"constant", model_json(fit.constant)}};
  return j;
}

json perturbation_json(const PerturbationReport& report) {
  json j = comparison_json(report.four_point);
  j["twoPoint"] = comparison_json(report.two_point);
  j["freeFourPoint"] = comparison_json(report.free_four_point);
  j["variance"] = report.variance;
  j["samples"] = report.samples;
  if (!report.warning.empty()) j["warning"] = report.warning;
  return j;
}

void write_metadata(std::ostream& os, const Metadata& meta) {
  for (const auto& [k, v] : meta) os << "# " << k << ": " << v << '\n';
}

namespace {

std::string quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(cur));
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(std::move(cur));
  return out;
}

}  // namespace

void write_csv(std::ostream& os, const CsvTable& table) {
  write_metadata(os, table.metadata);
  for (std::size_t i = 0; i < table.columns.size(); ++i) os << (i ? "," : "") << quote(table.columns[i]);
  os << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << quote(row[i]);
    os << '\n';
  }
}

CsvTable read_csv(std::istream& is) {
  CsvTable t;
  std::string line;
  bool header = false;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto colon = line.find(':');
      if (colon != std::string::npos) {
        std::string key = line.substr(1, colon - 1);
        std::string value = line.substr(colon + 1);
        auto trim = [](std::string& s) {
          s.erase(0, s.find_first_not_of(' '));
          s.erase(s.find_last_not_of(' ') + 1);
        };
        trim(key);
        trim(value);
        t.metadata.emplace_back(key, value);
      }
      continue;
    }
    auto fields = split_csv(line);
    if (!header) {
      t.columns = std::move(fields);
      header = true;
    } else {
      if (fields.size() != t.columns.size()) throw InvalidArgument("CSV row has the wrong field count");
      t.rows.push_back(std::move(fields));
    }
  }
  if (!header) throw InvalidArgument("CSV header missing");
  return t;
}

CsvTable classification_csv(const Alpha& alpha, const std::vector<ClassifiedDiagram>& rows) {
  CsvTable t;
  t.columns = {"alpha", "n", "L", "E", "l", "degree", "divergent", "certificate"};
  for (const auto& c : rows) {
    const auto& r = c.report;
    t.rows.push_back({to_string(alpha), std::to_string(r.n), std::to_string(r.L), std::to_string(r.E),
                      std::to_string(r.l), to_short_string(r.degree), r.divergent ? "true" : "false",
                      c.form.hex()});
  }
  return t;
}

CsvTable counterterm_csv(const CountertermReport& report) {
  CsvTable t;
  t.columns = {"E", "degree", "operator", "cutoffBehavior"};
  for (const auto& e : report.entries) {
    t.rows.push_back({std::to_string(e.E), to_short_string(e.degree), operator_name(e.op, report.alpha),
                      e.behavior.str()});
  }
  return t;
}

CsvTable integration_csv(const std::vector<ScalingPoint>& points,
                         const std::vector<IntegralResult>& results) {
  CsvTable t;
  t.columns = {"kappa", "value", "error", "evaluations"};
  for (std::size_t i = 0; i < points.size(); ++i) {
    t.rows.push_back({format_double(points[i].kappa), format_double(points[i].value),
                      format_double(points[i].error),
                      i < results.size() ? std::to_string(results[i].evaluations) : "0"});
  }
  return t;
}

std::vector<ScalingPoint> scaling_points(const CsvTable& table) {
  auto column = [&](const std::string& name) {
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
      if (table.columns[i] == name) return i;
    }
    throw InvalidArgument("CSV lacks column '" + name + "'");
  };
  const std::size_t k = column("kappa"), v = column("value"), e = column("error");
  std::vector<ScalingPoint> pts;
  for (const auto& row : table.rows) {
    pts.push_back({parse_double(row[k]), parse_double(row[v]), parse_double(row[e])});
  }
  return pts;
}

CsvTable covariance_csv(const CovarianceEstimate& est) {
  CsvTable t;
  t.columns = {"lag", "value", "standardError", "gridOracle", "kernelOracle", "freeOracle"};
  for (std::size_t i = 0; i < est.lags.size(); ++i) {
    t.rows.push_back({format_double(est.lags[i]), format_double(est.value[i]),
                      format_double(est.standard_error[i]), format_double(est.grid_oracle[i]),
                      format_double(est.kernel_oracle[i]), format_double(est.free_oracle[i])});
  }
  return t;
}

CsvTable paths_csv(const std::vector<PathSample>& paths) {
  CsvTable t;
  const bool frac = !paths.empty() && !paths.front().fractional_values.empty();
  t.columns = {"path", "t", "x"};
  if (frac) t.columns.push_back("xalpha");
  for (const auto& p : paths) {
    for (std::size_t i = 0; i < p.time_grid.size(); ++i) {
      std::vector<std::string> row{std::to_string(p.index), format_double(p.time_grid[i]),
                                   format_double(p.values[i])};
      if (frac) row.push_back(format_double(p.fractional_values[i]));
      t.rows.push_back(std::move(row));
    }
  }
  return t;
}

}  // namespace fracphi::io
