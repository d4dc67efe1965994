#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "fracphi/diagram.hpp"
#include "fracphi/enumerate.hpp"
#include "fracphi/forest.hpp"
#include "fracphi/integrator.hpp"
#include "fracphi/perturbation.hpp"
#include "fracphi/power_counting.hpp"
#include "fracphi/routing.hpp"
#include "fracphi/scaling.hpp"
#include "fracphi/spectral.hpp"

namespace fracphi::io {

using json = nlohmann::ordered_json;

/// Library version, e.g. "0.1.0".
std::string library_version();

/// Shortest text that parses back to the same double.
std::string format_double(double x);

/// {"n": int, "edges": [[u, v], ...], "legs": [[external, vertex], ...]}
json to_json(const Diagram& d);
/// Throws InvalidArgument on malformed input or an invalid diagram.
Diagram diagram_from_json(const json& j);
Diagram read_diagram(const std::string& path);

/// Named diagram ("sunset", "fish", "nut", "tree", "triangle") or a JSON file.
Diagram resolve_diagram(const std::string& name_or_path);

/// Array of {diagram, certificate, contractionCount, symmetryFactor: "p/q"}.
json enumeration_json(const std::vector<WeightedDiagram>& ws);
std::vector<WeightedDiagram> enumeration_from_json(const json& j, LegLabels legs = LegLabels::kDistinct);

/// Array of {"sign", "zeroedMomenta": [{"lines", "degree", "order"}...],
/// "factors": [...]}, one entry per forest. Parts are listed outermost first.
json recipe_json(const RenormalizedIntegrand& ri, const MomentumRouting& r);

json forests_json(const Diagram& d, const Alpha& alpha, const std::vector<Forest>& forests);

json scaling_json(const ScalingFit& fit);
json perturbation_json(const PerturbationReport& report);

/// Ordered key/value header written as "# key: value" lines before CSV data.
using Metadata = std::vector<std::pair<std::string, std::string>>;

void write_metadata(std::ostream& os, const Metadata& meta);

/// A CSV table with optional "#" metadata lines.
struct CsvTable {
  Metadata metadata;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

void write_csv(std::ostream& os, const CsvTable& table);
/// Throws InvalidArgument on ragged rows or a missing header.
CsvTable read_csv(std::istream& is);

/// alpha, n, L, E, l, degree, divergent, certificate
CsvTable classification_csv(const Alpha& alpha, const std::vector<ClassifiedDiagram>& rows);
/// E, degree, operator, cutoffBehavior
CsvTable counterterm_csv(const CountertermReport& report);
/// kappa, value, error, evaluations
CsvTable integration_csv(const std::vector<ScalingPoint>& points,
                         const std::vector<IntegralResult>& results);
/// Reads kappa, value, error columns of an integration table.
std::vector<ScalingPoint> scaling_points(const CsvTable& table);
/// lag, value, standardError, gridOracle, kernelOracle, freeOracle
CsvTable covariance_csv(const CovarianceEstimate& est);
/// path, t, x[, xalpha]
CsvTable paths_csv(const std::vector<PathSample>& paths);

}  // namespace fracphi::io
