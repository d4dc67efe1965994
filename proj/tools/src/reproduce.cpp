#include <cmath>
#include <sstream>

#include "fracphi/cli.hpp"
#include "fracphi/error.hpp"
#include "fracphi/integrator.hpp"
#include "fracphi/routing.hpp"

namespace fracphi::cli {

bool ScenarioResult::pass() const {
  for (const auto& c : checks) {
    if (!c.pass) return false;
  }
  return !checks.empty();
}

namespace {

const std::vector<double>& grid() {
  static const std::vector<double> g = {1e2, std::pow(10.0, 2.5), 1e3, std::pow(10.0, 3.5), 1e4};
  return g;
}

ScalingFit scan_and_fit(const Diagram& d, const Rational& alpha, unsigned workers, std::uint64_t seed) {
  PropagatorSpec spec;
  spec.alpha = Alpha(alpha);
  IntegrationOptions opts;
  opts.target_error = 1e-3;
  opts.workers = workers;
  opts.seed = seed;
  const auto ext = external_momenta(route_momenta(d), 0.0);
  const KappaScan scan = scan_kappa(d, spec, grid(), ext, false, opts);
  return scaling_fit(scan.points);
}

std::string num(double x) {
  std::ostringstream os;
  os.precision(4);
  os << x;
  return os.str();
}

void log_checks(ScenarioResult& r, const ScalingFit& f, const std::string& tag) {
  r.checks.push_back({tag + " log model selected", f.model == ScalingModel::kLog,
                      "model " + to_string(f.model)});
  r.checks.push_back({tag + " log residual 10x below best power (|p| >= 0.1)", f.log_advantage >= 10.0,
                      "ratio " + num(f.log_advantage) + ", power p " + num(f.power.parameter)});
}

}  // namespace

ScenarioResult reproduce_case(const std::string& id, unsigned workers, std::uint64_t seed) {
  ScenarioResult r;
  r.id = id;
  if (id == "sunset-3/4") {
    const ScalingFit f = scan_and_fit(catalog::sunset(), Rational(3, 4), workers, seed);
    r.fits.push_back(f);
    r.checks.push_back({"power model selected", f.model == ScalingModel::kPower, "model " + to_string(f.model)});
    r.checks.push_back({"exponent within 0.50 +- 0.05", std::fabs(f.power.parameter - 0.5) <= 0.05,
                        "p = " + num(f.power.parameter) + " +- " + num(f.power.parameter_error)});
    r.checks.push_back({"power residual below log residual", f.power.residual < f.log.residual,
                        num(f.power.residual) + " vs " + num(f.log.residual)});
  } else if (id == "sunset-2/3") {
    const ScalingFit f = scan_and_fit(catalog::sunset(), Rational(2, 3), workers, seed);
    r.fits.push_back(f);
    log_checks(r, f, "sunset");
    r.checks.push_back({"C stable to 5% over the two largest cutoffs", f.coefficient_drift <= 0.05,
                        "C = " + num(f.log.parameter) + ", drift " + num(f.coefficient_drift)});
  } else if (id == "nut-5/8") {
    const ScalingFit f = scan_and_fit(catalog::nut(), Rational(5, 8), workers, seed);
    r.fits.push_back(f);
    log_checks(r, f, "alpha=5/8");
    const ScalingFit g = scan_and_fit(catalog::nut(), Rational(3, 5), workers, seed);
    r.fits.push_back(g);
    r.checks.push_back({"alpha=3/5 constant model selected decisively",
                        g.model == ScalingModel::kConstant && g.decisive,
                        "model " + to_string(g.model) + ", power p " + num(g.power.parameter) +
                            ", power/log residual " + num(g.log_advantage)});
  } else {
    throw InvalidArgument("unknown reproduce case '" + id + "' (sunset-3/4, sunset-2/3, nut-5/8)");
  }
  return r;
}

}  // namespace fracphi::cli
