#include "fracphi/integrator.hpp"

#include <cmath>
#include <limits>

#include "fracphi/error.hpp"
#include "fracphi/forest.hpp"
#include "fracphi/routing.hpp"

namespace fracphi {

std::vector<double> external_momenta(const MomentumRouting& r, double p) {
  std::vector<double> ext(static_cast<std::size_t>(r.externals), 0.0);
  if (!ext.empty()) ext[0] = p;
  return ext;
}

IntegralResult integrate_diagram(const Diagram& d, const PropagatorSpec& spec,
                                 std::span<const double> ext, bool renormalized,
                                 const IntegrationOptions& opts) {
  const MomentumRouting r = route_momenta(d);
  if (renormalized) {
    const RenormalizedIntegrand ri = build_renormalized_integrand(d, spec.alpha);
    return integrate_cutoff(compile_renormalized(ri, r, spec, ext), opts);
  }
  return integrate_cutoff(compile_bare(r, spec, ext), opts);
}

KappaScan scan_kappa(const Diagram& d, PropagatorSpec spec, std::span<const double> kappas,
                     std::span<const double> ext, bool renormalized,
                     const IntegrationOptions& opts) {
  KappaScan scan;
  for (double kappa : kappas) {
    spec.kappa = kappa;
    const IntegralResult res = integrate_diagram(d, spec, ext, renormalized, opts);
    scan.points.push_back({kappa, res.value, res.error});
    scan.results.push_back(res);
  }
  return scan;
}

double relative_change(const ScalingPoint& a, const ScalingPoint& b) {
  const double diff = std::fabs(b.value - a.value);
  const double scale = std::fabs(b.value);
  return scale > 0.0 ? diff / scale : (diff > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
}

StabilizedValue stabilize_in_kappa(const Diagram& d, PropagatorSpec spec,
                                   std::span<const double> ext, bool renormalized,
                                   const StabilizationOptions& sopts,
                                   const IntegrationOptions& opts) {
  if (!(sopts.kappa_start > 0.0)) throw InvalidArgument("cutoff must be positive");
  StabilizedValue out;
  double kappa = sopts.kappa_start;
  for (int j = 0; j <= sopts.max_doublings; ++j, kappa *= 2.0) {
    spec.kappa = kappa;
    const IntegralResult res = integrate_diagram(d, spec, ext, renormalized, opts);
    out.sequence.push_back({kappa, res.value, res.error});
    out.value = res.value;
    out.error = res.error;
    if (out.sequence.size() < 2) continue;
    const auto& a = out.sequence[out.sequence.size() - 2];
    const auto& b = out.sequence.back();
    if (std::fabs(b.value - a.value) < std::max(sopts.absolute_tolerance,
                                                sopts.relative_tolerance * std::fabs(b.value))) {
      out.stabilized = true;
      break;
    }
  }
  return out;
}

StabilizedValue renormalized_value(const Diagram& d, const PropagatorSpec& spec,
                                   std::span<const double> ext, const StabilizationOptions& sopts,
                                   const IntegrationOptions& opts) {
  StabilizedValue v = stabilize_in_kappa(d, spec, ext, true, sopts, opts);
  if (!v.stabilized) throw NonConvergence("renormalized integral did not stabilize", v.value, v.error);
  return v;
}

}  // namespace fracphi
