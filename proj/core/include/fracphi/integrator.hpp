#pragma once

#include <span>
#include <vector>

#include "fracphi/diagram.hpp"
#include "fracphi/integrand.hpp"
#include "fracphi/quadrature.hpp"
#include "fracphi/scaling.hpp"

namespace fracphi {

/// Independent external momenta for a single scalar momentum p flowing in
/// at leg 1 and out at leg E: (p, 0, ..., 0). Empty for vacuum diagrams.
std::vector<double> external_momenta(const MomentumRouting& r, double p);

/// Integral of I_Gamma (bare) or R_Gamma (renormalized) at one cutoff.
IntegralResult integrate_diagram(const Diagram& d, const PropagatorSpec& spec,
                                 std::span<const double> ext, bool renormalized,
                                 const IntegrationOptions& opts);

struct KappaScan {
  std::vector<ScalingPoint> points;
  std::vector<IntegralResult> results;
};

/// One integral per cutoff in `kappas`; spec.kappa is ignored.
KappaScan scan_kappa(const Diagram& d, PropagatorSpec spec, std::span<const double> kappas,
                     std::span<const double> ext, bool renormalized,
                     const IntegrationOptions& opts);

struct StabilizationOptions {
  double kappa_start = 1e3;
  double relative_tolerance = 1e-2;
  double absolute_tolerance = 0.0;
  int max_doublings = 6;
};

struct StabilizedValue {
  double value = 0.0;
  double error = 0.0;
  bool stabilized = false;
  std::vector<ScalingPoint> sequence;  // J on the doubling grid
};

/// Relative change |J(2 kappa) - J(kappa)| / |J(2 kappa)| of one doubling.
double relative_change(const ScalingPoint& a, const ScalingPoint& b);

/// Evaluates J on kappa_start * 2^j until one doubling changes the value by
/// less than the tolerance. Returns the last value; the sequence is kept
/// either way. renormalized_value throws NonConvergence("renormalized
/// integral did not stabilize") where stabilize_in_kappa reports failure.
StabilizedValue stabilize_in_kappa(const Diagram& d, PropagatorSpec spec,
                                   std::span<const double> ext, bool renormalized,
                                   const StabilizationOptions& sopts,
                                   const IntegrationOptions& opts);
StabilizedValue renormalized_value(const Diagram& d, const PropagatorSpec& spec,
                                   std::span<const double> ext, const StabilizationOptions& sopts,
                                   const IntegrationOptions& opts);

}  // namespace fracphi
