#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace fracphi {

struct ScalingPoint {
  double kappa = 0.0;
  double value = 0.0;
  double error = 0.0;
};

enum class ScalingModel : std::uint8_t { kPower, kLog, kConstant };

std::string to_string(ScalingModel m);

/// value = amplitude * kappa^parameter + intercept (power),
/// value = parameter * ln(kappa) + intercept (log), value = intercept (constant).
struct ModelFit {
  ScalingModel model = ScalingModel::kConstant;
  double parameter = 0.0;
  double parameter_error = 0.0;
  double amplitude = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // weighted RMS of value residuals
  double chi2 = 0.0;
};

struct ScalingFit {
  ScalingModel model = ScalingModel::kConstant;
  double parameter = 0.0;  // exponent (power) or coefficient C (log); 0 for constant
  double parameter_error = 0.0;
  double intercept = 0.0;  // limit for the constant model
  double residual = 0.0;
  std::vector<double> kappa_grid;

  ModelFit power;     // best fit with |p| >= minimum exponent
  ModelFit log;
  ModelFit constant;  // weighted mean
  /// residual(best power) / residual(log)
  double log_advantage = 0.0;
  /// relative change of C when the largest grid point is dropped
  double coefficient_drift = 0.0;
  /// false when neither model wins by the required factor
  bool decisive = false;
};

struct ScalingOptions {
  double min_exponent = 0.1;
  double max_exponent = 3.0;
  double preference_factor = 10.0;  // winning residual ratio
  double constant_chi2 = 4.0;       // reduced chi^2 accepting a flat sequence
};

/// Weighted least-squares fits of the divergence models; see ScalingOptions
/// for the selection thresholds. Throws InvalidArgument("insufficient kappa
/// range") for fewer than 4 points or less than 2 decades.
ScalingFit scaling_fit(std::span<const ScalingPoint> points, const ScalingOptions& opts = {});

ModelFit fit_log(std::span<const ScalingPoint> points);
ModelFit fit_constant(std::span<const ScalingPoint> points);
/// Best power fit with exponent restricted to [lo, hi].
ModelFit fit_power(std::span<const ScalingPoint> points, double lo, double hi);

}  // namespace fracphi
