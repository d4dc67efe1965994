#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "fracphi/integrand.hpp"

namespace fracphi {

enum class Method : std::uint8_t {
  kAuto,                // adaptive for up to two loops, quasi-random above
  kAdaptiveQuadrature,  // nested Gauss-Kronrod with kink breakpoints (l <= 2)
  kQuasiRandom,         // randomly shifted Sobol points, any l
};

std::string to_string(Method m);
Method parse_method(const std::string& s);

struct IntegralResult {
  double value = 0.0;
  double error = 0.0;
  std::uint64_t evaluations = 0;
  Method method = Method::kAdaptiveQuadrature;
};

struct IntegrationOptions {
  Method method = Method::kAuto;
  double target_error = 1e-3;   // relative to |value|
  double absolute_error = 0.0;  // accepted regardless of |value|
  std::uint64_t max_evaluations = 4'000'000'000ULL;
  std::uint64_t seed = 1;
  int replicates = 16;                  // independent random shifts (quasi-random)
  std::uint64_t initial_points = 1u << 12;  // per replicate (quasi-random)
  unsigned workers = 1;
};

struct Estimate {
  double value = 0.0;
  double error = 0.0;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  std::uint64_t evaluations = 0;
  bool converged = false;
};

/// Globally adaptive 15-point Gauss-Kronrod over the pieces delimited by
/// `breakpoints` (sorted, first and last are the integration limits). The
/// integrand reports its own error, which is propagated with the Kronrod
/// weights (used for nested integration).
QuadratureResult adaptive_gauss_kronrod(const std::function<Estimate(double)>& f,
                                        const std::vector<double>& breakpoints, double abs_tol,
                                        double rel_tol, std::size_t max_intervals);

/// Integrates a compiled integrand over its cutoff region.
/// Throws NonConvergence carrying the best estimate when the budget runs out.
IntegralResult integrate_cutoff(const CompiledIntegrand& f, const IntegrationOptions& opts);

}  // namespace fracphi
