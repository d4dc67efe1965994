#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "fracphi/spectral.hpp"

namespace fracphi {

enum class WindowProfile : std::uint8_t { kIndicator, kBump };

/// Nonnegative volume cutoff g supported on [a, b].
struct Window {
  double a = -1.0;
  double b = 1.0;
  WindowProfile profile = WindowProfile::kIndicator;

  /// Throws InvalidArgument unless a < b.
  void validate() const;
  /// 1 on [a, b] (indicator) or exp(1 - 1/(1 - u^2)), u in (-1, 1) (bump).
  double operator()(double tau) const;
};

WindowProfile parse_window_profile(const std::string& s);
std::string to_string(WindowProfile p);

struct PerturbationSetting {
  double lambda = 0.0;
  Window window;

  void validate() const;
};

struct PerturbationOptions {
  double alpha = 0.3;
  double m = 1.0;
  double kappa = 20.0;
  std::array<double, 4> times{-0.5, -0.2, 0.2, 0.5};
  std::uint64_t samples = 100'000;
  std::uint64_t seed = 1;
  int quadrature_nodes = 160;  // Gauss-Legendre nodes for U on the window
  double tolerance = 0.0;      // statistical error above which a result is flagged
  unsigned workers = 1;
};

struct Comparison {
  double estimate = 0.0;
  double oracle = 0.0;
  double sigma = 0.0;  // combined standard error
  bool pass = false;   // |estimate - oracle| < 3 sigma
  bool noisy = false;  // sigma above the requested tolerance
};

struct PerturbationReport {
  /// order-lambda connected <x(t1) x(t2)>; oracle 0
  Comparison two_point;
  /// order-lambda connected <x(t1) ... x(t4)> against
  /// -lambda 4! integral g(tau) prod_i F^(alpha)(t_i - tau) dtau
  Comparison four_point;
  /// free <x(t1) ... x(t4)> against the three pairings of covariances
  Comparison free_four_point;
  double variance = 0.0;  // variance of x^(alpha) used for normal ordering
  std::uint64_t samples = 0;
  std::string warning;
};

/// Cross covariance E[x(t) x^(alpha)(tau)] of the continuum band-limited
/// process.
double cross_covariance(double t_minus_tau, double alpha, double m, double kappa);

/// -lambda 4! integral g(tau) prod_i F^(alpha)(t_i - tau) dtau by nested
/// adaptive quadrature.
double first_order_four_point(const PerturbationSetting& setting, const PerturbationOptions& opts);

/// Monte-Carlo first-order expansion of <x(t_1) ... x(t_N) e^{-lambda U}>
/// with U = integral :x^(alpha)(tau)^4: g(tau) dtau, against quadrature.
PerturbationReport perturbative_check(const PerturbationSetting& setting,
                                      const PerturbationOptions& opts);

}  // namespace fracphi
