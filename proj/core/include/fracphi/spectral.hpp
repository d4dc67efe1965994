#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace fracphi {

/// (1/pi) * integral_0^kappa p^s cos(p tau) / (p^2 + m^2) dp, by adaptive
/// quadrature. With s = 0 this is the band-limited covariance F_kappa(tau);
/// s = alpha gives the x / x^(alpha) cross covariance and s = 2 alpha the
/// variance of x^(alpha) at tau = 0.
double band_limited_kernel(double tau, double m, double kappa, double s = 0.0);

/// e^{-m |tau|} / (2m).
double free_covariance(double tau, double m);

/// Bound on |F_infinity(tau) - F_kappa(tau)|: 1 / (pi kappa).
double kernel_tail_bound(double kappa);

/// x^4 - 6 c x^2 + 3 c^2; throws InvalidArgument for c < 0.
double normal_ordered_quartic(double x, double c);

/// Independent standard-normal cosine and sine amplitudes of one path.
struct SpectralAmplitudes {
  std::vector<double> cosine;
  std::vector<double> sine;
};

struct PathSample {
  std::uint64_t index = 0;
  std::vector<double> time_grid;
  std::vector<double> values;
  double alpha = 0.0;                    // order of fractional_values
  std::vector<double> fractional_values;  // empty until fractional_path
  SpectralAmplitudes amplitudes;
};

/// Gaussian process with spectral density 1/(2 pi (p^2 + m^2)) restricted to
/// |p| <= kappa, synthesised on the midpoints of a uniform grid on (0, kappa]:
///   x(t) = sum_j sigma_j (A_j cos p_j t + B_j sin p_j t),
///   sigma_j^2 = dp / (pi (p_j^2 + m^2)).
/// Path i draws its amplitudes from a generator seeded by (seed, i), so
/// any subset of paths can be regenerated independently.
class SpectralSampler {
 public:
  /// max_spacing <= 0 selects m / 20.
  SpectralSampler(double m, double kappa, std::uint64_t seed, double max_spacing = 0.0);

  double m() const noexcept { return m_; }
  double kappa() const noexcept { return kappa_; }
  std::uint64_t seed() const noexcept { return seed_; }
  double spacing() const noexcept { return dp_; }
  const std::vector<double>& frequencies() const noexcept { return p_; }
  /// Set when the grid spacing exceeds m / 20.
  bool coarse_grid() const noexcept { return coarse_; }
  std::string warning() const;

  SpectralAmplitudes amplitudes(std::uint64_t index) const;
  /// sigma_j p_j^alpha for every frequency.
  std::vector<double> weights(double alpha) const;

  /// Discrete-grid covariance of x^(a1)(t) and x^(a2)(t + tau).
  double covariance(double tau, double a1 = 0.0, double a2 = 0.0) const;

  PathSample sample(std::uint64_t index, std::span<const double> times) const;

 private:
  double m_;
  double kappa_;
  std::uint64_t seed_;
  double dp_;
  bool coarse_;
  std::vector<double> p_;
  std::vector<double> sigma_;
};

/// Paths 0..count-1 of a sampler built from (m, kappa, seed).
std::vector<PathSample> sample_paths(double m, double kappa, std::span<const double> times,
                                     std::size_t count, std::uint64_t seed);

/// Resynthesises the path with amplitudes weighted by p^alpha.
PathSample fractional_path(const SpectralSampler& sampler, const PathSample& sample, double alpha);

/// Precomputed cos/sin tables for repeated synthesis at fixed times.
class Synthesizer {
 public:
  Synthesizer(const SpectralSampler& sampler, std::span<const double> times, double alpha);
  std::size_t size() const noexcept { return times_; }
  void evaluate(const SpectralAmplitudes& a, std::span<double> out) const;

 private:
  std::size_t times_;
  std::size_t freqs_;
  std::vector<double> cos_;  // times x freqs, weight folded in
  std::vector<double> sin_;
};

/// Running mean and standard error.
struct Accumulator {
  std::uint64_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x);
  void merge(const Accumulator& o);
  double variance() const;
  double standard_error() const;
};

struct CovarianceEstimate {
  std::vector<double> lags;
  std::vector<double> value;           // empirical E[x(0) x(lag)]
  std::vector<double> standard_error;
  std::vector<double> grid_oracle;     // discrete-grid covariance
  std::vector<double> kernel_oracle;   // band-limited quadrature
  std::vector<double> free_oracle;     // e^{-m|t|}/(2m)
  std::uint64_t paths = 0;
};

/// Estimates E[x^(alpha)(0) x^(alpha)(lag)] over paths 0..count-1; workers
/// split the index range in fixed blocks and results do not depend on their
/// number.
CovarianceEstimate estimate_covariance(const SpectralSampler& sampler, std::span<const double> lags,
                                       std::uint64_t count, double alpha = 0.0,
                                       unsigned workers = 1);

/// Empirical covariance matrix of the path values on a time grid.
std::vector<std::vector<double>> sample_covariance_matrix(std::span<const PathSample> paths);

}  // namespace fracphi
