#include <doctest.h>

#include <cmath>
#include <random>

#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "fracphi/error.hpp"
#include "fracphi/perturbation.hpp"
#include "fracphi/spectral.hpp"

using namespace fracphi;
using boost::math::quadrature::gauss_kronrod;

namespace {

constexpr double kPi = boost::math::constants::pi<double>();

/// (1/pi) integral_0^kappa p^s cos(p tau) / (p^2 + m^2) dp on unit-length panels.
double kernel_oracle(double tau, double m, double kappa, double s = 0.0) {
  auto g = [&](double p) { return std::pow(p, s) * std::cos(p * tau) / (p * p + m * m); };
  double sum = 0.0;
  for (double a = 0.0; a < kappa; a += 1.0) {
    sum += gauss_kronrod<double, 31>::integrate(g, a, std::min(kappa, a + 1.0), 10, 1e-12);
  }
  return sum / kPi;
}

}  // namespace

TEST_CASE("band-limited kernel") {
  for (double tau : {0.0, 0.3, 1.0, 2.5}) {
    CHECK(band_limited_kernel(tau, 1.0, 20.0) == doctest::Approx(kernel_oracle(tau, 1.0, 20.0)).epsilon(1e-9));
    CHECK(band_limited_kernel(tau, 2.0, 15.0, 0.6) ==
          doctest::Approx(kernel_oracle(tau, 2.0, 15.0, 0.6)).epsilon(1e-8));
  }
  CHECK(free_covariance(0.0, 1.0) == 0.5);
  CHECK(free_covariance(-2.0, 0.5) == doctest::Approx(std::exp(-1.0)));
  CHECK(kernel_tail_bound(100.0) == doctest::Approx(1.0 / (kPi * 100.0)));
}

TEST_CASE("kernel converges to the free covariance within the tail bound") {
  const double kappa = 500.0;
  for (int i = 0; i < 10; ++i) {
    const double tau = 0.2 * i;
    CHECK(std::fabs(band_limited_kernel(tau, 1.0, kappa) - free_covariance(tau, 1.0)) <= kernel_tail_bound(kappa));
  }
}

TEST_CASE("normal-ordered quartic") {
  CHECK(normal_ordered_quartic(0.0, 1.0) == 3.0);
  CHECK(normal_ordered_quartic(1.0, 0.0) == 1.0);
  CHECK(normal_ordered_quartic(2.0, 0.5) == doctest::Approx(16.0 - 12.0 + 0.75));
  CHECK_THROWS_AS(normal_ordered_quartic(1.0, -0.1), InvalidArgument);
  std::mt19937_64 rng(1);
  const double c = 0.7;
  std::normal_distribution<double> g(0.0, std::sqrt(c));
  Accumulator acc;
  for (int i = 0; i < 200000; ++i) acc.add(normal_ordered_quartic(g(rng), c));
  CHECK(std::fabs(acc.mean) < 3.0 * acc.standard_error());
}

TEST_CASE("accumulator merge matches sequential accumulation") {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g(1.0, 2.0);
  Accumulator all, left, right;
  for (int i = 0; i < 1000; ++i) {
    const double x = g(rng);
    all.add(x);
    (i < 400 ? left : right).add(x);
  }
  left.merge(right);
  CHECK(left.n == all.n);
  CHECK(left.mean == doctest::Approx(all.mean).epsilon(1e-12));
  CHECK(left.variance() == doctest::Approx(all.variance()).epsilon(1e-12));
}

TEST_CASE("sampler grid") {
  const SpectralSampler s(1.0, 50.0, 3);
  CHECK(s.spacing() <= 1.0 / 20.0 + 1e-15);
  CHECK(s.frequencies().size() == 1000);
  CHECK(s.frequencies().front() == doctest::Approx(s.spacing() / 2));
  CHECK_FALSE(s.coarse_grid());
  CHECK(s.warning().empty());
  const SpectralSampler coarse(1.0, 50.0, 3, 0.5);
  CHECK(coarse.coarse_grid());
  CHECK_FALSE(coarse.warning().empty());
  CHECK(s.covariance(0.7) == doctest::Approx(band_limited_kernel(0.7, 1.0, 50.0)).epsilon(1e-3));
  CHECK_THROWS_AS(SpectralSampler(0.0, 10.0, 1), InvalidArgument);
}

TEST_CASE("paths are reproducible per index") {
  const std::vector<double> times{0.0, 0.5, 1.0};
  const auto a = sample_paths(1.0, 20.0, times, 4, 42);
  const auto b = sample_paths(1.0, 20.0, times, 4, 42);
  const SpectralSampler sampler(1.0, 20.0, 42);
  const PathSample third = sampler.sample(2, times);
  for (std::size_t i = 0; i < 4; ++i) CHECK(a[i].values == b[i].values);
  CHECK(third.values == a[2].values);
  CHECK(sample_paths(1.0, 20.0, times, 1, 43)[0].values != a[0].values);
  const PathSample same = fractional_path(sampler, a[1], 0.0);
  CHECK(same.values == a[1].values);
  CHECK(same.fractional_values == a[1].values);
  const PathSample frac = fractional_path(sampler, a[1], 0.3);
  CHECK(frac.values == a[1].values);
  CHECK(frac.fractional_values.size() == times.size());
  CHECK(frac.fractional_values != a[1].values);
}

TEST_CASE("covariance estimates agree with their oracles") {
  const SpectralSampler sampler(1.0, 50.0, 7);
  const std::vector<double> lags{0.0, 0.5, 1.0, 2.0};
  const auto est = estimate_covariance(sampler, lags, 20000);
  for (std::size_t i = 0; i < lags.size(); ++i) {
    CHECK(std::fabs(est.value[i] - kernel_oracle(lags[i], 1.0, 50.0)) < 3.0 * est.standard_error[i] + 1e-4);
  }
  const auto threaded = estimate_covariance(sampler, lags, 20000, 0.0, 3);
  CHECK(threaded.value == est.value);
  CHECK(threaded.standard_error == est.standard_error);
}

TEST_CASE("fractional variance matches its quadrature") {
  const SpectralSampler sampler(1.0, 50.0, 8);
  const std::vector<double> zero{0.0};
  const auto est = estimate_covariance(sampler, zero, 20000, 0.3);
  const double c = kernel_oracle(0.0, 1.0, 50.0, 0.6);
  CHECK(std::fabs(est.value[0] - c) < 3.0 * est.standard_error[0] + 1e-3 * c);
}

TEST_CASE("variance grows with the cutoff") {
  double previous = 0.0;
  for (double kappa : {10.0, 100.0, 1000.0, 10000.0}) {
    const double v = band_limited_kernel(0.0, 1.0, kappa, 1.2);
    CHECK(v > previous + 0.1);
    previous = v;
  }
  double grid_previous = 0.0;
  for (double kappa : {5.0, 10.0, 20.0, 40.0}) {
    const double v = SpectralSampler(1.0, kappa, 1).covariance(0.0, 0.3, 0.3);
    CHECK(v >= grid_previous);
    grid_previous = v;
  }
}

TEST_CASE("sample covariance matrix is symmetric positive semidefinite") {
  const std::vector<double> times{0.0, 0.1, 0.4, 0.9, 1.5, 2.0};
  const auto paths = sample_paths(1.0, 30.0, times, 300, 5);
  const auto C = sample_covariance_matrix(paths);
  REQUIRE(C.size() == times.size());
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  for (std::size_t i = 0; i < C.size(); ++i) {
    for (std::size_t j = 0; j < C.size(); ++j) CHECK(C[i][j] == C[j][i]);
  }
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> v(times.size());
    for (auto& x : v) x = g(rng);
    double q = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      for (std::size_t j = 0; j < v.size(); ++j) q += v[i] * C[i][j] * v[j];
    }
    CHECK(q >= -1e-12);
  }
}

TEST_CASE("windows") {
  const Window w{-1.0, 1.0, WindowProfile::kIndicator};
  CHECK(w(0.5) == 1.0);
  CHECK(w(1.5) == 0.0);
  const Window bump{-1.0, 1.0, WindowProfile::kBump};
  CHECK(bump(0.0) == doctest::Approx(1.0));
  CHECK(bump(0.99) > 0.0);
  CHECK(bump(1.0) == 0.0);
  CHECK_THROWS_AS((Window{1.0, -1.0}.validate()), InvalidArgument);
  CHECK(parse_window_profile("bump") == WindowProfile::kBump);
  CHECK_THROWS_AS(parse_window_profile("box"), InvalidArgument);
  CHECK_THROWS_AS((PerturbationSetting{-0.1, w}.validate()), InvalidArgument);
}

TEST_CASE("first-order four-point quadrature") {
  const PerturbationSetting setting{0.01, {-1.0, 1.0, WindowProfile::kIndicator}};
  const PerturbationOptions opts;
  auto integrand = [&](double tau) {
    double v = 1.0;
    for (double t : opts.times) v *= kernel_oracle(t - tau, 1.0, 20.0, 0.3);
    return v;
  };
  double integral = 0.0;
  const std::vector<double> cuts{-1.0, -0.5, -0.2, 0.2, 0.5, 1.0};
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    integral += gauss_kronrod<double, 31>::integrate(integrand, cuts[i], cuts[i + 1], 6, 1e-9);
  }
  CHECK(first_order_four_point(setting, opts) == doctest::Approx(-0.01 * 24.0 * integral).epsilon(1e-6));
}

TEST_CASE("perturbative check") {
  PerturbationOptions opts;
  opts.samples = 20000;
  const PerturbationReport r = perturbative_check({0.01, {-1.0, 1.0, WindowProfile::kIndicator}}, opts);
  CHECK(r.two_point.pass);
  CHECK(r.four_point.pass);
  CHECK(r.free_four_point.pass);
  CHECK(r.samples == 20000);
  CHECK(r.variance == doctest::Approx(SpectralSampler(1.0, 20.0, 1).covariance(0.0, 0.3, 0.3)));

  const PerturbationReport free = perturbative_check({0.0, {-1.0, 1.0, WindowProfile::kIndicator}}, opts);
  CHECK(free.four_point.estimate == 0.0);
  CHECK(free.four_point.oracle == 0.0);
  CHECK(free.four_point.pass);
  CHECK(free.free_four_point.estimate == r.free_four_point.estimate);

  opts.tolerance = 1e-9;
  CHECK(perturbative_check({0.01, {-1.0, 1.0, WindowProfile::kBump}}, opts).four_point.noisy);
  opts.alpha = 1.2;
  CHECK_THROWS_AS(perturbative_check({0.01, {}}, opts), InvalidArgument);
}
