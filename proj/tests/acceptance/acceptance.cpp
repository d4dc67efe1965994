#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "fracphi/enumerate.hpp"
#include "fracphi/forest.hpp"
#include "fracphi/integrator.hpp"
#include "fracphi/perturbation.hpp"
#include "fracphi/power_counting.hpp"
#include "fracphi/routing.hpp"
#include "fracphi/scaling.hpp"
#include "fracphi/spectral.hpp"
#include "oracles.hpp"

using namespace fracphi;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string title;
  double budget_seconds;
  std::function<Outcome()> run;
};

unsigned workers() { return std::max(1u, std::thread::hardware_concurrency()); }

std::string num(double x) {
  std::ostringstream os;
  os.precision(4);
  os << x;
  return os.str();
}

const std::vector<double>& grid() {
  static const std::vector<double> g = {1e2, std::pow(10.0, 2.5), 1e3, std::pow(10.0, 3.5), 1e4};
  return g;
}

IntegrationOptions integration_options() {
  IntegrationOptions o;
  o.target_error = 1e-3;
  o.workers = workers();
  o.seed = 1;
  return o;
}

ScalingFit scan(const Diagram& d, const Rational& alpha) {
  PropagatorSpec spec;
  spec.alpha = Alpha(alpha);
  const auto ext = external_momenta(route_momenta(d), 0.0);
  return scaling_fit(scan_kappa(d, spec, grid(), ext, false, integration_options()).points);
}

std::set<std::vector<std::uint8_t>> certificates(const ClassificationTable& t) {
  std::set<std::vector<std::uint8_t>> out;
  for (const auto& c : t.divergent) out.insert(c.form.certificate);
  return out;
}

Outcome classification() {
  std::vector<std::string> failures;
  auto expect = [&](bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  };
  for (const Rational a : {Rational(1, 2), Rational(3, 5)}) {
    expect(classify(Alpha(a), 5).divergent.empty(), "divergences below 5/8");
  }

  const auto t58 = classify(Alpha(5, 8), 5);
  expect(t58.divergent.size() == 1, "5/8 count");
  if (t58.divergent.size() == 1) {
    const auto& r = t58.divergent[0].report;
    expect(r.E == 0 && r.L == 4 && r.n == 2 && r.degree == Rational(0), "5/8 diagram");
  }

  const auto t23 = classify(Alpha(2, 3), 5);
  for (const auto& c : t23.divergent) expect(c.report.E == 0 || c.report.E == 2, "2/3 leg count");
  expect(certificates(t23) == certificates(classify(Alpha(2, 3), 4)), "2/3 set grows from n<=4 to n<=5");

  const TopologyCatalog catalog(5);
  const Alpha a34(3, 4);
  const auto t34 = classify(a34, catalog, 5);
  for (const auto& c : t34.divergent) {
    expect(c.report.degree == Rational(1) - Rational(c.report.E, 4), "3/4 degree");
  }
  std::size_t low_leg_count = 0;
  for (int n = 2; n <= 5; ++n) {
    for (const auto& w : catalog.at_order(n)) {
      if (power_count(w.diagram, a34).E <= 4) ++low_leg_count;
    }
  }
  expect(t34.divergent.size() == low_leg_count, "3/4 divergent set differs from E<=4");

  const auto t45 = classify(Alpha(4, 5), 5);
  expect(std::any_of(t45.divergent.begin(), t45.divergent.end(), [](const auto& c) { return c.report.E >= 6; }),
         "4/5 has no E>=6 divergence");

  std::string detail = "5/8:" + std::to_string(t58.divergent.size()) + " 2/3:" + std::to_string(t23.divergent.size()) +
                       " 3/4:" + std::to_string(t34.divergent.size()) + " 4/5:" + std::to_string(t45.divergent.size());
  for (const auto& f : failures) detail += "; " + f;
  return {failures.empty(), detail};
}

Outcome sunset_power() {
  const ScalingFit f = scan(catalog::sunset(), Rational(3, 4));
  const bool ok = std::fabs(f.power.parameter - 0.5) <= 0.05 && f.power.residual < f.log.residual;
  return {ok, "p=" + num(f.power.parameter) + "+-" + num(f.power.parameter_error) + " power/log residual " +
                  num(f.power.residual) + "/" + num(f.log.residual)};
}

std::string log_detail(const ScalingFit& f) {
  return "model " + to_string(f.model) + ", power/log residual " + num(f.log_advantage) + " (power p " +
         num(f.power.parameter) + "), C=" + num(f.log.parameter) + " drift " + num(f.coefficient_drift);
}

Outcome sunset_log() {
  const ScalingFit f = scan(catalog::sunset(), Rational(2, 3));
  const bool ok = f.model == ScalingModel::kLog && f.log_advantage >= 10.0 && f.coefficient_drift <= 0.05;
  return {ok, log_detail(f)};
}

Outcome nut_log() {
  const ScalingFit f = scan(catalog::nut(), Rational(5, 8));
  const ScalingFit g = scan(catalog::nut(), Rational(3, 5));
  const bool ok = f.model == ScalingModel::kLog && f.log_advantage >= 10.0 && g.model == ScalingModel::kConstant &&
                  g.decisive;
  return {ok, "5/8: " + log_detail(f) + "; 3/5: model " + to_string(g.model) +
                  (g.decisive ? "" : " (not decisive)") + ", power/log residual " + num(g.log_advantage)};
}

double cauchy_change(const Diagram& d, const Rational& alpha, bool renormalized) {
  PropagatorSpec spec;
  spec.alpha = Alpha(alpha);
  const auto ext = external_momenta(route_momenta(d), 1.0);
  const std::vector<double> kappas{1e3, 2e3};
  IntegrationOptions o = integration_options();
  o.target_error = 1e-4;
  const KappaScan s = scan_kappa(d, spec, kappas, ext, renormalized, o);
  return relative_change(s.points[0], s.points[1]);
}

Outcome renormalized_finiteness() {
  const double fish = cauchy_change(catalog::fish(), Rational(3, 4), true);
  const double sunset = cauchy_change(catalog::sunset(), Rational(2, 3), true);
  const double fish_bare = cauchy_change(catalog::fish(), Rational(3, 4), false);
  const double sunset_bare = cauchy_change(catalog::sunset(), Rational(2, 3), false);
  const bool ok = fish < 0.01 && sunset < 0.01 && fish_bare >= 0.01 && sunset_bare >= 0.01;
  return {ok, "renormalized fish " + num(fish) + ", sunset " + num(sunset) + "; bare fish " + num(fish_bare) +
                  ", sunset " + num(sunset_bare)};
}

Outcome combinatorics() {
  std::vector<std::string> failures;
  for (int n = 1; n <= 3; ++n) {
    for (int E = 0; E <= 4; E += 2) {
      std::uint64_t total = 0;
      const auto ws = enumerate_diagrams(n, E);
      for (const auto& w : ws) {
        total += w.contraction_count;
        if (symmetry_factor(w) != Rational(1, static_cast<std::int64_t>(oracle::automorphisms(w.diagram)))) {
          failures.push_back("symmetry factor of " + describe(w.diagram));
        }
      }
      if (total != oracle::count_contractions(n, E, true, true)) {
        failures.push_back("contraction total n=" + std::to_string(n) + " E=" + std::to_string(E));
      }
    }
  }
  const Rational a(3, 4);
  const std::size_t sunset_oracle = oracle::forest_count(oracle::renormalization_parts(catalog::sunset(), a));
  const std::size_t fish_oracle = oracle::forest_count(oracle::renormalization_parts(catalog::fish(), a));
  const std::size_t sunset = enumerate_forests(catalog::sunset(), Alpha(a)).size();
  const std::size_t fish = enumerate_forests(catalog::fish(), Alpha(a)).size();
  if (sunset != 8 || sunset_oracle != 8) failures.push_back("sunset forests");
  if (fish != 2 || fish_oracle != 2) failures.push_back("fish forests");
  std::string detail = "forests sunset " + std::to_string(sunset) + "/" + std::to_string(sunset_oracle) + ", fish " +
                       std::to_string(fish) + "/" + std::to_string(fish_oracle);
  for (const auto& f : failures) detail += "; " + f;
  return {failures.empty(), detail};
}

/// (1/pi) integral_0^kappa cos(p tau) / (p^2 + m^2) dp on unit panels.
double kernel_oracle(double tau, double m, double kappa) {
  using boost::math::quadrature::gauss_kronrod;
  auto g = [&](double p) { return std::cos(p * tau) / (p * p + m * m); };
  double sum = 0.0;
  for (double a = 0.0; a < kappa; a += 1.0) {
    sum += gauss_kronrod<double, 31>::integrate(g, a, std::min(kappa, a + 1.0), 10, 1e-12);
  }
  return sum / boost::math::constants::pi<double>();
}

Outcome sampler_covariance() {
  const double m = 1.0, kappa = 50.0;
  std::vector<double> lags;
  for (int i = 0; i <= 20; ++i) lags.push_back(0.1 * i);
  const SpectralSampler sampler(m, kappa, 1);
  const CovarianceEstimate est = estimate_covariance(sampler, lags, 100'000, 0.0, workers());
  const double tail = kernel_tail_bound(kappa);
  double worst_kernel = 0.0, worst_free = 0.0;
  bool ok = true;
  for (std::size_t i = 0; i < lags.size(); ++i) {
    const double se = est.standard_error[i];
    const double dk = std::fabs(est.value[i] - kernel_oracle(lags[i], m, kappa));
    const double df = std::fabs(est.value[i] - std::exp(-m * lags[i]) / (2.0 * m));
    ok = ok && dk < 3.0 * se && df < 3.0 * se + tail;
    worst_kernel = std::max(worst_kernel, dk / se);
    worst_free = std::max(worst_free, df / (3.0 * se + tail));
  }
  return {ok, "max |est-kernel|/SE " + num(worst_kernel) + ", max |est-free|/(3SE+tail) " + num(worst_free)};
}

Outcome perturbation() {
  PerturbationOptions opts;
  opts.alpha = 0.3;
  opts.m = 1.0;
  opts.kappa = 20.0;
  opts.samples = 100'000;
  opts.workers = workers();
  const PerturbationReport r = perturbative_check({0.01, {-1.0, 1.0, WindowProfile::kIndicator}}, opts);
  const bool two = std::fabs(r.two_point.estimate) < 3.0 * r.two_point.sigma;
  const bool ok = two && r.four_point.pass;
  return {ok, "2-point " + num(r.two_point.estimate) + " (sigma " + num(r.two_point.sigma) + "), 4-point " +
                  num(r.four_point.estimate) + " vs " + num(r.four_point.oracle) + " (sigma " +
                  num(r.four_point.sigma) + ")"};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  std::vector<int> expect_fail;
  std::vector<int> only;
  app.add_option("--expect-fail", expect_fail, "criteria known not to be met")->delimiter(',');
  app.add_option("--only", only, "run a subset")->delimiter(',');
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> criteria{
      {1, "classification theorem", 60, classification},
      {2, "sunset power scaling at 3/4", 600, sunset_power},
      {3, "sunset log scaling at 2/3", 600, sunset_log},
      {4, "nut log scaling at 5/8, constant at 3/5", 1200, nut_log},
      {5, "renormalized finiteness", 600, renormalized_finiteness},
      {6, "combinatorial oracles", 60, combinatorics},
      {7, "sampler covariance", 300, sampler_covariance},
      {8, "perturbative cross-check", 600, perturbation},
  };

  int unexpected = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o = c.run();
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (seconds > c.budget_seconds) {
      o.pass = false;
      o.detail += "; over budget";
    }
    const bool known = std::find(expect_fail.begin(), expect_fail.end(), c.id) != expect_fail.end();
    if (!o.pass && !known) ++unexpected;
    std::printf("%s %d %s: %s [%.1fs]%s\n", o.pass ? "PASS" : "FAIL", c.id, c.title.c_str(), o.detail.c_str(),
                seconds, !o.pass && known ? " (known)" : "");
    std::fflush(stdout);
  }
  return unexpected == 0 ? 0 : 1;
}
