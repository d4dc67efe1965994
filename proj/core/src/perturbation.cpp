#include "fracphi/perturbation.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include <boost/math/special_functions/legendre.hpp>

#include "fracphi/error.hpp"
#include "fracphi/quadrature.hpp"

namespace fracphi {

void Window::validate() const {
  if (!(a < b) || !std::isfinite(a) || !std::isfinite(b)) {
    throw InvalidArgument("window needs a < b");
  }
}

double Window::operator()(double tau) const {
  if (tau < a || tau > b) return 0.0;
  if (profile == WindowProfile::kIndicator) return 1.0;
  const double u = (2.0 * tau - a - b) / (b - a);
  const double q = 1.0 - u * u;
  return q <= 0.0 ? 0.0 : std::exp(1.0 - 1.0 / q);
}

WindowProfile parse_window_profile(const std::string& s) {
  if (s == "indicator") return WindowProfile::kIndicator;
  if (s == "bump") return WindowProfile::kBump;
  throw InvalidArgument("unknown window profile '" + s + "'");
}

std::string to_string(WindowProfile p) {
  return p == WindowProfile::kIndicator ? "indicator" : "bump";
}

void PerturbationSetting::validate() const {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw InvalidArgument("coupling must be nonnegative");
  window.validate();
}

double cross_covariance(double t_minus_tau, double alpha, double m, double kappa) {
  return band_limited_kernel(t_minus_tau, m, kappa, alpha);
}

double first_order_four_point(const PerturbationSetting& setting, const PerturbationOptions& opts) {
  setting.validate();
  auto integrand = [&](double tau) {
    double v = setting.window(tau);
    for (double t : opts.times) v *= cross_covariance(t - tau, opts.alpha, opts.m, opts.kappa);
    return Estimate{v, 0.0};
  };
  std::vector<double> bp{setting.window.a};
  for (double t : opts.times) {
    if (t > setting.window.a && t < setting.window.b) bp.push_back(t);
  }
  bp.push_back(setting.window.b);
  std::sort(bp.begin(), bp.end());
  bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
  const QuadratureResult q = adaptive_gauss_kronrod(integrand, bp, 1e-14, 1e-10, 2000);
  return -setting.lambda * 24.0 * q.value;
}

namespace {

struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
};

GaussLegendre gauss_legendre(int n, double a, double b) {
  GaussLegendre gl;
  const auto zeros = boost::math::legendre_p_zeros<double>(n);
  auto add = [&](double x) {
    const double d = boost::math::legendre_p_prime(n, x);
    const double w = 2.0 / ((1.0 - x * x) * d * d);
    gl.nodes.push_back(0.5 * (a + b) + 0.5 * (b - a) * x);
    gl.weights.push_back(0.5 * (b - a) * w);
  };
  for (double z : zeros) {
    if (z != 0.0) add(-z);
  }
  for (auto it = zeros.rbegin(); it != zeros.rend(); ++it) add(*it);
  return gl;
}

struct Sums {
  Accumulator two, four, free;
};

Comparison compare(const Accumulator& acc, double oracle, double tolerance) {
  Comparison c;
  c.estimate = acc.mean;
  c.oracle = oracle;
  c.sigma = acc.standard_error();
  c.pass = std::fabs(c.estimate - c.oracle) < 3.0 * c.sigma ||
           (c.sigma == 0.0 && std::fabs(c.estimate - c.oracle) <= 1e-12 * (1.0 + std::fabs(oracle)));
  c.noisy = tolerance > 0.0 && c.sigma > tolerance;
  return c;
}

}  // namespace

PerturbationReport perturbative_check(const PerturbationSetting& setting,
                                      const PerturbationOptions& opts) {
  setting.validate();
  if (!(opts.alpha >= 0.0 && opts.alpha < 1.0)) throw InvalidArgument("alpha must lie in [0, 1)");
  if (opts.samples < 2) throw InvalidArgument("sample count must be at least 2");
  if (opts.quadrature_nodes < 2) throw InvalidArgument("at least two quadrature nodes required");

  const SpectralSampler sampler(opts.m, opts.kappa, opts.seed);
  const GaussLegendre gl = gauss_legendre(opts.quadrature_nodes, setting.window.a, setting.window.b);
  std::vector<double> g(gl.nodes.size());
  for (std::size_t q = 0; q < g.size(); ++q) g[q] = gl.weights[q] * setting.window(gl.nodes[q]);
  const Synthesizer at_times(sampler, opts.times, 0.0);
  const Synthesizer at_nodes(sampler, gl.nodes, opts.alpha);
  const double c = sampler.covariance(0.0, opts.alpha, opts.alpha);
  const double lambda = setting.lambda;

  constexpr std::uint64_t kBlock = 1024;
  const std::uint64_t blocks = (opts.samples + kBlock - 1) / kBlock;
  std::vector<Sums> partial(blocks);
  auto run = [&](std::uint64_t b0, std::uint64_t b1) {
    std::vector<double> x(4), y(gl.nodes.size());
    for (std::uint64_t b = b0; b < b1; ++b) {
      const std::uint64_t end = std::min(opts.samples, (b + 1) * kBlock);
      for (std::uint64_t i = b * kBlock; i < end; ++i) {
        const SpectralAmplitudes amp = sampler.amplitudes(i);
        at_times.evaluate(amp, x);
        at_nodes.evaluate(amp, y);
        double u = 0.0;
        for (std::size_t q = 0; q < y.size(); ++q) u += g[q] * normal_ordered_quartic(y[q], c);
        const double x4 = x[0] * x[1] * x[2] * x[3];
        partial[b].two.add(-lambda * x[0] * x[1] * u);
        partial[b].four.add(-lambda * x4 * u);
        partial[b].free.add(x4);
      }
    }
  };
  const unsigned w = std::max(1u, std::min<unsigned>(opts.workers, static_cast<unsigned>(blocks)));
  if (w == 1) {
    run(0, blocks);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < w; ++t) pool.emplace_back(run, t * blocks / w, (t + 1) * blocks / w);
    for (auto& th : pool) th.join();
  }
  Sums total;
  for (const auto& s : partial) {
    total.two.merge(s.two);
    total.four.merge(s.four);
    total.free.merge(s.free);
  }

  const auto& t = opts.times;
  auto F = [&](double tau) { return band_limited_kernel(tau, opts.m, opts.kappa); };
  const double wick = F(t[0] - t[1]) * F(t[2] - t[3]) + F(t[0] - t[2]) * F(t[1] - t[3]) +
                      F(t[0] - t[3]) * F(t[1] - t[2]);

  PerturbationReport r;
  r.two_point = compare(total.two, 0.0, opts.tolerance);
  r.four_point = compare(total.four, first_order_four_point(setting, opts), opts.tolerance);
  r.free_four_point = compare(total.free, wick, opts.tolerance);
  r.variance = c;
  r.samples = opts.samples;
  r.warning = sampler.warning();
  return r;
}

}  // namespace fracphi
