#include "fracphi/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

#include <boost/random/normal_distribution.hpp>

#include "fracphi/error.hpp"
#include "fracphi/quadrature.hpp"
#include "fracphi/seeding.hpp"

namespace fracphi {

double band_limited_kernel(double tau, double m, double kappa, double s) {
  if (!(m > 0.0)) throw InvalidArgument("mass must be positive");
  if (!(kappa > 0.0)) throw InvalidArgument("cutoff must be positive");
  auto f = [&](double p) {
    const double w = s == 0.0 ? 1.0 : (p == 0.0 ? 0.0 : std::pow(p, s));
    return Estimate{w * std::cos(p * tau) / (p * p + m * m), 0.0};
  };
  std::vector<double> bp{0.0};
  if (tau != 0.0) {
    const double half = std::numbers::pi / std::fabs(tau);
    for (double x = half; x < kappa; x += half) bp.push_back(x);
  }
  if (m < kappa) bp.push_back(m);
  bp.push_back(kappa);
  std::sort(bp.begin(), bp.end());
  bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
  const QuadratureResult q = adaptive_gauss_kronrod(f, bp, 1e-15, 1e-12, 20000);
  return q.value / std::numbers::pi;
}

double free_covariance(double tau, double m) { return std::exp(-m * std::fabs(tau)) / (2.0 * m); }

double kernel_tail_bound(double kappa) { return 1.0 / (std::numbers::pi * kappa); }

double normal_ordered_quartic(double x, double c) {
  if (c < 0.0) throw InvalidArgument("variance must be nonnegative");
  const double x2 = x * x;
  return x2 * x2 - 6.0 * c * x2 + 3.0 * c * c;
}

SpectralSampler::SpectralSampler(double m, double kappa, std::uint64_t seed, double max_spacing)
    : m_(m), kappa_(kappa), seed_(seed) {
  if (!(m > 0.0) || !std::isfinite(m)) throw InvalidArgument("mass must be positive");
  if (!(kappa > 0.0) || !std::isfinite(kappa)) throw InvalidArgument("cutoff must be positive");
  const double target = max_spacing > 0.0 ? max_spacing : m / 20.0;
  const auto count = static_cast<std::size_t>(std::ceil(kappa / target - 1e-9));
  if (count > 50'000'000) throw InvalidArgument("frequency grid too large");
  dp_ = kappa / static_cast<double>(std::max<std::size_t>(count, 1));
  coarse_ = dp_ > m / 20.0 * (1.0 + 1e-12);
  p_.resize(std::max<std::size_t>(count, 1));
  sigma_.resize(p_.size());
  for (std::size_t j = 0; j < p_.size(); ++j) {
    p_[j] = (static_cast<double>(j) + 0.5) * dp_;
    sigma_[j] = std::sqrt(dp_ / (std::numbers::pi * (p_[j] * p_[j] + m * m)));
  }
}

std::string SpectralSampler::warning() const {
  if (!coarse_) return {};
  std::ostringstream os;
  os << "frequency spacing " << dp_ << " exceeds m/20 = " << m_ / 20.0;
  return os.str();
}

SpectralAmplitudes SpectralSampler::amplitudes(std::uint64_t index) const {
  std::mt19937_64 rng(derive_seed(seed_, index));
  boost::random::normal_distribution<double> normal;
  SpectralAmplitudes a;
  a.cosine.resize(p_.size());
  a.sine.resize(p_.size());
  for (std::size_t j = 0; j < p_.size(); ++j) {
    a.cosine[j] = normal(rng);
    a.sine[j] = normal(rng);
  }
  return a;
}

std::vector<double> SpectralSampler::weights(double alpha) const {
  std::vector<double> w(sigma_);
  if (alpha != 0.0) {
    for (std::size_t j = 0; j < w.size(); ++j) w[j] *= std::pow(p_[j], alpha);
  }
  return w;
}

double SpectralSampler::covariance(double tau, double a1, double a2) const {
  double acc = 0.0;
  for (std::size_t j = 0; j < p_.size(); ++j) {
    const double w = sigma_[j] * sigma_[j] * (a1 + a2 == 0.0 ? 1.0 : std::pow(p_[j], a1 + a2));
    acc += w * std::cos(p_[j] * tau);
  }
  return acc;
}

Synthesizer::Synthesizer(const SpectralSampler& sampler, std::span<const double> times, double alpha)
    : times_(times.size()), freqs_(sampler.frequencies().size()) {
  const auto w = sampler.weights(alpha);
  const auto& p = sampler.frequencies();
  cos_.resize(times_ * freqs_);
  sin_.resize(times_ * freqs_);
  for (std::size_t i = 0; i < times_; ++i) {
    for (std::size_t j = 0; j < freqs_; ++j) {
      cos_[i * freqs_ + j] = w[j] * std::cos(p[j] * times[i]);
      sin_[i * freqs_ + j] = w[j] * std::sin(p[j] * times[i]);
    }
  }
}

void Synthesizer::evaluate(const SpectralAmplitudes& a, std::span<double> out) const {
  for (std::size_t i = 0; i < times_; ++i) {
    const double* c = cos_.data() + i * freqs_;
    const double* s = sin_.data() + i * freqs_;
    double acc = 0.0;
    for (std::size_t j = 0; j < freqs_; ++j) acc += c[j] * a.cosine[j] + s[j] * a.sine[j];
    out[i] = acc;
  }
}

PathSample SpectralSampler::sample(std::uint64_t index, std::span<const double> times) const {
  PathSample s;
  s.index = index;
  s.time_grid.assign(times.begin(), times.end());
  s.amplitudes = amplitudes(index);
  s.values.resize(times.size());
  Synthesizer(*this, times, 0.0).evaluate(s.amplitudes, s.values);
  return s;
}

std::vector<PathSample> sample_paths(double m, double kappa, std::span<const double> times,
                                     std::size_t count, std::uint64_t seed) {
  if (count < 1) throw InvalidArgument("path count must be at least 1");
  const SpectralSampler sampler(m, kappa, seed);
  const Synthesizer synth(sampler, times, 0.0);
  std::vector<PathSample> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    out[i].index = i;
    out[i].time_grid.assign(times.begin(), times.end());
    out[i].amplitudes = sampler.amplitudes(i);
    out[i].values.resize(times.size());
    synth.evaluate(out[i].amplitudes, out[i].values);
  }
  return out;
}

PathSample fractional_path(const SpectralSampler& sampler, const PathSample& sample, double alpha) {
  if (sample.amplitudes.cosine.size() != sampler.frequencies().size()) {
    throw InvalidArgument("path amplitudes do not match the sampler's frequency grid");
  }
  PathSample out = sample;
  out.alpha = alpha;
  if (alpha == 0.0) {
    out.fractional_values = sample.values;
    return out;
  }
  out.fractional_values.resize(sample.time_grid.size());
  Synthesizer(sampler, sample.time_grid, alpha).evaluate(sample.amplitudes, out.fractional_values);
  return out;
}

void Accumulator::add(double x) {
  ++n;
  const double d = x - mean;
  mean += d / static_cast<double>(n);
  m2 += d * (x - mean);
}

void Accumulator::merge(const Accumulator& o) {
  if (o.n == 0) return;
  if (n == 0) {
    *this = o;
    return;
  }
  const double total = static_cast<double>(n + o.n);
  const double d = o.mean - mean;
  mean += d * static_cast<double>(o.n) / total;
  m2 += o.m2 + d * d * static_cast<double>(n) * static_cast<double>(o.n) / total;
  n += o.n;
}

double Accumulator::variance() const { return n > 1 ? m2 / static_cast<double>(n - 1) : 0.0; }

double Accumulator::standard_error() const {
  return n > 1 ? std::sqrt(variance() / static_cast<double>(n)) : 0.0;
}

CovarianceEstimate estimate_covariance(const SpectralSampler& sampler, std::span<const double> lags,
                                       std::uint64_t count, double alpha, unsigned workers) {
  if (count < 2) throw InvalidArgument("path count must be at least 2");
  std::vector<double> times{0.0};
  times.insert(times.end(), lags.begin(), lags.end());
  const Synthesizer synth(sampler, times, alpha);
  const std::size_t nl = lags.size();

  constexpr std::uint64_t kBlock = 1024;
  const std::uint64_t blocks = (count + kBlock - 1) / kBlock;
  std::vector<std::vector<Accumulator>> partial(blocks, std::vector<Accumulator>(nl));
  auto run = [&](std::uint64_t b0, std::uint64_t b1) {
    std::vector<double> x(times.size());
    for (std::uint64_t b = b0; b < b1; ++b) {
      const std::uint64_t end = std::min(count, (b + 1) * kBlock);
      for (std::uint64_t i = b * kBlock; i < end; ++i) {
        synth.evaluate(sampler.amplitudes(i), x);
        for (std::size_t l = 0; l < nl; ++l) partial[b][l].add(x[0] * x[l + 1]);
      }
    }
  };
  const unsigned w = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(blocks)));
  if (w == 1) {
    run(0, blocks);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < w; ++t) pool.emplace_back(run, t * blocks / w, (t + 1) * blocks / w);
    for (auto& th : pool) th.join();
  }

  CovarianceEstimate est;
  est.paths = count;
  for (std::size_t l = 0; l < nl; ++l) {
    Accumulator acc;
    for (const auto& blk : partial) acc.merge(blk[l]);
    const double lag = lags[l];
    est.lags.push_back(lag);
    est.value.push_back(acc.mean);
    est.standard_error.push_back(acc.standard_error());
    est.grid_oracle.push_back(sampler.covariance(lag, alpha, alpha));
    est.kernel_oracle.push_back(band_limited_kernel(lag, sampler.m(), sampler.kappa(), 2.0 * alpha));
    est.free_oracle.push_back(alpha == 0.0 ? free_covariance(lag, sampler.m()) : std::nan(""));
  }
  return est;
}

std::vector<std::vector<double>> sample_covariance_matrix(std::span<const PathSample> paths) {
  if (paths.empty()) throw InvalidArgument("no paths");
  const std::size_t t = paths.front().values.size();
  std::vector<double> mean(t, 0.0);
  for (const auto& p : paths) {
    if (p.values.size() != t) throw InvalidArgument("paths on different time grids");
    for (std::size_t i = 0; i < t; ++i) mean[i] += p.values[i];
  }
  for (auto& v : mean) v /= static_cast<double>(paths.size());
  std::vector<std::vector<double>> cov(t, std::vector<double>(t, 0.0));
  for (const auto& p : paths) {
    for (std::size_t i = 0; i < t; ++i) {
      for (std::size_t j = 0; j <= i; ++j) cov[i][j] += (p.values[i] - mean[i]) * (p.values[j] - mean[j]);
    }
  }
  const double denom = paths.size() > 1 ? static_cast<double>(paths.size() - 1) : 1.0;
  for (std::size_t i = 0; i < t; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      cov[i][j] /= denom;
      cov[j][i] = cov[i][j];
    }
  }
  return cov;
}

}  // namespace fracphi
