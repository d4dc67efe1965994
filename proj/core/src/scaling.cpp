#include "fracphi/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>
#include <boost/math/tools/minima.hpp>

#include "fracphi/error.hpp"

namespace fracphi {

std::string to_string(ScalingModel m) {
  switch (m) {
    case ScalingModel::kPower: return "power";
    case ScalingModel::kLog: return "log";
    case ScalingModel::kConstant: return "constant";
  }
  return "unknown";
}

namespace {

double weight(const ScalingPoint& p) {
  const double s = std::max({p.error, 1e-9 * std::fabs(p.value), 1e-300});
  return 1.0 / (s * s);
}

struct Linear {
  double a = 0.0, b = 0.0;
  double chi2 = 0.0;
  Eigen::Matrix2d cov = Eigen::Matrix2d::Zero();
};

// value ~ a * x + b, weighted.
Linear linear_fit(std::span<const ScalingPoint> pts, const std::vector<double>& x) {
  Eigen::Matrix2d n = Eigen::Matrix2d::Zero();
  Eigen::Vector2d rhs = Eigen::Vector2d::Zero();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double w = weight(pts[i]);
    const Eigen::Vector2d j(x[i], 1.0);
    n += w * j * j.transpose();
    rhs += w * pts[i].value * j;
  }
  Linear out;
  const Eigen::Vector2d sol = n.ldlt().solve(rhs);
  out.a = sol(0);
  out.b = sol(1);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double r = pts[i].value - out.a * x[i] - out.b;
    out.chi2 += weight(pts[i]) * r * r;
  }
  out.cov = n.inverse();
  return out;
}

double rms(std::span<const ScalingPoint> pts, double chi2) {
  double wsum = 0.0;
  for (const auto& p : pts) wsum += weight(p);
  return std::sqrt(chi2 / wsum);
}

double covariance_scale(double chi2, std::size_t n, int params) {
  const double dof = static_cast<double>(n) - params;
  return dof > 0 ? std::max(1.0, chi2 / dof) : 1.0;
}

}  // namespace

ModelFit fit_constant(std::span<const ScalingPoint> pts) {
  double wsum = 0.0, acc = 0.0;
  for (const auto& p : pts) {
    wsum += weight(p);
    acc += weight(p) * p.value;
  }
  ModelFit f;
  f.model = ScalingModel::kConstant;
  f.intercept = acc / wsum;
  for (const auto& p : pts) f.chi2 += weight(p) * (p.value - f.intercept) * (p.value - f.intercept);
  f.residual = rms(pts, f.chi2);
  f.parameter_error = std::sqrt(covariance_scale(f.chi2, pts.size(), 1) / wsum);
  return f;
}

ModelFit fit_log(std::span<const ScalingPoint> pts) {
  std::vector<double> x;
  for (const auto& p : pts) x.push_back(std::log(p.kappa));
  const Linear lin = linear_fit(pts, x);
  ModelFit f;
  f.model = ScalingModel::kLog;
  f.parameter = lin.a;
  f.amplitude = lin.a;
  f.intercept = lin.b;
  f.chi2 = lin.chi2;
  f.residual = rms(pts, lin.chi2);
  f.parameter_error = std::sqrt(lin.cov(0, 0) * covariance_scale(lin.chi2, pts.size(), 2));
  return f;
}

ModelFit fit_power(std::span<const ScalingPoint> pts, double lo, double hi) {
  // kappa is scaled by the geometric mean to keep the basis well conditioned
  double logmean = 0.0;
  for (const auto& p : pts) logmean += std::log(p.kappa);
  logmean /= static_cast<double>(pts.size());
  std::vector<double> lk;
  for (const auto& p : pts) lk.push_back(std::log(p.kappa) - logmean);
  auto profile = [&](double p) {
    std::vector<double> x;
    for (double l : lk) x.push_back(std::exp(p * l));
    return linear_fit(pts, x);
  };
  constexpr int kScan = 64;
  double best_p = lo, best_chi2 = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= kScan; ++i) {
    const double p = lo + (hi - lo) * i / kScan;
    const double c = profile(p).chi2;
    if (c < best_chi2) {
      best_chi2 = c;
      best_p = p;
    }
  }
  const double step = (hi - lo) / kScan;
  const auto [p, chi2] = boost::math::tools::brent_find_minima(
      [&](double q) { return profile(q).chi2; }, std::max(lo, best_p - step),
      std::min(hi, best_p + step), 40);
  const Linear lin = profile(p);

  ModelFit f;
  f.model = ScalingModel::kPower;
  f.parameter = p;
  f.amplitude = lin.a * std::exp(-p * logmean);
  f.intercept = lin.b;
  f.chi2 = chi2;
  f.residual = rms(pts, chi2);
  // Gauss-Newton covariance in (a, b, p)
  Eigen::Matrix3d n = Eigen::Matrix3d::Zero();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double e = std::exp(p * lk[i]);
    const Eigen::Vector3d j(e, 1.0, lin.a * e * lk[i]);
    n += weight(pts[i]) * j * j.transpose();
  }
  const Eigen::Matrix3d cov = n.completeOrthogonalDecomposition().pseudoInverse();
  f.parameter_error = std::sqrt(std::max(0.0, cov(2, 2)) * covariance_scale(chi2, pts.size(), 3));
  return f;
}

ScalingFit scaling_fit(std::span<const ScalingPoint> points, const ScalingOptions& opts) {
  if (points.size() < 4) throw InvalidArgument("insufficient kappa range");
  double kmin = std::numeric_limits<double>::infinity(), kmax = 0.0;
  for (const auto& p : points) {
    if (!(p.kappa > 0.0) || !std::isfinite(p.value) || !(p.error >= 0.0)) {
      throw InvalidArgument("scaling points need kappa > 0, finite value and error >= 0");
    }
    kmin = std::min(kmin, p.kappa);
    kmax = std::max(kmax, p.kappa);
  }
  if (std::log10(kmax / kmin) < 2.0 - 1e-9) throw InvalidArgument("insufficient kappa range");

  std::vector<ScalingPoint> pts(points.begin(), points.end());
  std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) { return a.kappa < b.kappa; });

  ScalingFit out;
  for (const auto& p : pts) out.kappa_grid.push_back(p.kappa);
  out.constant = fit_constant(pts);
  out.log = fit_log(pts);
  const ModelFit grow = fit_power(pts, opts.min_exponent, opts.max_exponent);
  const ModelFit decay = fit_power(pts, -opts.max_exponent, -opts.min_exponent);
  out.power = grow.residual <= decay.residual ? grow : decay;
  out.log_advantage = out.power.residual / std::max(out.log.residual, 1e-300);

  const std::span<const ScalingPoint> head(pts.data(), pts.size() - 1);
  const ModelFit log_head = fit_log(head);
  out.coefficient_drift = std::fabs(log_head.parameter - out.log.parameter) /
                          std::max(std::fabs(out.log.parameter), 1e-300);

  auto take = [&](const ModelFit& f, bool decisive) {
    out.decisive = decisive;
    out.residual = f.residual;
    if (f.model == ScalingModel::kPower && f.parameter < 0.0) {
      // decaying correction on top of a finite limit
      out.model = ScalingModel::kConstant;
      out.parameter = 0.0;
      out.parameter_error = 0.0;
      out.intercept = f.intercept;
      return;
    }
    out.model = f.model;
    out.parameter = f.parameter;
    out.parameter_error = f.parameter_error;
    out.intercept = f.intercept;
  };

  const double dof = static_cast<double>(pts.size()) - 1.0;
  if (out.constant.chi2 / dof <= opts.constant_chi2) {
    take(out.constant, true);
  } else if (opts.preference_factor * out.log.residual <= out.power.residual) {
    take(out.log, true);
  } else if (opts.preference_factor * out.power.residual <= out.log.residual) {
    take(out.power, true);
  } else {
    take(out.log.residual <= out.power.residual ? out.log : out.power, false);
  }
  return out;
}

}  // namespace fracphi
