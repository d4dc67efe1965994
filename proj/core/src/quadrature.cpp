#include "fracphi/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <queue>
#include <random>
#include <thread>

#include <boost/random/sobol.hpp>

#include "fracphi/error.hpp"
#include "fracphi/seeding.hpp"

namespace fracphi {

std::string to_string(Method m) {
  switch (m) {
    case Method::kAuto: return "auto";
    case Method::kAdaptiveQuadrature: return "adaptiveQuadrature";
    case Method::kQuasiRandom: return "quasiRandom";
  }
  return "unknown";
}

Method parse_method(const std::string& s) {
  if (s == "auto") return Method::kAuto;
  if (s == "adaptive" || s == "adaptiveQuadrature") return Method::kAdaptiveQuadrature;
  if (s == "qmc" || s == "quasi" || s == "quasiRandom") return Method::kQuasiRandom;
  throw InvalidArgument("unknown integration method '" + s + "'");
}

namespace {

// 15-point Kronrod abscissae on [0, 1] (descending) and weights; the 7-point
// Gauss rule uses the odd-indexed abscissae plus the centre.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Piece {
  double a, b, value, error;
  bool operator<(const Piece& o) const { return error < o.error; }
};

Piece kronrod(const std::function<Estimate(double)>& f, double a, double b, std::uint64_t& evals) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  const Estimate fc = f(c);
  double resk = fc.value * kWgk[7];
  double resg = fc.value * kWg[3];
  double inner = fc.error * kWgk[7];
  for (int j = 0; j < 7; ++j) {
    const double x = h * kXgk[j];
    const Estimate f1 = f(c - x), f2 = f(c + x);
    resk += kWgk[j] * (f1.value + f2.value);
    inner += kWgk[j] * (f1.error + f2.error);
    if (j % 2 == 1) resg += kWg[j / 2] * (f1.value + f2.value);
  }
  evals += 15;
  return {a, b, resk * h, std::fabs((resk - resg) * h) + inner * std::fabs(h)};
}

std::vector<double> clean_breakpoints(std::vector<double> pts, double lo, double hi) {
  std::vector<double> out{lo};
  std::erase_if(pts, [&](double x) { return !(x > lo && x < hi) || !std::isfinite(x); });
  std::sort(pts.begin(), pts.end());
  const double tol = 1e-12 * std::max({1.0, std::fabs(lo), std::fabs(hi)});
  for (double x : pts) {
    if (x - out.back() > tol) out.push_back(x);
  }
  if (hi - out.back() > tol) {
    out.push_back(hi);
  } else {
    out.back() = hi;
  }
  return out;
}

}  // namespace

QuadratureResult adaptive_gauss_kronrod(const std::function<Estimate(double)>& f,
                                        const std::vector<double>& breakpoints, double abs_tol,
                                        double rel_tol, std::size_t max_intervals) {
  QuadratureResult res;
  std::priority_queue<Piece> heap;
  std::vector<Piece> settled;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    if (breakpoints[i + 1] > breakpoints[i]) heap.push(kronrod(f, breakpoints[i], breakpoints[i + 1], res.evaluations));
  }
  auto totals = [&] {
    double v = 0.0, e = 0.0;
    auto copy = heap;
    while (!copy.empty()) {
      v += copy.top().value;
      e += copy.top().error;
      copy.pop();
    }
    for (const auto& p : settled) {
      v += p.value;
      e += p.error;
    }
    return std::pair{v, e};
  };
  auto [value, error] = totals();
  std::size_t intervals = heap.size();
  while (!heap.empty() && error > std::max(abs_tol, rel_tol * std::fabs(value)) &&
         intervals < max_intervals) {
    const Piece worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b) ||
        worst.b - worst.a < 1e-13 * std::max(1.0, std::fabs(mid))) {
      settled.push_back(worst);
      continue;
    }
    const Piece left = kronrod(f, worst.a, mid, res.evaluations);
    const Piece right = kronrod(f, mid, worst.b, res.evaluations);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++intervals;
  }
  std::tie(value, error) = totals();  // resum to shed drift
  res.value = value;
  res.error = error;
  res.converged = error <= std::max(abs_tol, rel_tol * std::fabs(value));
  return res;
}

namespace {

constexpr std::size_t kOuterIntervals = 4000;
constexpr std::size_t kInnerIntervals = 400;

IntegralResult integrate_one_loop(const CompiledIntegrand& f, const IntegrationOptions& o) {
  const double kappa = f.spec().kappa;
  const bool per_line = f.spec().geometry == CutoffGeometry::kPerLine;
  std::vector<double> pts;
  for (const auto& leaf : f.leaves()) {
    for (int j = 0; j < f.line_count(); ++j) {
      const double m = leaf.matrix[static_cast<std::size_t>(j)];
      if (std::fabs(m) < 1e-14) continue;
      for (double s : {-1.0, 0.0, 1.0}) {
        if (!per_line && s != 0.0) continue;
        pts.push_back((s * kappa - leaf.offset[static_cast<std::size_t>(j)]) / m);
      }
    }
  }
  const auto bp = clean_breakpoints(pts, f.lower()[0], f.upper()[0]);
  std::array<double, 1> k{};
  auto g = [&](double x) {
    k[0] = x;
    return Estimate{f(k), 0.0};
  };
  const QuadratureResult q = adaptive_gauss_kronrod(g, bp, o.absolute_error, o.target_error, kOuterIntervals);
  if (!q.converged) {
    throw NonConvergence("adaptive quadrature did not reach the target error", q.value, q.error);
  }
  return {q.value, q.error, q.evaluations, Method::kAdaptiveQuadrature};
}

struct Family {
  double alpha;  // inner breakpoint k2 = alpha + beta * k1
  double beta;
};

IntegralResult integrate_two_loop(const CompiledIntegrand& f, const IntegrationOptions& o) {
  const double kappa = f.spec().kappa;
  const bool per_line = f.spec().geometry == CutoffGeometry::kPerLine;
  const double lo1 = f.lower()[0], hi1 = f.upper()[0];
  const double lo2 = f.lower()[1], hi2 = f.upper()[1];

  std::vector<Family> families;
  std::vector<double> outer_pts;
  for (const auto& leaf : f.leaves()) {
    for (int j = 0; j < f.line_count(); ++j) {
      const double m1 = leaf.matrix[static_cast<std::size_t>(2 * j)];
      const double m2 = leaf.matrix[static_cast<std::size_t>(2 * j + 1)];
      const double off = leaf.offset[static_cast<std::size_t>(j)];
      for (double s : {-1.0, 0.0, 1.0}) {
        if (!per_line && s != 0.0) continue;
        if (std::fabs(m2) > 1e-14) {
          families.push_back({(s * kappa - off) / m2, -m1 / m2});
        } else if (std::fabs(m1) > 1e-14) {
          outer_pts.push_back((s * kappa - off) / m1);
        }
      }
    }
  }
  std::sort(families.begin(), families.end(), [](const Family& a, const Family& b) {
    return a.alpha != b.alpha ? a.alpha < b.alpha : a.beta < b.beta;
  });
  families.erase(std::unique(families.begin(), families.end(),
                             [](const Family& a, const Family& b) {
                               return std::fabs(a.alpha - b.alpha) <= 1e-12 * (1.0 + std::fabs(a.alpha)) &&
                                      std::fabs(a.beta - b.beta) <= 1e-12;
                             }),
                 families.end());
  // kinks of the inner integral as a function of k1
  for (std::size_t a = 0; a < families.size(); ++a) {
    const Family& fa = families[a];
    if (std::fabs(fa.beta) > 1e-14) {
      outer_pts.push_back((lo2 - fa.alpha) / fa.beta);
      outer_pts.push_back((hi2 - fa.alpha) / fa.beta);
    }
    for (std::size_t b = a + 1; b < families.size(); ++b) {
      const Family& fb = families[b];
      const double db = fa.beta - fb.beta;
      if (std::fabs(db) > 1e-14) outer_pts.push_back((fb.alpha - fa.alpha) / db);
    }
  }
  const auto outer_bp = clean_breakpoints(outer_pts, lo1, hi1);

  std::uint64_t inner_evals = 0;
  std::array<double, 2> k{};
  std::vector<double> inner_pts;
  inner_pts.reserve(families.size());
  const double inner_rel = 0.01 * o.target_error;
  auto inner = [&](double k1) {
    inner_pts.clear();
    for (const auto& fam : families) inner_pts.push_back(fam.alpha + fam.beta * k1);
    const auto bp = clean_breakpoints(inner_pts, lo2, hi2);
    k[0] = k1;
    auto g = [&](double k2) {
      k[1] = k2;
      return Estimate{f(k), 0.0};
    };
    const QuadratureResult q = adaptive_gauss_kronrod(g, bp, 0.0, inner_rel, kInnerIntervals);
    inner_evals += q.evaluations;
    return Estimate{q.value, q.error};
  };
  const QuadratureResult q =
      adaptive_gauss_kronrod(inner, outer_bp, o.absolute_error, o.target_error, kOuterIntervals);
  if (!q.converged) {
    throw NonConvergence("nested adaptive quadrature did not reach the target error", q.value, q.error);
  }
  return {q.value, q.error, inner_evals, Method::kAdaptiveQuadrature};
}

// Log-stretched coordinate: t in [-neg, pos] -> k = sign(t) m (e^|t| - 1).
struct StretchMap {
  double neg = 0.0;
  double pos = 0.0;
  double m = 1.0;

  double width() const { return neg + pos; }
  // returns k and writes dk/du for u in [0, 1)
  double map(double u, double& jac) const {
    const double t = u * width() - neg;
    const double k = std::copysign(m * std::expm1(std::fabs(t)), t);
    jac = width() * (m + std::fabs(k));
    return k;
  }
};

IntegralResult integrate_quasi_random(const CompiledIntegrand& f, const IntegrationOptions& o) {
  const int d = f.dimension();
  const int R = std::max(2, o.replicates);
  const double m = f.spec().m;
  std::vector<StretchMap> maps(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) {
    maps[i].m = m;
    maps[i].neg = std::log1p(std::max(0.0, -f.lower()[i]) / m);
    maps[i].pos = std::log1p(std::max(0.0, f.upper()[i]) / m);
  }
  std::vector<std::vector<double>> shifts(static_cast<std::size_t>(R), std::vector<double>(d));
  for (int r = 0; r < R; ++r) {
    std::mt19937_64 rng(derive_seed(o.seed, static_cast<std::uint64_t>(r)));
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int i = 0; i < d; ++i) shifts[r][i] = uni(rng);
  }

  boost::random::sobol engine(static_cast<std::size_t>(d));
  const double scale = 1.0 / (static_cast<double>(boost::random::sobol::max()) + 1.0);
  std::vector<double> sums(static_cast<std::size_t>(R), 0.0);
  std::uint64_t points = 0;
  std::uint64_t block = std::max<std::uint64_t>(o.initial_points, 64);
  const unsigned workers = std::max(1u, std::min<unsigned>(o.workers, static_cast<unsigned>(R)));
  constexpr std::uint64_t kChunk = 1u << 14;
  std::vector<double> chunk;

  auto evaluate_replicates = [&](std::uint64_t count, int r_begin, int r_end) {
    std::vector<double> k(static_cast<std::size_t>(d));
    for (int r = r_begin; r < r_end; ++r) {
      double acc = 0.0;
      for (std::uint64_t p = 0; p < count; ++p) {
        double w = 1.0;
        for (int i = 0; i < d; ++i) {
          double u = chunk[p * d + i] + shifts[r][i];
          if (u >= 1.0) u -= 1.0;
          double jac;
          k[i] = maps[i].map(u, jac);
          w *= jac;
        }
        acc += w * f(k);
      }
      sums[r] += acc;
    }
  };

  for (;;) {
    for (std::uint64_t done = 0; done < block; done += kChunk) {
      const std::uint64_t count = std::min(kChunk, block - done);
      chunk.resize(count * d);
      for (auto& x : chunk) x = static_cast<double>(engine()) * scale;
      if (workers == 1) {
        evaluate_replicates(count, 0, R);
      } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) {
          const int b = static_cast<int>(w * R / workers), e = static_cast<int>((w + 1) * R / workers);
          pool.emplace_back(evaluate_replicates, count, b, e);
        }
        for (auto& t : pool) t.join();
      }
    }
    points += block;
    double mean = 0.0;
    for (double s : sums) mean += s / static_cast<double>(points);
    mean /= R;
    double var = 0.0;
    for (double s : sums) {
      const double dlt = s / static_cast<double>(points) - mean;
      var += dlt * dlt;
    }
    var /= (R - 1);
    const double err = std::sqrt(var / R);
    const std::uint64_t evals = points * static_cast<std::uint64_t>(R);
    if (err <= std::max(o.absolute_error, o.target_error * std::fabs(mean))) {
      return {mean, err, evals, Method::kQuasiRandom};
    }
    if (evals * 2 > o.max_evaluations) {
      throw NonConvergence("quasi-random integration exhausted its evaluation budget", mean, err);
    }
    block = points;  // doubling keeps the Sobol prefix balanced
  }
}

}  // namespace

IntegralResult integrate_cutoff(const CompiledIntegrand& f, const IntegrationOptions& opts) {
  if (!(opts.target_error > 0.0)) throw InvalidArgument("target error must be positive");
  const int l = f.dimension();
  if (l == 0) {
    const std::vector<double> none;
    return {f(none), 0.0, 1, Method::kAdaptiveQuadrature};
  }
  if (f.leaves().empty()) return {0.0, 0.0, 0, Method::kAdaptiveQuadrature};
  Method method = opts.method;
  if (method == Method::kAuto) method = l <= 2 ? Method::kAdaptiveQuadrature : Method::kQuasiRandom;
  if (method == Method::kAdaptiveQuadrature) {
    if (l == 1) return integrate_one_loop(f, opts);
    if (l == 2) return integrate_two_loop(f, opts);
    throw InvalidArgument("adaptive quadrature supports at most two loops");
  }
  return integrate_quasi_random(f, opts);
}

}  // namespace fracphi
