#include "fracphi/integrand.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "fracphi/error.hpp"

namespace fracphi {

void PropagatorSpec::validate() const {
  if (!(m > 0.0) || !std::isfinite(m)) throw InvalidArgument("mass must be positive");
  if (!(kappa > 0.0) || !std::isfinite(kappa)) throw InvalidArgument("cutoff must be positive");
}

double line_factor(double q, double two_alpha, double m) {
  const double a = std::fabs(q);
  const double num = two_alpha == 0.0 ? 1.0 : (a == 0.0 ? 0.0 : std::pow(a, two_alpha));
  return num / (q * q + m * m);
}

double integrand_value(const MomentumRouting& r, const PropagatorSpec& spec,
                       std::span<const double> loop_point, std::span<const double> ext) {
  if (loop_point.size() != static_cast<std::size_t>(r.loops)) {
    throw InvalidArgument("loop point dimension does not match loop count");
  }
  if (ext.size() < static_cast<std::size_t>(r.externals)) {
    throw InvalidArgument("missing external momenta");
  }
  const double two_alpha = to_double(spec.alpha.two_alpha());
  if (spec.geometry == CutoffGeometry::kBox) {
    for (double k : loop_point) {
      if (std::fabs(k) > spec.kappa) return 0.0;
    }
  }
  double value = 1.0;
  for (const auto& line : r.lines) {
    const double q = line.evaluate(loop_point, ext);
    if (spec.geometry == CutoffGeometry::kPerLine && std::fabs(q) > spec.kappa) return 0.0;
    value *= line_factor(q, two_alpha, spec.m);
  }
  return value;
}

namespace {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Matrix as_matrix(const AffineLeaf& leaf, int lines, int loops) {
  Matrix m(lines, loops);
  for (int j = 0; j < lines; ++j) {
    for (int i = 0; i < loops; ++i) m(j, i) = leaf.matrix[static_cast<std::size_t>(j * loops + i)];
  }
  return m;
}

bool same_map(const AffineLeaf& a, const AffineLeaf& b) {
  constexpr double kTol = 1e-13;
  for (std::size_t i = 0; i < a.matrix.size(); ++i) {
    if (std::fabs(a.matrix[i] - b.matrix[i]) > kTol) return false;
  }
  for (std::size_t j = 0; j < a.offset.size(); ++j) {
    if (std::fabs(a.offset[j] - b.offset[j]) > kTol * (1.0 + std::fabs(a.offset[j]))) return false;
  }
  return true;
}

std::vector<AffineLeaf> merge_leaves(std::vector<AffineLeaf> leaves) {
  std::vector<AffineLeaf> out;
  for (auto& leaf : leaves) {
    auto it = std::find_if(out.begin(), out.end(), [&](const AffineLeaf& o) { return same_map(o, leaf); });
    if (it == out.end()) {
      out.push_back(std::move(leaf));
    } else {
      it->weight += leaf.weight;
    }
  }
  std::erase_if(out, [](const AffineLeaf& l) { return std::fabs(l.weight) < 1e-14; });
  return out;
}

struct Stencil {
  double s;
  double w;
};

// Taylor polynomial of g(s) about 0 up to `order`, evaluated at s = 1.
std::vector<Stencil> taylor_stencil(int order) {
  constexpr double h = 1e-2;
  switch (order) {
    case 0: return {{0.0, 1.0}};
    case 1: return {{0.0, 1.0}, {h, 0.5 / h}, {-h, -0.5 / h}};
    case 2:
      return {{0.0, 1.0 - 1.0 / (h * h)},
              {h, 0.5 / h + 0.5 / (h * h)},
              {-h, -0.5 / h + 0.5 / (h * h)}};
    default: throw InvalidArgument("Taylor subtraction above order 2 is not supported");
  }
}

}  // namespace

CompiledIntegrand::CompiledIntegrand(PropagatorSpec spec, int lines, int loops,
                                     std::vector<AffineLeaf> leaves)
    : spec_(spec),
      lines_(lines),
      loops_(loops),
      two_alpha_(to_double(spec.alpha.two_alpha())),
      leaves_(merge_leaves(std::move(leaves))) {
  spec_.validate();
  lower_.assign(static_cast<std::size_t>(loops_), 0.0);
  upper_.assign(static_cast<std::size_t>(loops_), 0.0);
  if (spec_.geometry == CutoffGeometry::kBox) {
    std::fill(lower_.begin(), lower_.end(), -spec_.kappa);
    std::fill(upper_.begin(), upper_.end(), spec_.kappa);
    return;
  }
  if (loops_ == 0) return;
  bool first = true;
  for (const auto& leaf : leaves_) {
    const Matrix m = as_matrix(leaf, lines_, loops_);
    Eigen::FullPivLU<Matrix> lu(m);
    if (lu.rank() < loops_) throw std::logic_error("integrand support is unbounded");
    const Matrix pinv = m.completeOrthogonalDecomposition().pseudoInverse();
    Eigen::VectorXd off(lines_);
    for (int j = 0; j < lines_; ++j) off(j) = leaf.offset[static_cast<std::size_t>(j)];
    const Eigen::VectorXd centre = -(pinv * off);
    for (int i = 0; i < loops_; ++i) {
      const double half = spec_.kappa * pinv.row(i).cwiseAbs().sum() * (1.0 + 1e-12);
      const double lo = centre(i) - half, hi = centre(i) + half;
      lower_[i] = first ? lo : std::min(lower_[i], lo);
      upper_[i] = first ? hi : std::max(upper_[i], hi);
    }
    first = false;
  }
}

double CompiledIntegrand::operator()(std::span<const double> k) const {
  const bool per_line = spec_.geometry == CutoffGeometry::kPerLine;
  if (!per_line) {
    for (double x : k) {
      if (std::fabs(x) > spec_.kappa) return 0.0;
    }
  }
  double total = 0.0;
  for (const auto& leaf : leaves_) {
    double value = leaf.weight;
    const double* row = leaf.matrix.data();
    for (int j = 0; j < lines_; ++j, row += loops_) {
      double q = leaf.offset[static_cast<std::size_t>(j)];
      for (int i = 0; i < loops_; ++i) q += row[i] * k[static_cast<std::size_t>(i)];
      if (per_line && std::fabs(q) > spec_.kappa) {
        value = 0.0;
        break;
      }
      value *= line_factor(q, two_alpha_, spec_.m);
    }
    total += value;
  }
  return total;
}

namespace {

AffineLeaf bare_leaf(const MomentumRouting& r, std::span<const double> ext) {
  if (ext.size() < static_cast<std::size_t>(r.externals)) {
    throw InvalidArgument("missing external momenta");
  }
  AffineLeaf leaf;
  const int L = static_cast<int>(r.lines.size());
  leaf.matrix.resize(static_cast<std::size_t>(L * r.loops));
  leaf.offset.resize(static_cast<std::size_t>(L));
  for (int j = 0; j < L; ++j) {
    for (int i = 0; i < r.loops; ++i) {
      leaf.matrix[static_cast<std::size_t>(j * r.loops + i)] = r.lines[j].loop[i];
    }
    double o = 0.0;
    for (int s = 0; s < r.externals; ++s) o += r.lines[j].external[s] * ext[s];
    leaf.offset[j] = o;
  }
  return leaf;
}

}  // namespace

CompiledIntegrand compile_bare(const MomentumRouting& r, const PropagatorSpec& spec,
                               std::span<const double> ext) {
  return CompiledIntegrand(spec, static_cast<int>(r.lines.size()), r.loops, {bare_leaf(r, ext)});
}

std::vector<double> cycle_projector(const MomentumRouting& r, std::span<const int> lines) {
  std::vector<int> vertices;
  for (int j : lines) {
    vertices.push_back(r.orientation[j].u);
    vertices.push_back(r.orientation[j].v);
  }
  std::sort(vertices.begin(), vertices.end());
  vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());
  const int nv = static_cast<int>(vertices.size());
  const int nl = static_cast<int>(lines.size());
  Matrix incidence = Matrix::Zero(nv, nl);
  for (int c = 0; c < nl; ++c) {
    const Edge& e = r.orientation[lines[c]];
    if (e.u == e.v) continue;
    const auto row = [&](int v) {
      return static_cast<int>(std::lower_bound(vertices.begin(), vertices.end(), v) - vertices.begin());
    };
    incidence(row(e.u), c) -= 1.0;
    incidence(row(e.v), c) += 1.0;
  }
  const Matrix laplacian = incidence * incidence.transpose();
  const Matrix lap_pinv = laplacian.completeOrthogonalDecomposition().pseudoInverse();
  const Matrix proj = Matrix::Identity(nl, nl) - incidence.transpose() * lap_pinv * incidence;
  return std::vector<double>(proj.data(), proj.data() + proj.size());
}

CompiledIntegrand compile_renormalized(const RenormalizedIntegrand& ri, const MomentumRouting& r,
                                       const PropagatorSpec& spec, std::span<const double> ext) {
  const int L = static_cast<int>(r.lines.size());
  const int l = r.loops;
  const AffineLeaf bare = bare_leaf(r, ext);
  std::vector<AffineLeaf> leaves;
  for (const auto& term : ri.terms) {
    std::vector<AffineLeaf> current{bare};
    current.front().weight = term.sign;
    for (const auto& sub : term.subtractions) {
      std::vector<int> lines;
      for (int j = 0; j < L; ++j) {
        if (sub.part.lines >> j & 1u) lines.push_back(j);
      }
      const int s = static_cast<int>(lines.size());
      const std::vector<double> proj = cycle_projector(r, lines);
      std::vector<AffineLeaf> next;
      for (const auto& leaf : current) {
        for (const auto& st : taylor_stencil(sub.order)) {
          // rows of the part: (P + s (I - P)) applied to the current map
          AffineLeaf out = leaf;
          out.weight *= st.w;
          for (int a = 0; a < s; ++a) {
            const int ja = lines[a];
            for (int i = 0; i < l; ++i) {
              double acc = 0.0;
              for (int b = 0; b < s; ++b) {
                const double pab = proj[static_cast<std::size_t>(a * s + b)];
                const double t = (1.0 - st.s) * pab + (a == b ? st.s : 0.0);
                acc += t * leaf.matrix[static_cast<std::size_t>(lines[b] * l + i)];
              }
              out.matrix[static_cast<std::size_t>(ja * l + i)] = acc;
            }
            double acc = 0.0;
            for (int b = 0; b < s; ++b) {
              const double pab = proj[static_cast<std::size_t>(a * s + b)];
              const double t = (1.0 - st.s) * pab + (a == b ? st.s : 0.0);
              acc += t * leaf.offset[static_cast<std::size_t>(lines[b])];
            }
            out.offset[static_cast<std::size_t>(ja)] = acc;
          }
          next.push_back(std::move(out));
        }
      }
      current = std::move(next);
    }
    leaves.insert(leaves.end(), current.begin(), current.end());
  }
  return CompiledIntegrand(spec, L, l, std::move(leaves));
}

}  // namespace fracphi
