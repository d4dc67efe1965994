#include "fracphi/power_counting.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

#include "fracphi/error.hpp"

namespace fracphi {

Rational degree_of(int n, int lines, const Alpha& alpha) {
  return (alpha.two_alpha() - 1) * lines - n + 1;
}

Rational degree(const Diagram& d, const Alpha& alpha) {
  if (!d.is_connected() || !is_proper(d)) {
    throw InvalidArgument("power counting defined for proper diagrams");
  }
  const int n = d.vertex_count();
  const int L = d.line_count();
  const Rational primary = degree_of(n, L, alpha);
  const Rational via_loops = (alpha.two_alpha() - 2) * L + loop_count(d);
  if (primary != via_loops) throw std::logic_error("degree: the two forms disagree");
  return primary;
}

Rational threshold_alpha(const Diagram& d) {
  if (!d.is_connected() || !is_proper(d)) {
    throw InvalidArgument("power counting defined for proper diagrams");
  }
  if (d.line_count() == 0) throw InvalidArgument("no internal lines");
  return Rational(d.vertex_count() - 1 + d.line_count(), 2 * d.line_count());
}

PowerCountReport power_count(const Diagram& d, const Alpha& alpha) {
  PowerCountReport r;
  r.n = d.vertex_count();
  r.L = d.line_count();
  r.E = d.leg_count();
  r.l = loop_count(d);
  r.alpha = alpha;
  r.degree = degree(d, alpha);
  r.divergent = r.degree >= 0;
  if (r.L > 0) r.threshold_alpha = threshold_alpha(d);
  return r;
}

Regime regime_for(const Alpha& alpha) {
  const Rational& a = alpha.value();
  if (a < Rational(5, 8)) return Regime::kFinite;
  if (a < Rational(3, 4)) return Regime::kSuperRenormalizable;
  if (a == Rational(3, 4)) return Regime::kRenormalizable;
  return Regime::kNonRenormalizable;
}

std::string to_string(Regime r) {
  switch (r) {
    case Regime::kFinite: return "finite";
    case Regime::kSuperRenormalizable: return "superRenormalizable";
    case Regime::kRenormalizable: return "renormalizable";
    case Regime::kNonRenormalizable: return "nonRenormalizable";
  }
  return "unknown";
}

Rational degree(const Subdiagram& s, const Alpha& alpha) { return degree_of(s.n, s.L, alpha); }

namespace {

bool subset_is_proper(const Diagram& d, std::uint32_t mask, const std::vector<int>& vertices) {
  const int k = static_cast<int>(vertices.size());
  std::vector<int> local(static_cast<std::size_t>(d.vertex_count()), -1);
  for (int i = 0; i < k; ++i) local[vertices[i]] = i;
  auto connected_without = [&](int skip) {
    std::vector<int> parent(static_cast<std::size_t>(k));
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    int components = k;
    for (int i = 0; i < d.line_count(); ++i) {
      if (!(mask >> i & 1u) || i == skip) continue;
      const int a = find(local[d.edges()[i].u]), b = find(local[d.edges()[i].v]);
      if (a != b) {
        parent[a] = b;
        --components;
      }
    }
    return components == 1;
  };
  if (!connected_without(-1)) return false;
  for (int i = 0; i < d.line_count(); ++i) {
    if ((mask >> i & 1u) && !connected_without(i)) return false;
  }
  return true;
}

}  // namespace

std::vector<Subdiagram> proper_subdiagrams(const Diagram& d) {
  const int L = d.line_count();
  if (L > 24) throw InvalidArgument("subdiagram scan limited to 24 lines");
  std::vector<Subdiagram> out;
  for (std::uint32_t mask = 1; mask < (1u << L); ++mask) {
    std::vector<int> vertices;
    for (int i = 0; i < L; ++i) {
      if (!(mask >> i & 1u)) continue;
      vertices.push_back(d.edges()[i].u);
      vertices.push_back(d.edges()[i].v);
    }
    std::sort(vertices.begin(), vertices.end());
    vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());
    if (!subset_is_proper(d, mask, vertices)) continue;
    Subdiagram s;
    s.lines = mask;
    s.vertices = std::move(vertices);
    s.n = static_cast<int>(s.vertices.size());
    s.L = std::popcount(mask);
    s.E = 4 * s.n - 2 * s.L;
    out.push_back(std::move(s));
  }
  std::sort(out.begin(), out.end(), [](const Subdiagram& a, const Subdiagram& b) {
    return a.L != b.L ? a.L < b.L : a.lines < b.lines;
  });
  return out;
}

std::vector<Subdiagram> renormalization_parts(const Diagram& d, const Alpha& alpha) {
  std::vector<Subdiagram> out;
  for (auto& s : proper_subdiagrams(d)) {
    if (degree(s, alpha) >= 0) out.push_back(std::move(s));
  }
  return out;
}

TopologyCatalog::TopologyCatalog(int max_order) : max_order_(max_order) {
  if (max_order < 2) throw InvalidArgument("classification needs max order >= 2");
  by_order_.resize(static_cast<std::size_t>(max_order + 1));
  EnumerationOptions opts;
  opts.normal_ordered = true;
  opts.proper_only = true;
  opts.connected_only = true;
  opts.legs = LegLabels::kCollapsed;
  for (int n = 2; n <= max_order; ++n) {
    for (int e = 0; e <= 4 * n; e += 2) {
      auto part = enumerate_diagrams(n, e, opts);
      by_order_[n].insert(by_order_[n].end(), part.begin(), part.end());
    }
  }
}

const std::vector<WeightedDiagram>& TopologyCatalog::at_order(int n) const {
  if (n < 2 || n > max_order_) throw InvalidArgument("order outside catalog");
  return by_order_[static_cast<std::size_t>(n)];
}

ClassificationTable classify(const Alpha& alpha, const TopologyCatalog& catalog, int max_order) {
  if (max_order < 2) throw InvalidArgument("classification needs max order >= 2");
  if (max_order > catalog.max_order()) throw InvalidArgument("catalog too small for max order");
  ClassificationTable table;
  table.alpha = alpha;
  table.max_order = max_order;
  table.regime = regime_for(alpha);
  for (int n = 2; n <= max_order; ++n) {
    for (const auto& w : catalog.at_order(n)) {
      const Rational D = degree_of(n, w.diagram.line_count(), alpha);
      if (D < 0) continue;
      table.divergent.push_back({w.diagram, w.form, power_count(w.diagram, alpha)});
    }
  }
  std::sort(table.divergent.begin(), table.divergent.end(),
            [](const ClassifiedDiagram& a, const ClassifiedDiagram& b) {
              if (a.report.n != b.report.n) return a.report.n < b.report.n;
              if (a.report.E != b.report.E) return a.report.E < b.report.E;
              return a.form < b.form;
            });
  return table;
}

ClassificationTable classify(const Alpha& alpha, int max_order) {
  return classify(alpha, TopologyCatalog(max_order), max_order);
}

}  // namespace fracphi
