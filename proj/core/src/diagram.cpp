#include "fracphi/diagram.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "fracphi/error.hpp"

namespace fracphi {

std::vector<FieldLabel> wick_labels(int n, int external_count) {
  std::vector<FieldLabel> labels;
  labels.reserve(static_cast<std::size_t>(external_count + 4 * n));
  for (int i = 1; i <= external_count; ++i) labels.push_back(FieldLabel::external(i));
  for (int v = 0; v < n; ++v) {
    for (int s = 0; s < 4; ++s) labels.push_back(FieldLabel::vertex_slot(v, s));
  }
  return labels;
}

Diagram::Diagram(int n, std::vector<Edge> edges, std::vector<Leg> legs)
    : n_(n), edges_(std::move(edges)), legs_(std::move(legs)) {
  if (n_ < 0) throw InvalidArgument("diagram: negative vertex count");
  for (auto& e : edges_) {
    if (e.u < 0 || e.v < 0 || e.u >= n_ || e.v >= n_) {
      throw InvalidArgument("diagram: edge endpoint out of range");
    }
    if (e.u > e.v) std::swap(e.u, e.v);
  }
  std::sort(edges_.begin(), edges_.end());
  std::sort(legs_.begin(), legs_.end(),
            [](const Leg& a, const Leg& b) { return a.external < b.external; });
  for (std::size_t i = 0; i < legs_.size(); ++i) {
    if (legs_[i].external != static_cast<int>(i) + 1) {
      throw InvalidArgument("diagram: external indices must be 1..E without repeats");
    }
    if (legs_[i].vertex < 0 || legs_[i].vertex >= n_) {
      throw InvalidArgument("diagram: leg attached to missing vertex");
    }
  }
  for (int v = 0; v < n_; ++v) {
    if (line_degree(v) + legs_at(v) != 4) {
      throw InvalidArgument("diagram: vertex " + std::to_string(v) + " has degree " +
                            std::to_string(line_degree(v) + legs_at(v)) + ", expected 4");
    }
  }
}

int Diagram::line_degree(int v) const {
  int d = 0;
  for (const auto& e : edges_) d += (e.u == v) + (e.v == v);
  return d;
}

int Diagram::legs_at(int v) const {
  return static_cast<int>(
      std::count_if(legs_.begin(), legs_.end(), [v](const Leg& l) { return l.vertex == v; }));
}

std::vector<int> Diagram::multiplicity_matrix() const {
  std::vector<int> a(static_cast<std::size_t>(n_ * n_), 0);
  for (const auto& e : edges_) {
    if (e.u == e.v) {
      ++a[static_cast<std::size_t>(e.u * n_ + e.u)];
    } else {
      ++a[static_cast<std::size_t>(e.u * n_ + e.v)];
      ++a[static_cast<std::size_t>(e.v * n_ + e.u)];
    }
  }
  return a;
}

bool Diagram::has_self_loop() const {
  return std::any_of(edges_.begin(), edges_.end(), [](const Edge& e) { return e.u == e.v; });
}

bool Diagram::is_connected() const {
  if (n_ <= 1) return true;
  std::vector<int> parent(static_cast<std::size_t>(n_));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  int components = n_;
  for (const auto& e : edges_) {
    const int a = find(e.u), b = find(e.v);
    if (a != b) {
      parent[a] = b;
      --components;
    }
  }
  return components == 1;
}

Diagram relabel(const Diagram& d, std::span<const int> old_to_new) {
  std::vector<Edge> edges;
  edges.reserve(d.edges().size());
  for (const auto& e : d.edges()) edges.push_back({old_to_new[e.u], old_to_new[e.v]});
  std::vector<Leg> legs;
  legs.reserve(d.legs().size());
  for (const auto& l : d.legs()) legs.push_back({l.external, old_to_new[l.vertex]});
  return Diagram(d.vertex_count(), std::move(edges), std::move(legs));
}

namespace catalog {

Diagram tree_vertex() { return Diagram(1, {}, {{1, 0}, {2, 0}, {3, 0}, {4, 0}}); }

Diagram fish() { return Diagram(2, {{0, 1}, {0, 1}}, {{1, 0}, {2, 0}, {3, 1}, {4, 1}}); }

Diagram sunset() { return Diagram(2, {{0, 1}, {0, 1}, {0, 1}}, {{1, 0}, {2, 1}}); }

Diagram nut() { return Diagram(2, {{0, 1}, {0, 1}, {0, 1}, {0, 1}}, {}); }

Diagram vacuum_triangle() {
  return Diagram(3, {{0, 1}, {0, 1}, {0, 2}, {0, 2}, {1, 2}, {1, 2}}, {});
}

}  // namespace catalog

std::string describe(const Diagram& d) {
  std::ostringstream os;
  os << "n=" << d.vertex_count() << " L=" << d.line_count() << " E=" << d.leg_count()
     << " edges=[";
  for (std::size_t i = 0; i < d.edges().size(); ++i) {
    os << (i ? "," : "") << d.edges()[i].u << "-" << d.edges()[i].v;
  }
  os << "] legs=[";
  for (std::size_t i = 0; i < d.legs().size(); ++i) {
    os << (i ? "," : "") << d.legs()[i].external << "@" << d.legs()[i].vertex;
  }
  os << "]";
  return os.str();
}

}  // namespace fracphi
