#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <vector>

#include "fracphi/diagram.hpp"
#include "fracphi/rational.hpp"

namespace oracle {

/// Slot-level multigraph built from one brute-force matching.
struct Contraction {
  int n = 0;
  std::vector<std::pair<int, int>> lines;  // vertex pairs
  std::vector<std::pair<int, int>> legs;   // (external, vertex), external 1-based
};

inline bool connected(const Contraction& c) {
  if (c.n == 0) return true;
  std::vector<int> parent(static_cast<std::size_t>(c.n));
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
  for (auto [u, v] : c.lines) parent[find(u)] = find(v);
  for (int v = 0; v < c.n; ++v) {
    if (find(v) != find(0)) return false;
  }
  return true;
}

/// Visits every perfect matching of E externals and 4n vertex slots. Slots of
/// one vertex never pair when normal ordered; two externals never pair.
inline void for_each_contraction(int n, int E, bool normal_ordered,
                                 const std::function<void(const Contraction&)>& visit) {
  const int total = E + 4 * n;
  auto vertex_of = [&](int i) { return i < E ? -1 : (i - E) / 4; };
  std::vector<int> partner(static_cast<std::size_t>(total), -1);
  std::function<void()> rec = [&] {
    int first = -1;
    for (int i = 0; i < total; ++i) {
      if (partner[i] < 0) {
        first = i;
        break;
      }
    }
    if (first < 0) {
      Contraction c;
      c.n = n;
      for (int i = 0; i < total; ++i) {
        const int j = partner[i];
        if (j < i) continue;
        if (i < E) {
          c.legs.emplace_back(i + 1, vertex_of(j));
        } else {
          c.lines.emplace_back(vertex_of(i), vertex_of(j));
        }
      }
      visit(c);
      return;
    }
    for (int j = first + 1; j < total; ++j) {
      if (partner[j] >= 0) continue;
      if (first < E && j < E) continue;
      if (normal_ordered && first >= E && vertex_of(first) == vertex_of(j)) continue;
      partner[first] = j;
      partner[j] = first;
      rec();
      partner[first] = partner[j] = -1;
    }
  };
  if (total % 2 == 0) rec();
}

inline std::uint64_t count_contractions(int n, int E, bool normal_ordered, bool connected_only) {
  std::uint64_t count = 0;
  for_each_contraction(n, E, normal_ordered, [&](const Contraction& c) {
    if (!connected_only || connected(c)) ++count;
  });
  return count;
}

inline std::uint64_t factorial(int k) {
  std::uint64_t f = 1;
  for (int i = 2; i <= k; ++i) f *= static_cast<std::uint64_t>(i);
  return f;
}

/// |Aut| by trying every vertex permutation, times the line and self-loop
/// permutations that fix every vertex.
inline std::uint64_t automorphisms(const fracphi::Diagram& d) {
  const int n = d.vertex_count();
  std::map<std::pair<int, int>, int> mult;
  for (const auto& e : d.edges()) ++mult[{std::min(e.u, e.v), std::max(e.u, e.v)}];
  std::vector<int> p(static_cast<std::size_t>(n));
  std::iota(p.begin(), p.end(), 0);
  std::uint64_t vertex_maps = 0;
  do {
    bool ok = true;
    for (const auto& l : d.legs()) ok = ok && p[l.vertex] == l.vertex;
    for (const auto& [uv, a] : mult) {
      const int u = p[uv.first], v = p[uv.second];
      const auto it = mult.find({std::min(u, v), std::max(u, v)});
      ok = ok && it != mult.end() && it->second == a;
    }
    if (ok) ++vertex_maps;
  } while (std::next_permutation(p.begin(), p.end()));

  std::uint64_t fixed = 1;
  for (const auto& [uv, a] : mult) {
    fixed *= factorial(a);
    if (uv.first == uv.second) fixed *= std::uint64_t{1} << a;
  }
  return vertex_maps * fixed;
}

struct Part {
  std::uint32_t lines = 0;
  int n = 0;
  int L = 0;
  fracphi::Rational degree;
};

/// Proper (connected, bridgeless) line subsets with D >= 0, by scanning every mask.
inline std::vector<Part> renormalization_parts(const fracphi::Diagram& d, const fracphi::Rational& alpha) {
  const auto& edges = d.edges();
  const int L = static_cast<int>(edges.size());
  auto connected_lines = [&](std::uint32_t mask, int skip) {
    std::vector<int> parent(static_cast<std::size_t>(d.vertex_count()));
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
    std::vector<bool> touched(static_cast<std::size_t>(d.vertex_count()), false);
    for (int j = 0; j < L; ++j) {
      if (!(mask >> j & 1u)) continue;
      touched[edges[j].u] = touched[edges[j].v] = true;
      if (j != skip) parent[find(edges[j].u)] = find(edges[j].v);
    }
    int root = -1;
    for (int v = 0; v < d.vertex_count(); ++v) {
      if (!touched[v]) continue;
      if (root < 0) root = find(v);
      if (find(v) != root) return false;
    }
    return true;
  };
  std::vector<Part> parts;
  for (std::uint32_t mask = 1; mask < (1u << L); ++mask) {
    if (!connected_lines(mask, -1)) continue;
    bool bridgeless = true;
    for (int j = 0; j < L && bridgeless; ++j) {
      if (mask >> j & 1u) bridgeless = connected_lines(mask, j);
    }
    if (!bridgeless) continue;
    std::vector<bool> touched(static_cast<std::size_t>(d.vertex_count()), false);
    Part p;
    p.lines = mask;
    for (int j = 0; j < L; ++j) {
      if (mask >> j & 1u) {
        touched[edges[j].u] = touched[edges[j].v] = true;
        ++p.L;
      }
    }
    p.n = static_cast<int>(std::count(touched.begin(), touched.end(), true));
    p.degree = (alpha * 2 - 1) * p.L - p.n + 1;
    if (p.degree >= fracphi::Rational(0)) parts.push_back(p);
  }
  return parts;
}

/// Subsets of the parts whose members are pairwise disjoint or nested.
inline std::size_t forest_count(const std::vector<Part>& parts) {
  std::size_t count = 0;
  const std::size_t k = parts.size();
  for (std::uint64_t s = 0; s < (std::uint64_t{1} << k); ++s) {
    bool ok = true;
    for (std::size_t a = 0; a < k && ok; ++a) {
      for (std::size_t b = a + 1; b < k && ok; ++b) {
        if (!(s >> a & 1u) || !(s >> b & 1u)) continue;
        const std::uint32_t x = parts[a].lines, y = parts[b].lines;
        ok = (x & y) == 0 || (x & y) == x || (x & y) == y;
      }
    }
    if (ok) ++count;
  }
  return count;
}

/// Uniform random permutation of 0..n-1.
inline std::vector<int> random_permutation(int n, std::mt19937_64& rng) {
  std::vector<int> p(static_cast<std::size_t>(n));
  std::iota(p.begin(), p.end(), 0);
  std::shuffle(p.begin(), p.end(), rng);
  return p;
}

inline fracphi::Diagram to_diagram(const Contraction& c) {
  std::vector<fracphi::Edge> edges;
  for (auto [u, v] : c.lines) edges.push_back({std::min(u, v), std::max(u, v)});
  std::vector<fracphi::Leg> legs;
  for (auto [e, v] : c.legs) legs.push_back({e, v});
  return fracphi::Diagram(c.n, edges, legs);
}

/// A random normal-ordered connected contraction of n vertices and E legs.
inline fracphi::Diagram random_diagram(int n, int E, std::mt19937_64& rng) {
  const int total = E + 4 * n;
  std::vector<int> slots(static_cast<std::size_t>(total));
  std::iota(slots.begin(), slots.end(), 0);
  auto vertex_of = [&](int i) { return i < E ? -1 : (i - E) / 4; };
  for (;;) {
    std::shuffle(slots.begin(), slots.end(), rng);
    Contraction c;
    c.n = n;
    bool ok = true;
    for (int i = 0; i < total && ok; i += 2) {
      int a = slots[i], b = slots[i + 1];
      if (a > b) std::swap(a, b);
      if (b < E || (a >= E && vertex_of(a) == vertex_of(b))) ok = false;
      if (a < E) {
        c.legs.emplace_back(a + 1, vertex_of(b));
      } else {
        c.lines.emplace_back(vertex_of(a), vertex_of(b));
      }
    }
    if (ok && connected(c)) return to_diagram(c);
  }
}

}  // namespace oracle
