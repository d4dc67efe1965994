#include "fracphi/enumerate.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "fracphi/error.hpp"
#include "fracphi/wick.hpp"

namespace fracphi {
namespace {

std::uint64_t factorial(int k) {
  std::uint64_t r = 1;
  for (int i = 2; i <= k; ++i) r *= static_cast<std::uint64_t>(i);
  return r;
}

void check_arguments(int n, int external_count) {
  if (n < 0 || external_count < 0) throw InvalidArgument("no diagrams: negative size");
  if (n > 9) throw InvalidArgument("no diagrams: order above 9 overflows contraction counts");
  if ((4 * n - external_count) % 2 != 0) throw InvalidArgument("no diagrams: parity");
  if (external_count > 4 * n) throw InvalidArgument("no diagrams: more legs than vertex slots");
}

bool connected_after_removal(const Diagram& d, std::size_t skip) {
  const int n = d.vertex_count();
  std::vector<int> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  int components = n;
  for (std::size_t i = 0; i < d.edges().size(); ++i) {
    if (i == skip) continue;
    const int a = find(d.edges()[i].u), b = find(d.edges()[i].v);
    if (a != b) {
      parent[a] = b;
      --components;
    }
  }
  return components == 1;
}

class Aggregator {
 public:
  Aggregator(const EnumerationOptions& opts) : opts_(opts) {}

  void add(const Diagram& d, std::uint64_t weight) {
    const CanonicalLabeling lab = canonical_labeling(d, opts_.legs);
    auto it = classes_.find(lab.form);
    if (it == classes_.end()) {
      classes_.emplace(lab.form, Entry{canonical_representative(d, opts_.legs), weight});
    } else {
      it->second.count += weight;
    }
  }

  std::vector<WeightedDiagram> finish() const {
    std::vector<WeightedDiagram> out;
    for (const auto& [form, entry] : classes_) {
      if (opts_.proper_only && !(entry.diagram.is_connected() && is_proper(entry.diagram))) continue;
      out.push_back({entry.diagram, form, entry.count});
    }
    return out;
  }

 private:
  struct Entry {
    Diagram diagram;
    std::uint64_t count;
  };
  EnumerationOptions opts_;
  std::map<CanonicalForm, Entry> classes_;
};

struct MultigraphGenerator {
  int n;
  int target_lines;
  bool allow_self_loops;
  std::vector<std::pair<int, int>> slots;  // (u, v) positions, u <= v
  std::vector<int> mult;
  std::vector<int> degree;

  template <class Visit>
  void run(std::size_t pos, int lines, Visit& visit) {
    if (pos == slots.size()) {
      if (lines == target_lines) visit(mult);
      return;
    }
    const auto [u, v] = slots[pos];
    const int cost = 2;  // a self-loop adds 2 to one vertex, an edge 1 to each of two
    for (int k = 0;; ++k) {
      if (lines + k > target_lines) break;
      if (u == v ? degree[u] + cost * k > 4 : (degree[u] + k > 4 || degree[v] + k > 4)) break;
      mult[pos] = k;
      if (u == v) {
        degree[u] += cost * k;
      } else {
        degree[u] += k;
        degree[v] += k;
      }
      run(pos + 1, lines + k, visit);
      if (u == v) {
        degree[u] -= cost * k;
      } else {
        degree[u] -= k;
        degree[v] -= k;
      }
    }
    mult[pos] = 0;
  }
};

}  // namespace

std::uint64_t vertex_relabelings(int n) {
  std::uint64_t r = factorial(n);
  for (int i = 0; i < n; ++i) r *= 24;
  return r;
}

Rational symmetry_factor(const WeightedDiagram& w) {
  return Rational(static_cast<std::int64_t>(w.contraction_count),
                  static_cast<std::int64_t>(vertex_relabelings(w.diagram.vertex_count())));
}

std::vector<WeightedDiagram> enumerate_diagrams(int n, int external_count,
                                                const EnumerationOptions& opts) {
  check_arguments(n, external_count);
  Aggregator agg(opts);
  if (n == 0) {
    if (external_count == 0) agg.add(Diagram(0, {}, {}), 1);
    return agg.finish();
  }

  MultigraphGenerator gen{n, (4 * n - external_count) / 2, !opts.normal_ordered, {}, {}, {}};
  for (int u = 0; u < n; ++u) {
    for (int v = u; v < n; ++v) {
      if (u == v && !gen.allow_self_loops) continue;
      gen.slots.emplace_back(u, v);
    }
  }
  gen.mult.assign(gen.slots.size(), 0);
  gen.degree.assign(static_cast<std::size_t>(n), 0);

  const std::uint64_t slot_ways = vertex_relabelings(n) / factorial(n);  // (4!)^n
  auto visit = [&](const std::vector<int>& mult) {
    std::vector<Edge> edges;
    std::uint64_t divisor = 1;
    for (std::size_t i = 0; i < mult.size(); ++i) {
      const auto [u, v] = gen.slots[i];
      for (int k = 0; k < mult[i]; ++k) edges.push_back({u, v});
      divisor *= factorial(mult[i]);
      if (u == v) divisor <<= mult[i];
    }
    std::vector<int> capacity(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v) capacity[v] = 4 - gen.degree[v];

    if (opts.connected_only) {
      std::vector<Leg> placeholder;
      int next = 1;
      for (int v = 0; v < n; ++v) {
        for (int c = 0; c < capacity[v]; ++c) placeholder.push_back({next++, v});
      }
      if (!Diagram(n, edges, placeholder).is_connected()) return;
    }
    const std::uint64_t weight = slot_ways / divisor;

    if (opts.legs == LegLabels::kCollapsed) {
      std::vector<Leg> legs;
      std::uint64_t label_ways = factorial(external_count);
      int next = 1;
      for (int v = 0; v < n; ++v) {
        label_ways /= factorial(capacity[v]);
        for (int c = 0; c < capacity[v]; ++c) legs.push_back({next++, v});
      }
      agg.add(Diagram(n, edges, std::move(legs)), weight * label_ways);
      return;
    }

    // distinct legs: every assignment of external indices to free slots
    std::vector<Leg> legs(static_cast<std::size_t>(external_count));
    auto assign = [&](auto&& self, int ext) -> void {
      if (ext > external_count) {
        agg.add(Diagram(n, edges, legs), weight);
        return;
      }
      for (int v = 0; v < n; ++v) {
        if (capacity[v] == 0) continue;
        --capacity[v];
        legs[ext - 1] = {ext, v};
        self(self, ext + 1);
        ++capacity[v];
      }
    };
    assign(assign, 1);
  };
  gen.run(0, 0, visit);
  return agg.finish();
}

std::vector<WeightedDiagram> enumerate_by_contraction(int n, int external_count,
                                                      const EnumerationOptions& opts) {
  check_arguments(n, external_count);
  Aggregator agg(opts);
  const std::vector<FieldLabel> labels = wick_labels(n, external_count);
  // Many contractions share a vertex-labeled diagram; canonicalize each once.
  std::map<std::pair<std::vector<Edge>, std::vector<Leg>>, std::uint64_t> raw;
  for_each_pairing(labels, PairingOptions{opts.normal_ordered}, [&](const Matching& m) {
    auto d = diagram_from_matching(labels, m, n);
    if (!d) return;
    if (opts.connected_only && !d->is_connected()) return;
    ++raw[{d->edges(), d->legs()}];
  });
  for (const auto& [key, count] : raw) agg.add(Diagram(n, key.first, key.second), count);
  return agg.finish();
}

bool is_proper(const Diagram& d) {
  if (!d.is_connected()) throw InvalidArgument("diagram not connected");
  for (std::size_t i = 0; i < d.edges().size(); ++i) {
    if (!connected_after_removal(d, i)) return false;
  }
  return true;
}

int loop_count(const Diagram& d) {
  if (!d.is_connected()) throw InvalidArgument("diagram not connected");
  return d.line_count() - d.vertex_count() + 1;
}

}  // namespace fracphi
