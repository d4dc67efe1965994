#include "fracphi/canonical.hpp"

#include <algorithm>
#include <map>

namespace fracphi {

std::string CanonicalForm::hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string s;
  s.reserve(certificate.size() * 2);
  for (std::uint8_t b : certificate) {
    s.push_back(kDigits[b >> 4]);
    s.push_back(kDigits[b & 0xF]);
  }
  return s;
}

namespace {

struct Search {
  int n = 0;
  LegLabels mode = LegLabels::kDistinct;
  std::vector<int> adj;                     // n*n multiplicities
  std::vector<std::vector<int>> leg_sets;   // external indices per vertex
  const Diagram* diagram = nullptr;

  std::vector<std::uint8_t> best;
  std::vector<int> best_perm;
  std::uint64_t ties = 0;

  int a(int u, int v) const { return adj[static_cast<std::size_t>(u * n + v)]; }

  std::vector<int> initial_colors() const {
    std::vector<std::vector<int>> sig(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v) {
      if (mode == LegLabels::kDistinct) {
        sig[v] = leg_sets[v];
        sig[v].insert(sig[v].begin(), static_cast<int>(leg_sets[v].size()));
      } else {
        sig[v] = {static_cast<int>(leg_sets[v].size())};
      }
      sig[v].push_back(a(v, v));
    }
    return rank(sig);
  }

  static std::vector<int> rank(const std::vector<std::vector<int>>& sig) {
    std::vector<std::vector<int>> sorted = sig;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    std::vector<int> colors(sig.size());
    for (std::size_t v = 0; v < sig.size(); ++v) {
      colors[v] = static_cast<int>(std::lower_bound(sorted.begin(), sorted.end(), sig[v]) - sorted.begin());
    }
    return colors;
  }

  static int distinct(const std::vector<int>& c) {
    return c.empty() ? 0 : *std::max_element(c.begin(), c.end()) + 1;
  }

  std::vector<int> refine(std::vector<int> colors) const {
    int cells = distinct(colors);
    for (;;) {
      std::vector<std::vector<int>> sig(static_cast<std::size_t>(n));
      for (int v = 0; v < n; ++v) {
        std::vector<std::pair<int, int>> nb;
        for (int u = 0; u < n; ++u) {
          if (u != v && a(v, u) > 0) nb.emplace_back(colors[u], a(v, u));
        }
        std::sort(nb.begin(), nb.end());
        sig[v].push_back(colors[v]);
        for (auto [c, m] : nb) {
          sig[v].push_back(c);
          sig[v].push_back(m);
        }
      }
      std::vector<int> next = rank(sig);
      const int next_cells = distinct(next);
      if (next_cells == cells) return colors;
      colors = std::move(next);
      cells = next_cells;
    }
  }

  std::vector<std::uint8_t> encode(const std::vector<int>& perm) const {
    std::vector<int> inv(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v) inv[perm[v]] = v;
    std::vector<std::uint8_t> out;
    out.push_back(static_cast<std::uint8_t>(n));
    out.push_back(static_cast<std::uint8_t>(diagram->leg_count()));
    out.push_back(static_cast<std::uint8_t>(mode));
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) out.push_back(static_cast<std::uint8_t>(a(inv[i], inv[j])));
    }
    if (mode == LegLabels::kDistinct) {
      for (const auto& leg : diagram->legs()) out.push_back(static_cast<std::uint8_t>(perm[leg.vertex]));
    } else {
      for (int i = 0; i < n; ++i) out.push_back(static_cast<std::uint8_t>(leg_sets[inv[i]].size()));
    }
    return out;
  }

  void run(std::vector<int> colors) {
    colors = refine(std::move(colors));
    const int cells = distinct(colors);
    if (cells == n) {
      std::vector<std::uint8_t> code = encode(colors);
      if (best.empty() || code < best) {
        best = std::move(code);
        best_perm = colors;
        ties = 1;
      } else if (code == best) {
        ++ties;
      }
      return;
    }
    // first non-singleton cell, smallest colour
    std::vector<int> count(static_cast<std::size_t>(cells), 0);
    for (int c : colors) ++count[c];
    int target = 0;
    while (count[target] < 2) ++target;
    for (int v = 0; v < n; ++v) {
      if (colors[v] != target) continue;
      std::vector<int> child(static_cast<std::size_t>(n));
      for (int w = 0; w < n; ++w) child[w] = 2 * colors[w] + 1;
      child[v] = 2 * colors[v];
      std::vector<std::vector<int>> sig(static_cast<std::size_t>(n));
      for (int w = 0; w < n; ++w) sig[w] = {child[w]};
      run(rank(sig));
    }
  }
};

Search make_search(const Diagram& d, LegLabels mode) {
  Search s;
  s.n = d.vertex_count();
  s.mode = mode;
  s.adj = d.multiplicity_matrix();
  s.leg_sets.assign(static_cast<std::size_t>(s.n), {});
  for (const auto& l : d.legs()) s.leg_sets[l.vertex].push_back(l.external);
  s.diagram = &d;
  return s;
}

std::uint64_t factorial(int k) {
  std::uint64_t r = 1;
  for (int i = 2; i <= k; ++i) r *= static_cast<std::uint64_t>(i);
  return r;
}

}  // namespace

CanonicalLabeling canonical_labeling(const Diagram& d, LegLabels legs) {
  Search s = make_search(d, legs);
  if (s.n == 0) {
    s.best = s.encode({});
    s.ties = 1;
  } else {
    s.run(s.initial_colors());
  }
  return CanonicalLabeling{CanonicalForm{std::move(s.best)}, std::move(s.best_perm), s.ties};
}

CanonicalForm canonicalize(const Diagram& d, LegLabels legs) {
  return canonical_labeling(d, legs).form;
}

Diagram canonical_representative(const Diagram& d, LegLabels legs) {
  const CanonicalLabeling lab = canonical_labeling(d, legs);
  Diagram r = relabel(d, lab.old_to_new);
  if (legs == LegLabels::kDistinct) return r;
  std::vector<int> vertices;
  for (const auto& l : r.legs()) vertices.push_back(l.vertex);
  std::sort(vertices.begin(), vertices.end());
  std::vector<Leg> relabeled;
  for (std::size_t i = 0; i < vertices.size(); ++i) relabeled.push_back({static_cast<int>(i) + 1, vertices[i]});
  return Diagram(r.vertex_count(), r.edges(), std::move(relabeled));
}

std::uint64_t automorphism_count(const Diagram& d, LegLabels legs) {
  std::uint64_t count = canonical_labeling(d, legs).vertex_automorphisms;
  std::map<Edge, int> mult;
  for (const auto& e : d.edges()) ++mult[e];
  for (const auto& [e, k] : mult) {
    count *= factorial(k);
    if (e.u == e.v) count <<= k;  // each self-loop can be reversed
  }
  return count;
}

}  // namespace fracphi
