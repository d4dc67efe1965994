#include "fracphi/routing.hpp"

#include <algorithm>
#include <queue>

#include "fracphi/error.hpp"

namespace fracphi {

bool MomentumCombination::is_zero() const {
  return std::all_of(loop.begin(), loop.end(), [](int c) { return c == 0; }) &&
         std::all_of(external.begin(), external.end(), [](int c) { return c == 0; });
}

double MomentumCombination::evaluate(std::span<const double> loop_point,
                                     std::span<const double> ext) const {
  double q = 0.0;
  for (std::size_t i = 0; i < loop.size(); ++i) q += loop[i] * loop_point[i];
  for (std::size_t r = 0; r < external.size(); ++r) q += external[r] * ext[r];
  return q;
}

std::string MomentumCombination::str() const {
  std::string s;
  auto term = [&](int c, const std::string& name) {
    if (c == 0) return;
    if (c < 0) {
      s += "-";
    } else if (!s.empty()) {
      s += "+";
    }
    if (c != 1 && c != -1) s += std::to_string(c < 0 ? -c : c);
    s += name;
  };
  for (std::size_t i = 0; i < loop.size(); ++i) term(loop[i], "k" + std::to_string(i + 1));
  for (std::size_t r = 0; r < external.size(); ++r) term(external[r], "p" + std::to_string(r + 1));
  return s.empty() ? "0" : s;
}

namespace {

MomentumCombination& operator+=(MomentumCombination& a, const MomentumCombination& b) {
  for (std::size_t i = 0; i < a.loop.size(); ++i) a.loop[i] += b.loop[i];
  for (std::size_t r = 0; r < a.external.size(); ++r) a.external[r] += b.external[r];
  return a;
}

MomentumCombination negated(MomentumCombination a) {
  for (int& c : a.loop) c = -c;
  for (int& c : a.external) c = -c;
  return a;
}

}  // namespace

std::vector<double> MomentumRouting::line_values(std::span<const double> loop_point,
                                                 std::span<const double> ext) const {
  std::vector<double> q(lines.size());
  for (std::size_t j = 0; j < lines.size(); ++j) q[j] = lines[j].evaluate(loop_point, ext);
  return q;
}

MomentumRouting route_momenta(const Diagram& d) {
  if (!d.is_connected()) throw InvalidArgument("diagram not connected");
  const int n = d.vertex_count();
  const int L = d.line_count();
  const int E = d.leg_count();

  MomentumRouting r;
  r.loops = L - n + 1;
  r.externals = E > 0 ? E - 1 : 0;
  r.orientation = d.edges();
  const MomentumCombination zero{std::vector<int>(static_cast<std::size_t>(r.loops), 0),
                                 std::vector<int>(static_cast<std::size_t>(r.externals), 0)};

  for (int leg = 1; leg <= E; ++leg) {
    MomentumCombination p = zero;
    if (leg < E) {
      p.external[leg - 1] = 1;
    } else {
      for (int& c : p.external) c = -1;
    }
    r.leg_momenta.push_back(p);
  }

  // BFS spanning tree; the first edge reaching a new vertex joins the tree
  std::vector<int> parent_edge(static_cast<std::size_t>(n), -1);
  std::vector<int> order;
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  std::vector<char> is_tree(static_cast<std::size_t>(L), 0);
  if (n > 0) {
    std::queue<int> queue;
    queue.push(0);
    seen[0] = 1;
    while (!queue.empty()) {
      const int v = queue.front();
      queue.pop();
      order.push_back(v);
      for (int j = 0; j < L; ++j) {
        const Edge& e = d.edges()[j];
        if (e.u != v && e.v != v) continue;
        const int w = e.u == v ? e.v : e.u;
        if (seen[w]) continue;
        seen[w] = 1;
        parent_edge[w] = j;
        is_tree[j] = 1;
        queue.push(w);
      }
    }
  }

  r.lines.assign(static_cast<std::size_t>(L), zero);
  std::vector<MomentumCombination> injection(static_cast<std::size_t>(n), zero);
  for (const auto& leg : d.legs()) injection[leg.vertex] += r.leg_momenta[leg.external - 1];
  int next_loop = 0;
  for (int j = 0; j < L; ++j) {
    if (is_tree[j]) continue;
    MomentumCombination k = zero;
    k.loop[next_loop++] = 1;
    r.lines[j] = k;
    r.chords.push_back(j);
    const Edge& e = d.edges()[j];
    injection[e.v] += k;
    injection[e.u] += negated(k);
  }

  // leaves first: subtree injection totals fix the tree-line momenta
  std::vector<MomentumCombination> subtree = injection;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const int child = *it;
    const int j = parent_edge[child];
    if (j < 0) continue;
    const Edge& e = d.edges()[j];
    const int parent = e.u == child ? e.v : e.u;
    // momentum entering the child's subtree through line j cancels its injections
    r.lines[j] = e.v == child ? negated(subtree[child]) : subtree[child];
    subtree[parent] += subtree[child];
  }

  r.vertex_balance.assign(static_cast<std::size_t>(n), zero);
  for (int v = 0; v < n; ++v) {
    MomentumCombination b = zero;
    for (const auto& leg : d.legs()) {
      if (leg.vertex == v) b += r.leg_momenta[leg.external - 1];
    }
    for (int j = 0; j < L; ++j) {
      const Edge& e = d.edges()[j];
      if (e.v == v) b += r.lines[j];
      if (e.u == v) b += negated(r.lines[j]);
    }
    if (!b.is_zero()) throw std::logic_error("route_momenta: conservation violated");
    r.vertex_balance[v] = b;
  }
  return r;
}

}  // namespace fracphi
