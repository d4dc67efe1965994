#include "fracphi/wick.hpp"

#include "fracphi/error.hpp"

namespace fracphi {

std::uint64_t double_factorial_pairings(int count) {
  if (count < 0 || count % 2 != 0) return 0;
  std::uint64_t r = 1;
  for (int k = count - 1; k > 1; k -= 2) r *= static_cast<std::uint64_t>(k);
  return r;
}

namespace {

void pair_recursive(std::span<const FieldLabel> labels, const PairingOptions& opts,
                    std::vector<char>& used, Matching& current,
                    const std::function<void(const Matching&)>& visit) {
  const int size = static_cast<int>(labels.size());
  int first = 0;
  while (first < size && used[first]) ++first;
  if (first == size) {
    visit(current);
    return;
  }
  used[first] = 1;
  for (int j = first + 1; j < size; ++j) {
    if (used[j]) continue;
    if (opts.normal_ordered && labels[first].same_vertex(labels[j])) continue;
    used[j] = 1;
    current.emplace_back(first, j);
    pair_recursive(labels, opts, used, current, visit);
    current.pop_back();
    used[j] = 0;
  }
  used[first] = 0;
}

}  // namespace

void for_each_pairing(std::span<const FieldLabel> labels, const PairingOptions& opts,
                      const std::function<void(const Matching&)>& visit) {
  if (labels.size() % 2 != 0) throw InvalidArgument("odd field count");
  std::vector<char> used(labels.size(), 0);
  Matching current;
  current.reserve(labels.size() / 2);
  pair_recursive(labels, opts, used, current, visit);
}

std::vector<Matching> wick_pairings(std::span<const FieldLabel> labels, const PairingOptions& opts) {
  std::vector<Matching> out;
  for_each_pairing(labels, opts, [&](const Matching& m) { out.push_back(m); });
  return out;
}

std::optional<Diagram> diagram_from_matching(std::span<const FieldLabel> labels, const Matching& m,
                                             int n) {
  std::vector<Edge> edges;
  std::vector<Leg> legs;
  for (const auto& [i, j] : m) {
    const FieldLabel& a = labels[i];
    const FieldLabel& b = labels[j];
    if (a.is_external() && b.is_external()) return std::nullopt;
    if (a.is_external()) {
      legs.push_back({a.index, b.index});
    } else if (b.is_external()) {
      legs.push_back({b.index, a.index});
    } else {
      edges.push_back({a.index, b.index});
    }
  }
  return Diagram(n, std::move(edges), std::move(legs));
}

}  // namespace fracphi
