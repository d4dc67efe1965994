#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace fracphi {

/// One field factor in a Wick product: either an external x(t_i) or one of
/// the four slots of a quartic vertex.
struct FieldLabel {
  enum class Kind : std::uint8_t { kExternal, kVertexSlot };

  Kind kind = Kind::kExternal;
  int index = 0;  // external index, or vertex index
  int slot = 0;   // 0..3 for vertex slots

  static FieldLabel external(int i) { return {Kind::kExternal, i, 0}; }
  static FieldLabel vertex_slot(int v, int s) { return {Kind::kVertexSlot, v, s}; }

  bool is_external() const noexcept { return kind == Kind::kExternal; }
  bool same_vertex(const FieldLabel& o) const noexcept {
    return kind == Kind::kVertexSlot && o.kind == Kind::kVertexSlot && index == o.index;
  }

  friend auto operator<=>(const FieldLabel&, const FieldLabel&) = default;
};

/// Field labels of x(t_1)..x(t_E) x^(a)(tau_1)^4 .. x^(a)(tau_n)^4, externals first.
std::vector<FieldLabel> wick_labels(int n, int external_count);

struct Edge {
  int u = 0;
  int v = 0;  // u <= v after normalization
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

struct Leg {
  int external = 0;  // 1-based external index
  int vertex = 0;
  friend auto operator<=>(const Leg&, const Leg&) = default;
};

/// A Feynman diagram of the quartic theory: n four-valent vertices, internal
/// lines (a multiset of vertex pairs) and labeled external legs.
///
/// Every vertex has degree exactly 4, so 4n = 2L + E always holds. Edges are
/// kept sorted with u <= v; legs are kept sorted by external index, which
/// must run over 1..E.
class Diagram {
 public:
  Diagram() = default;
  Diagram(int n, std::vector<Edge> edges, std::vector<Leg> legs);

  int vertex_count() const noexcept { return n_; }
  int line_count() const noexcept { return static_cast<int>(edges_.size()); }
  int leg_count() const noexcept { return static_cast<int>(legs_.size()); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const std::vector<Leg>& legs() const noexcept { return legs_; }

  /// Number of internal-line endpoints at v (a self-loop counts twice).
  int line_degree(int v) const;
  /// Number of external legs at v.
  int legs_at(int v) const;
  /// Symmetric multiplicity matrix, row-major n x n; diagonal holds self-loop counts.
  std::vector<int> multiplicity_matrix() const;

  bool has_self_loop() const;
  bool is_connected() const;

  friend bool operator==(const Diagram&, const Diagram&) = default;

 private:
  int n_ = 0;
  std::vector<Edge> edges_;
  std::vector<Leg> legs_;
};

/// Applies old->new vertex relabeling.
Diagram relabel(const Diagram& d, std::span<const int> old_to_new);

/// Named diagrams used throughout tests and tools.
namespace catalog {
Diagram tree_vertex();  // n=1, four legs
Diagram fish();         // n=2, L=2, legs 1,2 on vertex 0 and 3,4 on vertex 1
Diagram sunset();       // n=2, L=3, leg 1 on vertex 0, leg 2 on vertex 1
Diagram nut();          // n=2, L=4, vacuum
Diagram vacuum_triangle();  // n=3, L=6, doubled triangle, vacuum
}  // namespace catalog

std::string describe(const Diagram& d);

}  // namespace fracphi
