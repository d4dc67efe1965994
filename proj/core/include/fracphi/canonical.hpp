#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "fracphi/diagram.hpp"

namespace fracphi {

/// How external legs participate in isomorphism.
enum class LegLabels : std::uint8_t {
  kDistinct,   // legs carry their momentum index; relabeling must preserve it
  kCollapsed,  // only the number of legs per vertex matters
};

/// Byte certificate of a diagram's isomorphism class.
struct CanonicalForm {
  std::vector<std::uint8_t> certificate;

  std::string hex() const;
  friend auto operator<=>(const CanonicalForm&, const CanonicalForm&) = default;
};

struct CanonicalLabeling {
  CanonicalForm form;
  std::vector<int> old_to_new;  // a labeling that realises the certificate
  std::uint64_t vertex_automorphisms = 1;  // leaves of the search tree reaching the certificate
};

/// Exact canonical labeling by colour refinement plus individualisation
/// backtracking. The search tree is not pruned, so the number of leaves that
/// attain the minimal encoding equals the order of the vertex automorphism group.
CanonicalLabeling canonical_labeling(const Diagram& d, LegLabels legs = LegLabels::kDistinct);

CanonicalForm canonicalize(const Diagram& d, LegLabels legs = LegLabels::kDistinct);

/// The diagram relabeled into canonical vertex order. With collapsed legs the
/// external indices are reassigned in ascending canonical vertex order.
Diagram canonical_representative(const Diagram& d, LegLabels legs = LegLabels::kDistinct);

/// Full automorphism group order |Aut| = |Aut_vertices| * prod(a_uv!) * prod(2^s s!)
/// over line multiplicities a_uv and self-loop counts s.
std::uint64_t automorphism_count(const Diagram& d, LegLabels legs = LegLabels::kDistinct);

}  // namespace fracphi
