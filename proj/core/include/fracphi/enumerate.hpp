#pragma once

#include <cstdint>
#include <vector>

#include "fracphi/canonical.hpp"
#include "fracphi/diagram.hpp"
#include "fracphi/rational.hpp"

namespace fracphi {

struct EnumerationOptions {
  bool normal_ordered = true;
  bool proper_only = false;
  bool connected_only = true;
  LegLabels legs = LegLabels::kDistinct;
};

/// One isomorphism class together with the number of labeled Wick
/// contractions of wick_labels(n, E) that produce it.
struct WeightedDiagram {
  Diagram diagram;  // canonical representative
  CanonicalForm form;
  std::uint64_t contraction_count = 0;
};

/// (4!)^n n!, the number of relabelings of slots and vertices.
std::uint64_t vertex_relabelings(int n);

/// contraction_count / ((4!)^n n!). For distinct legs this is 1/|Aut|.
Rational symmetry_factor(const WeightedDiagram& w);

/// Enumerates isomorphism classes by generating every vertex-labeled
/// multigraph and leg assignment once, weighting each by the number of slot
/// contractions that realise it. Output is sorted by certificate.
/// Throws InvalidArgument("no diagrams: parity") when 4n - E is odd.
std::vector<WeightedDiagram> enumerate_diagrams(int n, int external_count,
                                                const EnumerationOptions& opts = {});

/// Same classes, obtained by visiting every slot-level Wick contraction.
/// Exponential in 4n + E; intended for small orders and cross-checks.
std::vector<WeightedDiagram> enumerate_by_contraction(int n, int external_count,
                                                      const EnumerationOptions& opts = {});

/// True iff the diagram stays connected after deleting any one internal line.
/// Throws InvalidArgument("diagram not connected") for disconnected input.
bool is_proper(const Diagram& d);

/// l = L - n + 1 for a connected diagram.
int loop_count(const Diagram& d);

}  // namespace fracphi
