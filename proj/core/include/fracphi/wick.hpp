#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "fracphi/diagram.hpp"

namespace fracphi {

/// A perfect matching as pairs of positions into a label sequence.
using Matching = std::vector<std::pair<int, int>>;

struct PairingOptions {
  /// Exclude pairs of two slots of the same vertex (the normal product).
  bool normal_ordered = false;
};

/// (2k-1)!! for 2k = count. Zero for odd counts.
std::uint64_t double_factorial_pairings(int count);

/// Calls visit(matching) once for every perfect matching of labels.
/// Throws InvalidArgument("odd field count") for odd |labels|.
void for_each_pairing(std::span<const FieldLabel> labels, const PairingOptions& opts,
                      const std::function<void(const Matching&)>& visit);

/// All perfect matchings, in lexicographic order of first-unmatched pairing.
std::vector<Matching> wick_pairings(std::span<const FieldLabel> labels,
                                    const PairingOptions& opts = {});

/// The diagram produced by a full contraction of wick_labels(n, E).
/// Returns nullopt when two externals are paired with each other: such a
/// pairing is a free propagator, not a leg attached to a vertex.
std::optional<Diagram> diagram_from_matching(std::span<const FieldLabel> labels,
                                             const Matching& m, int n);

}  // namespace fracphi
