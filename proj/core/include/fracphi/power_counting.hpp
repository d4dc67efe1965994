#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fracphi/canonical.hpp"
#include "fracphi/diagram.hpp"
#include "fracphi/enumerate.hpp"
#include "fracphi/rational.hpp"

namespace fracphi {

/// Canonical degree D = (2 alpha - 1) L - n + 1, exact.
Rational degree_of(int n, int lines, const Alpha& alpha);

struct PowerCountReport {
  int n = 0;
  int L = 0;
  int E = 0;
  int l = 0;
  Alpha alpha{Rational(0)};
  Rational degree;
  bool divergent = false;
  std::optional<Rational> threshold_alpha;  // absent when L = 0
};

/// Degree of a proper diagram, computed both as (2a-1)L - n + 1 and as
/// (2a-2)L + l; the two must agree exactly.
/// Throws InvalidArgument("power counting defined for proper diagrams").
Rational degree(const Diagram& d, const Alpha& alpha);

/// alpha* = (n - 1 + L) / (2L): degree(d, a) >= 0 iff a >= alpha*.
/// Throws InvalidArgument("no internal lines") when L = 0.
Rational threshold_alpha(const Diagram& d);

PowerCountReport power_count(const Diagram& d, const Alpha& alpha);

enum class Regime : std::uint8_t { kFinite, kSuperRenormalizable, kRenormalizable, kNonRenormalizable };

/// finite below 5/8, super-renormalizable on [5/8, 3/4), renormalizable at 3/4.
Regime regime_for(const Alpha& alpha);
std::string to_string(Regime r);

/// A subdiagram given by a subset of the host's internal lines plus every
/// vertex they touch. Its legs are all half-edges leaving that line set.
struct Subdiagram {
  std::uint32_t lines = 0;  // bit i <=> host edge i
  std::vector<int> vertices;
  int n = 0;
  int L = 0;
  int E = 0;

  bool contains(const Subdiagram& o) const { return (lines & o.lines) == o.lines; }
  friend bool operator==(const Subdiagram& a, const Subdiagram& b) { return a.lines == b.lines; }
};

Rational degree(const Subdiagram& s, const Alpha& alpha);

/// Connected, bridgeless subdiagrams with at least one line, ordered by
/// (line count, line mask). The full diagram is included when proper.
std::vector<Subdiagram> proper_subdiagrams(const Diagram& d);

/// Proper subdiagrams with D >= 0.
std::vector<Subdiagram> renormalization_parts(const Diagram& d, const Alpha& alpha);

/// Proper, normal-ordered, connected topologies (leg labels collapsed) for
/// 2 <= n <= max_order and every even E, built once and reused across alpha.
class TopologyCatalog {
 public:
  explicit TopologyCatalog(int max_order);

  int max_order() const noexcept { return max_order_; }
  const std::vector<WeightedDiagram>& at_order(int n) const;

 private:
  int max_order_;
  std::vector<std::vector<WeightedDiagram>> by_order_;
};

struct ClassifiedDiagram {
  Diagram diagram;
  CanonicalForm form;
  PowerCountReport report;
};

struct ClassificationTable {
  Alpha alpha{Rational(0)};
  int max_order = 0;
  Regime regime = Regime::kFinite;
  std::vector<ClassifiedDiagram> divergent;  // sorted by (n, E, certificate)
};

/// Lists every proper normal-ordered diagram with 2 <= n <= max_order and D >= 0.
ClassificationTable classify(const Alpha& alpha, int max_order);
ClassificationTable classify(const Alpha& alpha, const TopologyCatalog& catalog, int max_order);

}  // namespace fracphi
