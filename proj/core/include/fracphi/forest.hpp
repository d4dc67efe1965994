#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fracphi/diagram.hpp"
#include "fracphi/power_counting.hpp"
#include "fracphi/rational.hpp"

namespace fracphi {

/// Two parts overlap unless their line sets are disjoint or nested.
bool overlapping(const Subdiagram& a, const Subdiagram& b);

/// A set of pairwise non-overlapping renormalization parts.
struct Forest {
  std::vector<Subdiagram> parts;  // ordered by (line count, line mask)
};

/// Every forest of d at alpha, the empty forest first, then by size and
/// lexicographic part order.
std::vector<Forest> enumerate_forests(const Diagram& d, const Alpha& alpha);

/// t^gamma: Taylor expansion in the part's external momenta about zero, to
/// order floor(D(gamma)).
struct Subtraction {
  Subdiagram part;
  Rational degree;
  int order = 0;
};

/// One forest's contribution: sign (-1)^|W| and its subtractions ordered
/// outermost first. The innermost operator acts on the integrand first.
struct RenormalizedTerm {
  int sign = 1;
  std::vector<Subtraction> subtractions;
};

struct RenormalizedIntegrand {
  Diagram diagram;
  Alpha alpha{Rational(0)};
  std::vector<RenormalizedTerm> terms;
};

/// One term per forest of d. Without renormalization parts the single term
/// is the bare integrand.
RenormalizedIntegrand build_renormalized_integrand(const Diagram& d, const Alpha& alpha);

/// Builds the recipe from explicit forests. Throws InvalidArgument("invalid
/// forest") when a forest contains overlapping or non-divergent parts.
RenormalizedIntegrand renormalized_integrand_from_forests(const Diagram& d, const Alpha& alpha,
                                                          std::span<const Forest> forests);

enum class OperatorTag : std::uint8_t {
  kConstant,
  kMass,                 // x^2
  kKinetic,              // xdot^2
  kFractionalQuadratic,  // x^(a)^2
  kFractionalQuartic,    // x^(a)^4
};

std::string operator_name(OperatorTag op, const Alpha& alpha);

struct CutoffBehavior {
  bool logarithmic = false;
  Rational power;  // kappa^power when not logarithmic

  std::string str() const;
  friend bool operator==(const CutoffBehavior&, const CutoffBehavior&) = default;
};

struct CountertermEntry {
  int E = 0;
  Rational degree;
  OperatorTag op = OperatorTag::kConstant;
  CutoffBehavior behavior;
};

struct CountertermReport {
  Alpha alpha{Rational(0)};
  Regime regime = Regime::kFinite;
  std::vector<CountertermEntry> entries;       // sorted by (E, degree, op)
  std::vector<ClassifiedDiagram> offending;    // divergences with E > 4
};

/// Maps each divergent (E, D) class of the table onto local operators.
CountertermReport counterterm_report(const ClassificationTable& table);

}  // namespace fracphi
