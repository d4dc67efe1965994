#include "fracphi/forest.hpp"

#include <algorithm>
#include <tuple>

#include "fracphi/error.hpp"

namespace fracphi {

bool overlapping(const Subdiagram& a, const Subdiagram& b) {
  if ((a.lines & b.lines) == 0) return false;
  return !(a.contains(b) || b.contains(a));
}

namespace {

bool part_order(const Subdiagram& a, const Subdiagram& b) {
  return a.L != b.L ? a.L < b.L : a.lines < b.lines;
}

}  // namespace

std::vector<Forest> enumerate_forests(const Diagram& d, const Alpha& alpha) {
  const std::vector<Subdiagram> parts = renormalization_parts(d, alpha);
  std::vector<std::vector<int>> chosen_sets;
  std::vector<int> chosen;
  auto grow = [&](auto&& self, std::size_t next) -> void {
    chosen_sets.push_back(chosen);
    for (std::size_t i = next; i < parts.size(); ++i) {
      const bool ok = std::none_of(chosen.begin(), chosen.end(),
                                   [&](int j) { return overlapping(parts[i], parts[j]); });
      if (!ok) continue;
      chosen.push_back(static_cast<int>(i));
      self(self, i + 1);
      chosen.pop_back();
    }
  };
  grow(grow, 0);
  std::sort(chosen_sets.begin(), chosen_sets.end(), [](const auto& a, const auto& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  std::vector<Forest> out;
  out.reserve(chosen_sets.size());
  for (const auto& set : chosen_sets) {
    Forest f;
    for (int i : set) f.parts.push_back(parts[i]);
    out.push_back(std::move(f));
  }
  return out;
}

RenormalizedIntegrand renormalized_integrand_from_forests(const Diagram& d, const Alpha& alpha,
                                                          std::span<const Forest> forests) {
  RenormalizedIntegrand r{d, alpha, {}};
  for (const auto& f : forests) {
    for (std::size_t i = 0; i < f.parts.size(); ++i) {
      if (degree(f.parts[i], alpha) < 0) throw InvalidArgument("invalid forest");
      for (std::size_t j = i + 1; j < f.parts.size(); ++j) {
        if (overlapping(f.parts[i], f.parts[j]) || f.parts[i] == f.parts[j]) {
          throw InvalidArgument("invalid forest");
        }
      }
    }
    RenormalizedTerm term;
    term.sign = f.parts.size() % 2 == 0 ? 1 : -1;
    for (const auto& p : f.parts) {
      const Rational D = degree(p, alpha);
      term.subtractions.push_back({p, D, static_cast<int>(floor(D))});
    }
    // outermost (largest) first; disjoint parts commute so ties are harmless
    std::sort(term.subtractions.begin(), term.subtractions.end(),
              [](const Subtraction& a, const Subtraction& b) { return part_order(b.part, a.part); });
    r.terms.push_back(std::move(term));
  }
  return r;
}

RenormalizedIntegrand build_renormalized_integrand(const Diagram& d, const Alpha& alpha) {
  const auto forests = enumerate_forests(d, alpha);
  return renormalized_integrand_from_forests(d, alpha, forests);
}

std::string operator_name(OperatorTag op, const Alpha& alpha) {
  const std::string a = to_string(alpha);
  switch (op) {
    case OperatorTag::kConstant: return "constant";
    case OperatorTag::kMass: return "x^2";
    case OperatorTag::kKinetic: return "xdot^2";
    case OperatorTag::kFractionalQuadratic: return "x^(" + a + ")^2";
    case OperatorTag::kFractionalQuartic: return "x^(" + a + ")^4";
  }
  return "unknown";
}

std::string CutoffBehavior::str() const {
  return logarithmic ? std::string("log") : "power(" + to_short_string(power) + ")";
}

CountertermReport counterterm_report(const ClassificationTable& table) {
  CountertermReport report;
  report.alpha = table.alpha;
  report.regime = table.regime;
  for (const auto& c : table.divergent) {
    if (c.report.E > 4) report.offending.push_back(c);
  }
  if (!report.offending.empty()) {
    report.regime = Regime::kNonRenormalizable;
    return report;
  }
  auto add = [&](int E, const Rational& D, OperatorTag op) {
    CutoffBehavior b{D.numerator() == 0, D};
    if (b.logarithmic) b.power = 0;
    for (const auto& e : report.entries) {
      if (e.E == E && e.degree == D && e.op == op) return;
    }
    report.entries.push_back({E, D, op, b});
  };
  for (const auto& c : table.divergent) {
    const Rational& D = c.report.degree;
    switch (c.report.E) {
      case 0: add(0, D, OperatorTag::kConstant); break;
      case 2:
        add(2, D, OperatorTag::kFractionalQuadratic);
        if (floor(D) >= 1) {
          add(2, D, OperatorTag::kMass);
          add(2, D, OperatorTag::kKinetic);
        }
        break;
      case 4: add(4, D, OperatorTag::kFractionalQuartic); break;
      default: break;
    }
  }
  std::sort(report.entries.begin(), report.entries.end(),
            [](const CountertermEntry& a, const CountertermEntry& b) {
              return std::tie(a.E, a.degree, a.op) < std::tie(b.E, b.degree, b.op);
            });
  return report;
}

}  // namespace fracphi
