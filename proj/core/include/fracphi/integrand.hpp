#pragma once

#include <span>
#include <vector>

#include "fracphi/forest.hpp"
#include "fracphi/rational.hpp"
#include "fracphi/routing.hpp"

namespace fracphi {

enum class CutoffGeometry {
  kPerLine,  // |q_j| <= kappa on every line momentum
  kBox,      // |k_i| <= kappa on the loop momenta only
};

struct PropagatorSpec {
  Alpha alpha{Rational(0)};
  double m = 1.0;
  double kappa = 1.0;
  CutoffGeometry geometry = CutoffGeometry::kPerLine;

  /// Throws InvalidArgument unless m > 0 and kappa > 0.
  void validate() const;
};

/// |q|^(2 alpha) / (q^2 + m^2).
double line_factor(double q, double two_alpha, double m);

/// Product of line factors at a loop point, zero outside the cutoff region.
double integrand_value(const MomentumRouting& r, const PropagatorSpec& spec,
                       std::span<const double> loop_point, std::span<const double> ext);

/// Line momenta q' = M k + offset for one evaluation pattern of a recipe.
struct AffineLeaf {
  double weight = 1.0;
  std::vector<double> matrix;  // lines x loops, row-major
  std::vector<double> offset;  // per line
};

/// A (possibly subtracted) integrand reduced to a weighted sum of products of
/// line factors at affine line momenta. Each leaf carries its own cutoff
/// indicator, evaluated on its own line momenta.
class CompiledIntegrand {
 public:
  CompiledIntegrand(PropagatorSpec spec, int lines, int loops, std::vector<AffineLeaf> leaves);

  const PropagatorSpec& spec() const noexcept { return spec_; }
  int dimension() const noexcept { return loops_; }
  int line_count() const noexcept { return lines_; }
  const std::vector<AffineLeaf>& leaves() const noexcept { return leaves_; }

  double operator()(std::span<const double> k) const;

  /// Per-loop-momentum interval containing the support of every leaf.
  const std::vector<double>& lower() const noexcept { return lower_; }
  const std::vector<double>& upper() const noexcept { return upper_; }

 private:
  PropagatorSpec spec_;
  int lines_;
  int loops_;
  double two_alpha_;
  std::vector<AffineLeaf> leaves_;
  std::vector<double> lower_;
  std::vector<double> upper_;
};

/// The bare integrand I_Gamma at fixed external momenta.
CompiledIntegrand compile_bare(const MomentumRouting& r, const PropagatorSpec& spec,
                               std::span<const double> ext);

/// R_Gamma at fixed external momenta. Each t^gamma replaces the momenta of
/// gamma's lines by their projection onto gamma's cycle space, which is the
/// part independent of the momenta entering gamma; orders above zero use
/// central differences along the removed component.
CompiledIntegrand compile_renormalized(const RenormalizedIntegrand& ri, const MomentumRouting& r,
                                       const PropagatorSpec& spec, std::span<const double> ext);

/// Orthogonal projector onto the cycle space of the given lines, in the
/// orientation of the routing. Row-major |lines| x |lines|.
std::vector<double> cycle_projector(const MomentumRouting& r, std::span<const int> lines);

}  // namespace fracphi
