#pragma once

#include <span>
#include <string>
#include <vector>

#include "fracphi/diagram.hpp"

namespace fracphi {

/// Integer combination sum_i a_i k_i + sum_r b_r p_r.
struct MomentumCombination {
  std::vector<int> loop;      // size = loop count
  std::vector<int> external;  // size = independent external momenta (E - 1)

  bool is_zero() const;
  double evaluate(std::span<const double> loop_point, std::span<const double> ext) const;
  std::string str() const;  // e.g. "k1+k2-p1"
};

/// Line momenta of a connected diagram in terms of l loop momenta and the
/// E-1 independent external momenta. External momenta enter the diagram at
/// their legs; p_E = -(p_1 + ... + p_{E-1}).
///
/// Line j is oriented from edges()[j].u to edges()[j].v. Chords of a BFS
/// spanning tree rooted at vertex 0 carry the loop momenta in edge order;
/// tree lines are fixed by conservation.
struct MomentumRouting {
  int loops = 0;
  int externals = 0;
  std::vector<Edge> orientation;
  std::vector<MomentumCombination> lines;
  std::vector<int> chords;  // chords[i] = line carrying k_(i+1)
  /// Net incoming momentum at each vertex including injections; identically zero.
  std::vector<MomentumCombination> vertex_balance;
  /// p_r for r = 1..E in terms of the independent externals.
  std::vector<MomentumCombination> leg_momenta;

  std::vector<double> line_values(std::span<const double> loop_point,
                                  std::span<const double> ext) const;
};

/// Throws InvalidArgument("diagram not connected") for disconnected input.
MomentumRouting route_momenta(const Diagram& d);

}  // namespace fracphi
