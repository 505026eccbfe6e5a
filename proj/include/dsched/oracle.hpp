#pragma once

#include <functional>
#include <vector>

#include "dsched/core.hpp"
#include "dsched/matching.hpp"

namespace dsched::oracle {

/// Exhaustive maximum-weight bipartite matching (DFS over left nodes).
/// Returns the optimal total weight; only w > 0 edges are used.
double brute_bipartite_matching(int n_left, int n_right,
                                const std::vector<WeightedEdge>& edges);

/// Exhaustive maximum-weight matching on a general graph (DFS over edges).
/// Throws SizeError above 12 vertices.
double brute_general_matching(int n_vertices, const std::vector<WeightedEdge>& edges);

struct GridSolveResult {
  std::vector<double> point;
  double objective = 0;
};

/// Maximizes a concave objective over a box [0, caps] by exhaustive evaluation
/// on a grid, refining around the best point. Grid points per axis are the
/// multiples of the step plus the cap itself, so halving the step never drops
/// previously seen points. Intended for small (<= 6-dim) reference solves.
GridSolveResult grid_concave_solve(const std::function<double(const std::vector<double>&)>& f,
                                   const std::vector<double>& caps, double initial_step,
                                   int refinements);

}  // namespace dsched::oracle
