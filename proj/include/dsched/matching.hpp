#pragma once

#include <vector>

namespace dsched {

struct WeightedEdge {
  int a = 0, b = 0;
  double w = 0;
};

/// Maximum-weight matching on a general graph (Galil's O(V^3) blossom scheme,
/// van Rantwijk's formulation). Returns mate[v] (partner vertex or -1).
/// The matching maximizes total weight; it is not required to be perfect.
std::vector<int> max_weight_matching(int n_vertices, const std::vector<WeightedEdge>& edges);

/// Maximum-weight bipartite matching via a shortest-augmenting-path assignment
/// solver on a dummy-padded cost matrix. Nodes may stay unmatched. Returns
/// match[left] = right index or -1. Only edges with w > 0 can be used.
std::vector<int> max_weight_bipartite(int n_left, int n_right,
                                      const std::vector<WeightedEdge>& edges);

}  // namespace dsched
