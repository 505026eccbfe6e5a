#pragma once

#include "dsched/matching.hpp"
#include "dsched/model.hpp"

namespace dsched {

/// Per-pair utility of collecting one slot's worth from source i at worker j:
/// d * (mu_i - eta_ij - c_ij). Only positive entries are worth an edge.
Mat collection_weight(const MultiplierSet& mult, const SystemState& state);

/// Bipartite instance for the collection subproblem. Left nodes are sources.
/// With copies_per_worker == 1 the right nodes are workers (full-slot
/// collection). With copies_per_worker == N, right node j*N + (n-1) is the
/// n-th copy of worker j, and matching sources {i1..in} to copies of j means
/// they share worker j's slot equally (theta = 1/n each).
struct BipartiteGraph {
  int n_left = 0;
  int n_right = 0;
  int copies_per_worker = 1;
  std::vector<WeightedEdge> edges;
};

/// One worker per right node; weight w_ij, theta = 1 on selection.
BipartiteGraph build_baseline_graph(const Mat& weights);

/// N copies per worker. The edge from source i to the n-th copy of worker j
/// carries ln(w_ij) + (n-1) ln(n-1) - n ln(n)  (with 0 ln 0 = 0), so when n
/// sources take the first n copies the counting terms telescope and the total
/// is sum_k ln(w_{i_k j}) - n ln n = ln of the product of the shared-slot
/// utilities w/n. Only sources with w_ij > 0 get edges.
BipartiteGraph build_skew_graph(const Mat& weights);

struct CollectionPlan {
  Mat alpha;  // N x M binary
  Mat theta;  // N x M
  double matched_weight = 0;  // total matched edge weight (graph units)
};

/// Runs assignment on the graph and returns the raw matching
/// (match[left] = right node or -1) plus the total weight.
std::vector<int> hungarian_max_matching(const BipartiteGraph& g, double* total_weight = nullptr);

/// Decodes a baseline-graph matching: alpha = 1, theta = 1 on matched pairs.
CollectionPlan decode_baseline(const BipartiteGraph& g, const std::vector<int>& match);

/// Decodes a skew-graph matching: sources matched to any copy of worker j all
/// connect to j with theta = 1 / (number of sources matched to j).
CollectionPlan decode_skew(const BipartiteGraph& g, const std::vector<int>& match);

}  // namespace dsched
