#include "dsched/collection.hpp"

#include <cmath>

namespace dsched {

Mat collection_weight(const MultiplierSet& mult, const SystemState& state) {
  const int n = state.d.rows(), m = state.d.cols();
  require(static_cast<int>(mult.mu.size()) == n && mult.eta.rows() == n && mult.eta.cols() == m,
          "collection_weight: shape mismatch");
  Mat w(n, m);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j)
      w(i, j) = state.d(i, j) * (mult.mu[i] - mult.eta(i, j) - state.c(i, j));
  return w;
}

BipartiteGraph build_baseline_graph(const Mat& weights) {
  BipartiteGraph g;
  g.n_left = weights.rows();
  g.n_right = weights.cols();
  g.copies_per_worker = 1;
  for (int i = 0; i < weights.rows(); ++i)
    for (int j = 0; j < weights.cols(); ++j)
      if (weights(i, j) > 0) g.edges.push_back({i, j, weights(i, j)});
  return g;
}

BipartiteGraph build_skew_graph(const Mat& weights) {
  const int n = weights.rows(), m = weights.cols();
  BipartiteGraph g;
  g.n_left = n;
  g.n_right = n * m;
  g.copies_per_worker = n;
  for (int j = 0; j < m; ++j) {
    for (int copy = 1; copy <= n; ++copy) {
      // (copy-1) ln(copy-1) - copy ln(copy), with 0 ln 0 = 0
      double count_term = -copy * std::log(static_cast<double>(copy));
      if (copy > 1) count_term += (copy - 1) * std::log(static_cast<double>(copy - 1));
      for (int i = 0; i < n; ++i) {
        if (weights(i, j) <= 0) continue;
        double w = std::log(weights(i, j)) + count_term;
        g.edges.push_back({i, j * n + (copy - 1), w});
      }
    }
  }
  return g;
}

std::vector<int> hungarian_max_matching(const BipartiteGraph& g, double* total_weight) {
  auto match = max_weight_bipartite(g.n_left, g.n_right, g.edges);
  if (total_weight) {
    // Parallel edges never occur here, so a direct lookup is fine.
    Mat wmax(g.n_left, g.n_right, -1e300);
    for (const auto& e : g.edges)
      if (e.w > wmax(e.a, e.b)) wmax(e.a, e.b) = e.w;
    double s = 0;
    for (int i = 0; i < g.n_left; ++i)
      if (match[i] >= 0) s += wmax(i, match[i]);
    *total_weight = s;
  }
  return match;
}

CollectionPlan decode_baseline(const BipartiteGraph& g, const std::vector<int>& match) {
  require(g.copies_per_worker == 1, "decode_baseline: graph has worker copies");
  CollectionPlan plan;
  plan.alpha = Mat(g.n_left, g.n_right);
  plan.theta = Mat(g.n_left, g.n_right);
  for (int i = 0; i < g.n_left; ++i) {
    if (match[i] < 0) continue;
    plan.alpha(i, match[i]) = 1.0;
    plan.theta(i, match[i]) = 1.0;
  }
  return plan;
}

CollectionPlan decode_skew(const BipartiteGraph& g, const std::vector<int>& match) {
  // One copy per worker is legal: it is the single-source graph.
  require(g.copies_per_worker >= 1 && g.n_right % g.copies_per_worker == 0,
          "decode_skew: malformed copy layout");
  const int n_workers = g.n_right / g.copies_per_worker;
  CollectionPlan plan;
  plan.alpha = Mat(g.n_left, n_workers);
  plan.theta = Mat(g.n_left, n_workers);
  std::vector<int> count(n_workers, 0);
  for (int i = 0; i < g.n_left; ++i) {
    if (match[i] < 0) continue;
    ++count[match[i] / g.copies_per_worker];
  }
  for (int i = 0; i < g.n_left; ++i) {
    if (match[i] < 0) continue;
    int j = match[i] / g.copies_per_worker;
    plan.alpha(i, j) = 1.0;
    plan.theta(i, j) = 1.0 / count[j];
  }
  return plan;
}

}  // namespace dsched
