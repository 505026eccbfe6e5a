#include "dsched/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "dsched/core.hpp"

namespace dsched::oracle {

namespace {

double brute_bipartite_rec(int i, int n_left, std::vector<char>& right_used,
                           const std::vector<std::vector<std::pair<int, double>>>& adj) {
  if (i == n_left) return 0;
  double best = brute_bipartite_rec(i + 1, n_left, right_used, adj);  // leave i unmatched
  for (auto [r, w] : adj[i]) {
    if (right_used[r]) continue;
    right_used[r] = 1;
    best = std::max(best, w + brute_bipartite_rec(i + 1, n_left, right_used, adj));
    right_used[r] = 0;
  }
  return best;
}

double brute_general_rec(size_t k, std::vector<char>& used,
                         const std::vector<WeightedEdge>& edges) {
  if (k == edges.size()) return 0;
  double best = brute_general_rec(k + 1, used, edges);
  const auto& e = edges[k];
  if (!used[e.a] && !used[e.b]) {
    used[e.a] = used[e.b] = 1;
    best = std::max(best, e.w + brute_general_rec(k + 1, used, edges));
    used[e.a] = used[e.b] = 0;
  }
  return best;
}

}  // namespace

double brute_bipartite_matching(int n_left, int n_right,
                                const std::vector<WeightedEdge>& edges) {
  std::vector<std::vector<std::pair<int, double>>> adj(n_left);
  for (const auto& e : edges)
    if (e.w > 0) adj[e.a].push_back({e.b, e.w});
  std::vector<char> right_used(n_right, 0);
  return brute_bipartite_rec(0, n_left, right_used, adj);
}

double brute_general_matching(int n_vertices, const std::vector<WeightedEdge>& edges) {
  if (n_vertices > 12) throw SizeError("brute_general_matching: more than 12 vertices");
  std::vector<WeightedEdge> positive;
  for (const auto& e : edges)
    if (e.w > 0 && e.a != e.b) positive.push_back(e);
  std::vector<char> used(n_vertices, 0);
  return brute_general_rec(0, used, positive);
}

GridSolveResult grid_concave_solve(const std::function<double(const std::vector<double>&)>& f,
                                   const std::vector<double>& caps, double initial_step,
                                   int refinements) {
  require(!caps.empty() && caps.size() <= 6, "grid_concave_solve: 1..6 dimensions");
  require(initial_step > 0, "grid_concave_solve: step must be positive");
  const size_t dim = caps.size();

  auto axis_points = [&](double cap, double step) {
    std::vector<double> pts;
    for (double v = 0; v < cap; v += step) pts.push_back(v);
    pts.push_back(cap);  // always include the cap so refinement never loses it
    return pts;
  };

  GridSolveResult best;
  best.point.assign(dim, 0.0);
  best.objective = f(best.point);

  double step = initial_step;
  std::vector<double> lo(dim, 0.0), hi(caps);
  for (int r = 0; r <= refinements; ++r) {
    std::vector<std::vector<double>> axes(dim);
    for (size_t d = 0; d < dim; ++d) {
      axes[d].clear();
      for (double v : axis_points(hi[d] - lo[d], step)) axes[d].push_back(lo[d] + v);
    }
    std::vector<size_t> idx(dim, 0);
    std::vector<double> pt(dim);
    while (true) {
      for (size_t d = 0; d < dim; ++d) pt[d] = axes[d][idx[d]];
      double val = f(pt);
      if (val > best.objective) {
        best.objective = val;
        best.point = pt;
      }
      size_t d = 0;
      while (d < dim && ++idx[d] == axes[d].size()) idx[d++] = 0;
      if (d == dim) break;
    }
    // Shrink the box around the incumbent and halve the step.
    for (size_t d = 0; d < dim; ++d) {
      lo[d] = std::max(0.0, best.point[d] - step);
      hi[d] = std::min(caps[d], best.point[d] + step);
    }
    step /= 2;
  }
  return best;
}

}  // namespace dsched::oracle
