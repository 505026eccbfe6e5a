#include <algorithm>
#include <cmath>
#include <vector>

#include "dsched/training.hpp"

namespace dsched {

namespace {

// Primal simplex on  max c.x  s.t.  A x <= b, x >= 0  with b >= 0, so the
// slack basis is feasible. Bland's rule guarantees termination.
struct SimplexResult {
  std::vector<double> x;
  double value = 0;
};

SimplexResult simplex_max(const std::vector<std::vector<double>>& a,
                          const std::vector<double>& b, const std::vector<double>& c) {
  const int m = static_cast<int>(a.size());
  const int n = static_cast<int>(c.size());
  // Tableau: rows 0..m-1 constraints, row m objective; cols 0..n-1 structural,
  // n..n+m-1 slack, n+m rhs.
  std::vector<std::vector<double>> t(m + 1, std::vector<double>(n + m + 1, 0.0));
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) t[i][j] = a[i][j];
    t[i][n + i] = 1.0;
    t[i][n + m] = b[i];
  }
  for (int j = 0; j < n; ++j) t[m][j] = -c[j];
  std::vector<int> basis(m);
  for (int i = 0; i < m; ++i) basis[i] = n + i;

  const double eps = 1e-11;
  const long max_iter = 20000L + 50L * (m + n);
  for (long iter = 0; iter < max_iter; ++iter) {
    int enter = -1;  // Bland: lowest index with negative reduced cost
    for (int j = 0; j < n + m; ++j)
      if (t[m][j] < -eps) {
        enter = j;
        break;
      }
    if (enter == -1) break;
    int leave = -1;
    double best = 0;
    for (int i = 0; i < m; ++i) {
      if (t[i][enter] <= eps) continue;
      double ratio = t[i][n + m] / t[i][enter];
      if (leave == -1 || ratio < best - eps ||
          (ratio < best + eps && basis[i] < basis[leave]))
        best = ratio, leave = i;
    }
    if (leave == -1) throw InvariantViolation("simplex_max: unbounded program");
    double piv = t[leave][enter];
    for (double& v : t[leave]) v /= piv;
    for (int i = 0; i <= m; ++i) {
      if (i == leave) continue;
      double f = t[i][enter];
      if (f == 0) continue;
      for (int j = 0; j <= n + m; ++j) t[i][j] -= f * t[leave][j];
    }
    basis[leave] = enter;
  }

  SimplexResult r;
  r.x.assign(n, 0.0);
  for (int i = 0; i < m; ++i)
    if (basis[i] < n) r.x[basis[i]] = std::max(t[i][n + m], 0.0);
  r.value = t[m][n + m];
  return r;
}

}  // namespace

PairPlan solve_pair_linear(const PairInstance& inst) {
  const int n = static_cast<int>(inst.b_j.size());
  require(static_cast<int>(inst.b_k.size()) == n && static_cast<int>(inst.g_jk.size()) == n &&
              static_cast<int>(inst.g_kj.size()) == n && static_cast<int>(inst.cap_j.size()) == n &&
              static_cast<int>(inst.cap_k.size()) == n,
          "solve_pair_linear: shape mismatch");
  PairPlan plan;
  plan.x_j.assign(n, 0.0);
  plan.x_k.assign(n, 0.0);
  plan.y_jk.assign(n, 0.0);
  plan.y_kj.assign(n, 0.0);

  // Variable layout per source i: 4i + {0: x_j, 1: x_k, 2: y_jk, 3: y_kj}.
  const int nv = 4 * n;
  std::vector<double> c(nv, 0.0);
  for (int i = 0; i < n; ++i) {
    c[4 * i + 0] = inst.b_j[i];
    c[4 * i + 1] = inst.b_k[i];
    c[4 * i + 2] = inst.g_jk[i];
    c[4 * i + 3] = inst.g_kj[i];
  }
  std::vector<std::vector<double>> a;
  std::vector<double> b;
  {
    std::vector<double> row(nv, 0.0);  // transfer budget
    for (int i = 0; i < n; ++i) row[4 * i + 2] = row[4 * i + 3] = 1.0;
    a.push_back(row);
    b.push_back(std::max(inst.transfer, 0.0));
  }
  {
    std::vector<double> row(nv, 0.0);  // compute at j trains x_j and y_kj
    for (int i = 0; i < n; ++i) row[4 * i + 0] = row[4 * i + 3] = 1.0;
    a.push_back(row);
    b.push_back(std::max(inst.budget_j, 0.0));
  }
  {
    std::vector<double> row(nv, 0.0);  // compute at k trains x_k and y_jk
    for (int i = 0; i < n; ++i) row[4 * i + 1] = row[4 * i + 2] = 1.0;
    a.push_back(row);
    b.push_back(std::max(inst.budget_k, 0.0));
  }
  for (int i = 0; i < n; ++i) {  // holder queue caps
    std::vector<double> row(nv, 0.0);
    row[4 * i + 0] = row[4 * i + 2] = 1.0;
    a.push_back(row);
    b.push_back(std::max(inst.cap_j[i], 0.0));
    std::vector<double> row2(nv, 0.0);
    row2[4 * i + 1] = row2[4 * i + 3] = 1.0;
    a.push_back(row2);
    b.push_back(std::max(inst.cap_k[i], 0.0));
  }

  SimplexResult r = simplex_max(a, b, c);
  for (int i = 0; i < n; ++i) {
    plan.x_j[i] = r.x[4 * i + 0];
    plan.x_k[i] = r.x[4 * i + 1];
    plan.y_jk[i] = r.x[4 * i + 2];
    plan.y_kj[i] = r.x[4 * i + 3];
  }
  plan.objective = r.value;
  return plan;
}

}  // namespace dsched
