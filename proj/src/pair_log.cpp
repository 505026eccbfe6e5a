#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "dsched/training.hpp"

namespace dsched {

namespace {

// Interior-point solver for the proportional-fair pair program
//   max  sum_i ln(b_j x_j + g_kj y_kj) + sum_i ln(b_k x_k + g_jk y_jk)
// over the active terms, subject to the holder caps and the three coupling
// budgets (transfer, compute at j, compute at k). The barrier Hessian is a
// per-source block-diagonal matrix plus a rank-3 update from the coupling
// rows, so one Newton step costs O(n).
//
// Per-source slot layout: 0 = x_j, 1 = x_k, 2 = y_jk, 3 = y_kj.
// Term A (trained at j) reads slots {0, 3}; term B (trained at k) reads {1, 2}.
// Coupling rows: 0 = transfer {2,3}, 1 = compute j {0,3}, 2 = compute k {1,2}.

constexpr int kRowSlots[3][2] = {{2, 3}, {0, 3}, {1, 2}};
constexpr int kTermSlots[2][2] = {{0, 3}, {1, 2}};

}  // namespace

PairPlan solve_pair_log(const PairInstance& in) {
  const int n = static_cast<int>(in.b_j.size());
  require(static_cast<int>(in.b_k.size()) == n && static_cast<int>(in.g_jk.size()) == n &&
              static_cast<int>(in.g_kj.size()) == n && static_cast<int>(in.cap_j.size()) == n &&
              static_cast<int>(in.cap_k.size()) == n,
          "solve_pair_log: shape mismatch");
  PairPlan plan;
  plan.x_j.assign(n, 0.0);
  plan.x_k.assign(n, 0.0);
  plan.y_jk.assign(n, 0.0);
  plan.y_kj.assign(n, 0.0);

  const std::array<double, 3> budget = {std::max(in.transfer, 0.0), std::max(in.budget_j, 0.0),
                                        std::max(in.budget_k, 0.0)};

  // A variable participates when its coefficient is positive and every
  // resource it needs (holder cap, trainer compute, transfer link) is
  // positive; a term is active when it has at least one such variable.
  std::vector<std::array<int, 4>> gid(n, {-1, -1, -1, -1});
  std::vector<int> var_source, var_slot;
  std::vector<double> coef;
  for (int i = 0; i < n; ++i) {
    auto add = [&](int slot, double w, double cap, double compute, bool needs_transfer) {
      if (w <= 0 || cap <= 0 || compute <= 0) return;
      if (needs_transfer && budget[0] <= 0) return;
      gid[i][slot] = static_cast<int>(var_source.size());
      var_source.push_back(i);
      var_slot.push_back(slot);
      coef.push_back(w);
    };
    add(0, in.b_j[i], in.cap_j[i], budget[1], false);
    add(1, in.b_k[i], in.cap_k[i], budget[2], false);
    add(2, in.g_jk[i], in.cap_j[i], budget[2], true);
    add(3, in.g_kj[i], in.cap_k[i], budget[1], true);
  }
  const int nv = static_cast<int>(var_source.size());
  if (nv == 0) return plan;

  struct CapRef {
    int a, b;  // global ids (b == -1 when only one var draws on this cap)
    double cap;
  };
  std::vector<CapRef> caps;
  std::vector<std::vector<int>> caps_by_source(n);
  for (int i = 0; i < n; ++i) {
    auto add_cap = [&](int s1, int s2, double cap) {
      if (gid[i][s1] < 0 && gid[i][s2] < 0) return;
      int a = gid[i][s1] >= 0 ? gid[i][s1] : gid[i][s2];
      int b = gid[i][s1] >= 0 && gid[i][s2] >= 0 ? gid[i][s2] : -1;
      caps_by_source[i].push_back(static_cast<int>(caps.size()));
      caps.push_back({a, b, cap});
    };
    add_cap(0, 2, in.cap_j[i]);
    add_cap(1, 3, in.cap_k[i]);
  }

  // A coupling row only exists when some variable draws on it; rows with a
  // zero budget never receive variables, so inactive rows are skipped
  // everywhere below (their slack would otherwise be a hard zero).
  bool row_on[3] = {false, false, false};
  for (int s = 0; s < nv; ++s)
    for (int r = 0; r < 3; ++r)
      if (var_slot[s] == kRowSlots[r][0] || var_slot[s] == kRowSlots[r][1]) row_on[r] = true;

  // Strictly feasible start: quarter of each cap, scaled into the row budgets.
  std::vector<double> v(nv);
  for (int s = 0; s < nv; ++s) {
    int i = var_source[s], slot = var_slot[s];
    v[s] = 0.25 * (slot == 0 || slot == 2 ? in.cap_j[i] : in.cap_k[i]);
  }
  auto row_usage = [&](const std::vector<double>& vv, int r) {
    double s = 0;
    for (int i = 0; i < n; ++i)
      for (int slot : kRowSlots[r])
        if (gid[i][slot] >= 0) s += vv[gid[i][slot]];
    return s;
  };
  double scale = 1.0;
  for (int r = 0; r < 3; ++r) {
    if (!row_on[r]) continue;
    double use = row_usage(v, r);
    if (use > 0) scale = std::min(scale, 0.45 * budget[r] / use);
  }
  for (double& x : v) x *= scale;

  auto term_value = [&](int i, int which, const std::vector<double>& vv) {
    double u = 0;
    for (int slot : kTermSlots[which])
      if (gid[i][slot] >= 0) u += coef[gid[i][slot]] * vv[gid[i][slot]];
    return u;
  };
  auto cap_slack = [&](const CapRef& c, const std::vector<double>& vv) {
    return c.cap - vv[c.a] - (c.b >= 0 ? vv[c.b] : 0.0);
  };

  const int n_barrier = nv + static_cast<int>(caps.size()) + 3;
  auto phi = [&](double t, const std::vector<double>& vv) {
    double val = 0;
    for (double x : vv) {
      if (x <= 0) return 1e300;
      val -= std::log(x);
    }
    for (int i = 0; i < n; ++i)
      for (int w = 0; w < 2; ++w) {
        if (gid[i][kTermSlots[w][0]] < 0 && gid[i][kTermSlots[w][1]] < 0) continue;
        double u = term_value(i, w, vv);
        if (u <= 0) return 1e300;
        val -= t * std::log(u);
      }
    for (const auto& c : caps) {
      double s = cap_slack(c, vv);
      if (s <= 0) return 1e300;
      val -= std::log(s);
    }
    for (int r = 0; r < 3; ++r) {
      if (!row_on[r]) continue;
      double s = budget[r] - row_usage(vv, r);
      if (s <= 0) return 1e300;
      val -= std::log(s);
    }
    return val;
  };

  std::vector<double> g(nv), delta(nv), cslack(caps.size());
  for (double t = 1.0; ; t *= 10.0) {
    for (int newton = 0; newton < 100; ++newton) {
      std::array<double, 3> rslack;
      for (int r = 0; r < 3; ++r) rslack[r] = budget[r] - row_usage(v, r);

      for (int s = 0; s < nv; ++s) g[s] = -1.0 / v[s];
      for (int i = 0; i < n; ++i)
        for (int w = 0; w < 2; ++w) {
          double u = 0;
          bool any = false;
          for (int slot : kTermSlots[w])
            if (gid[i][slot] >= 0) {
              u += coef[gid[i][slot]] * v[gid[i][slot]];
              any = true;
            }
          if (!any) continue;
          for (int slot : kTermSlots[w])
            if (gid[i][slot] >= 0) g[gid[i][slot]] -= t * coef[gid[i][slot]] / u;
        }
      for (size_t ci = 0; ci < caps.size(); ++ci) {
        cslack[ci] = cap_slack(caps[ci], v);
        double inv = 1.0 / cslack[ci];
        g[caps[ci].a] += inv;
        if (caps[ci].b >= 0) g[caps[ci].b] += inv;
      }
      for (int r = 0; r < 3; ++r) {
        if (!row_on[r]) continue;
        double inv = 1.0 / rslack[r];
        for (int i = 0; i < n; ++i)
          for (int slot : kRowSlots[r])
            if (gid[i][slot] >= 0) g[gid[i][slot]] += inv;
      }

      // D = diag(1/v^2) + per-term and per-cap rank-1 blocks; solve
      // D w = rhs for rhs in {g, a_0, a_1, a_2} per source, then apply the
      // Woodbury identity for the three coupling rows.
      std::vector<std::array<double, 4>> w(nv, {0, 0, 0, 0});
      for (int i = 0; i < n; ++i) {
        int ids[4], k = 0;
        for (int slot = 0; slot < 4; ++slot)
          if (gid[i][slot] >= 0) ids[k++] = slot;
        if (k == 0) continue;
        double block[4][4] = {};
        for (int a = 0; a < k; ++a) {
          double vv = v[gid[i][ids[a]]];
          block[a][a] = 1.0 / (vv * vv);
        }
        auto add_outer = [&](int s1, int s2, double c1, double c2, double f) {
          int pos[2], cnt = 0;
          double cc[2];
          for (int a = 0; a < k; ++a) {
            if (ids[a] == s1) { pos[cnt] = a; cc[cnt++] = c1; }
            else if (ids[a] == s2) { pos[cnt] = a; cc[cnt++] = c2; }
          }
          for (int a = 0; a < cnt; ++a)
            for (int b = 0; b < cnt; ++b) block[pos[a]][pos[b]] += f * cc[a] * cc[b];
        };
        for (int ww = 0; ww < 2; ++ww) {
          int s1 = kTermSlots[ww][0], s2 = kTermSlots[ww][1];
          if (gid[i][s1] < 0 && gid[i][s2] < 0) continue;
          double u = term_value(i, ww, v);
          double c1 = gid[i][s1] >= 0 ? coef[gid[i][s1]] : 0;
          double c2 = gid[i][s2] >= 0 ? coef[gid[i][s2]] : 0;
          add_outer(s1, s2, c1, c2, t / (u * u));
        }
        for (int ci : caps_by_source[i]) {
          int s1 = var_slot[caps[ci].a];
          int s2 = caps[ci].b >= 0 ? var_slot[caps[ci].b] : s1;
          add_outer(s1, s2 == s1 ? -1 : s2, 1.0, 1.0, 1.0 / (cslack[ci] * cslack[ci]));
        }
        double rhs[4][4] = {};
        for (int a = 0; a < k; ++a) {
          int gv = gid[i][ids[a]];
          rhs[a][0] = g[gv];
          for (int r = 0; r < 3; ++r)
            if (ids[a] == kRowSlots[r][0] || ids[a] == kRowSlots[r][1]) rhs[a][r + 1] = 1.0;
        }
        for (int col = 0; col < k; ++col) {
          int piv = col;
          for (int rr = col + 1; rr < k; ++rr)
            if (std::fabs(block[rr][col]) > std::fabs(block[piv][col])) piv = rr;
          std::swap(block[col], block[piv]);
          std::swap(rhs[col], rhs[piv]);
          for (int rr = col + 1; rr < k; ++rr) {
            double f = block[rr][col] / block[col][col];
            for (int cc = col; cc < k; ++cc) block[rr][cc] -= f * block[col][cc];
            for (int cc = 0; cc < 4; ++cc) rhs[rr][cc] -= f * rhs[col][cc];
          }
        }
        for (int col = k - 1; col >= 0; --col)
          for (int cc = 0; cc < 4; ++cc) {
            double s = rhs[col][cc];
            for (int c2 = col + 1; c2 < k; ++c2) s -= block[col][c2] * rhs[c2][cc];
            rhs[col][cc] = s / block[col][col];
          }
        for (int a = 0; a < k; ++a)
          for (int cc = 0; cc < 4; ++cc) w[gid[i][ids[a]]][cc] = rhs[a][cc];
      }

      double mm[3][3] = {}, av[3] = {};
      for (int r = 0; r < 3; ++r) {
        if (!row_on[r]) {
          mm[r][r] = 1.0;  // decoupled; forces y3[r] = 0
          continue;
        }
        mm[r][r] = rslack[r] * rslack[r];
        for (int i = 0; i < n; ++i)
          for (int slot : kRowSlots[r])
            if (gid[i][slot] >= 0) {
              int gv = gid[i][slot];
              av[r] += w[gv][0];
              for (int r2 = 0; r2 < 3; ++r2) mm[r][r2] += w[gv][r2 + 1];
            }
      }
      double y3[3] = {av[0], av[1], av[2]};
      {
        double m2[3][4];
        for (int r = 0; r < 3; ++r) {
          for (int cc = 0; cc < 3; ++cc) m2[r][cc] = mm[r][cc];
          m2[r][3] = y3[r];
        }
        for (int col = 0; col < 3; ++col) {
          int piv = col;
          for (int rr = col + 1; rr < 3; ++rr)
            if (std::fabs(m2[rr][col]) > std::fabs(m2[piv][col])) piv = rr;
          std::swap(m2[col], m2[piv]);
          for (int rr = col + 1; rr < 3; ++rr) {
            double f = m2[rr][col] / m2[col][col];
            for (int cc = col; cc < 4; ++cc) m2[rr][cc] -= f * m2[col][cc];
          }
        }
        for (int col = 2; col >= 0; --col) {
          double s = m2[col][3];
          for (int c2 = col + 1; c2 < 3; ++c2) s -= m2[col][c2] * y3[c2];
          y3[col] = s / m2[col][col];
        }
      }
      for (int s = 0; s < nv; ++s)
        delta[s] = -(w[s][0] - (w[s][1] * y3[0] + w[s][2] * y3[1] + w[s][3] * y3[2]));

      double decrement = 0;
      for (int s = 0; s < nv; ++s) decrement -= g[s] * delta[s];
      if (!(decrement / 2 >= 1e-10)) break;  // converged, or direction went bad

      double amax = 1.0;
      for (int s = 0; s < nv; ++s)
        if (delta[s] < 0) amax = std::min(amax, -v[s] / delta[s]);
      for (const auto& c : caps) {
        double dd = delta[c.a] + (c.b >= 0 ? delta[c.b] : 0.0);
        if (dd > 0) amax = std::min(amax, cap_slack(c, v) / dd);
      }
      for (int r = 0; r < 3; ++r) {
        if (!row_on[r]) continue;
        double dd = 0;
        for (int i = 0; i < n; ++i)
          for (int slot : kRowSlots[r])
            if (gid[i][slot] >= 0) dd += delta[gid[i][slot]];
        if (dd > 0) amax = std::min(amax, rslack[r] / dd);
      }
      double alpha = 0.99 * amax;
      double phi0 = phi(t, v);
      std::vector<double> cand(nv);
      for (int ls = 0; ls < 60; ++ls) {
        for (int s = 0; s < nv; ++s) cand[s] = v[s] + alpha * delta[s];
        if (phi(t, cand) <= phi0 - 0.25 * alpha * decrement) break;
        alpha *= 0.5;
      }
      for (int s = 0; s < nv; ++s) v[s] += alpha * delta[s];
      if (alpha < 1e-13) break;  // line search stalled
    }
    if (static_cast<double>(n_barrier) / t < 1e-8) break;
  }

  for (int s = 0; s < nv; ++s) {
    int i = var_source[s];
    switch (var_slot[s]) {
      case 0: plan.x_j[i] = v[s]; break;
      case 1: plan.x_k[i] = v[s]; break;
      case 2: plan.y_jk[i] = v[s]; break;
      case 3: plan.y_kj[i] = v[s]; break;
    }
  }
  for (int i = 0; i < n; ++i)
    for (int w = 0; w < 2; ++w) {
      if (gid[i][kTermSlots[w][0]] < 0 && gid[i][kTermSlots[w][1]] < 0) continue;
      plan.objective += std::log(term_value(i, w, v));
    }
  return plan;
}

}  // namespace dsched
