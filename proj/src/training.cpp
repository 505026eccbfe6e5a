#include "dsched/training.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <thread>

namespace dsched {

TrainingWeights training_weights(const MultiplierSet& mult, const SystemState& state,
                                 const FrameworkConfig& cfg) {
  const int n = cfg.n_sources, m = cfg.n_workers;
  TrainingWeights w;
  w.beta = Mat(n, m);
  w.gamma = Ten3(n, m, m);

  // Per-trainer term shared by every source: sum_l (lam * delta_hi - phi * delta_lo).
  std::vector<double> col(m, 0.0);
  for (int j = 0; j < m; ++j)
    for (int l = 0; l < n; ++l)
      col[j] += mult.lam(l, j) * cfg.delta_hi() - mult.phi(l, j) * cfg.delta_lo();

  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) {
      double skew = -mult.lam(i, j) + mult.phi(i, j) + col[j];
      w.beta(i, j) = -state.p[j] + mult.eta(i, j) + skew;
      for (int h = 0; h < m; ++h) {
        if (h == j) continue;
        w.gamma(i, h, j) = -state.p[j] - state.e(h, j) + mult.eta(i, h) + skew;
      }
    }
  return w;
}

SoloPlan solve_solo_linear(const std::vector<double>& beta, const std::vector<double>& caps,
                           double budget) {
  require(beta.size() == caps.size(), "solve_solo_linear: shape mismatch");
  SoloPlan plan;
  plan.x.assign(beta.size(), 0.0);
  if (budget <= 0) return plan;
  std::vector<int> order(beta.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return beta[a] > beta[b]; });
  double left = budget;
  for (int i : order) {
    if (beta[i] <= 0 || left <= 0) break;
    double take = std::min(caps[i], left);
    if (take <= 0) continue;
    plan.x[i] = take;
    plan.objective += beta[i] * take;
    left -= take;
  }
  return plan;
}

SoloPlan solve_solo_log(const std::vector<double>& beta, const std::vector<double>& caps,
                        double budget) {
  require(beta.size() == caps.size(), "solve_solo_log: shape mismatch");
  SoloPlan plan;
  plan.x.assign(beta.size(), 0.0);
  std::vector<int> active;
  for (size_t i = 0; i < beta.size(); ++i)
    if (beta[i] > 0 && caps[i] > 0) active.push_back(static_cast<int>(i));
  if (active.empty() || budget <= 0) return plan;

  // Water-filling: x_i = min(cap_i, nu) with nu set so the budget binds
  // (or every active source is capped when the budget is loose).
  std::sort(active.begin(), active.end(), [&](int a, int b) { return caps[a] < caps[b]; });
  double left = budget;
  size_t t = 0;
  for (; t < active.size(); ++t) {
    double level = left / static_cast<double>(active.size() - t);
    if (caps[active[t]] >= level) break;
    plan.x[active[t]] = caps[active[t]];
    left -= caps[active[t]];
  }
  if (t < active.size()) {
    double level = left / static_cast<double>(active.size() - t);
    for (; t < active.size(); ++t) plan.x[active[t]] = level;
  }
  for (int i : active) plan.objective += std::log(beta[i] * plan.x[i]);
  return plan;
}

CooperationGraph build_cooperation_graph(const TrainingWeights& w, const QueueState& queues,
                                         const SystemState& state, const FrameworkConfig& cfg,
                                         UtilityFlavor flavor) {
  const int n = cfg.n_sources, m = cfg.n_workers;
  CooperationGraph g;
  g.n_workers = m;
  g.solo.resize(m);
  g.pair.assign(m, std::vector<PairPlan>(m));

  auto col = [&](const Mat& mat, int j) {
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) out[i] = mat(i, j);
    return out;
  };

  for (int j = 0; j < m; ++j) {
    auto beta_j = col(w.beta, j);
    auto caps_j = col(queues.r, j);
    double budget = state.f[j] / cfg.rho;
    g.solo[j] = flavor == UtilityFlavor::Linear ? solve_solo_linear(beta_j, caps_j, budget)
                                                : solve_solo_log(beta_j, caps_j, budget);
    g.edges.push_back({j, m + j, g.solo[j].objective});
  }

  std::vector<std::pair<int, int>> pairs;
  for (int j = 0; j < m; ++j)
    for (int k = j + 1; k < m; ++k)
      if (state.big_d(j, k) > 0) pairs.push_back({j, k});  // no link, pairing pointless

  // Pair subproblems are independent; solve them on a small worker pool and
  // merge in (j, k) order so the result is deterministic.
  auto solve_pair = [&](int j, int k) {
    PairInstance inst;
    inst.b_j = col(w.beta, j);
    inst.b_k = col(w.beta, k);
    inst.g_jk.resize(n);
    inst.g_kj.resize(n);
    for (int i = 0; i < n; ++i) {
      inst.g_jk[i] = w.gamma(i, j, k);
      inst.g_kj[i] = w.gamma(i, k, j);
    }
    inst.cap_j = col(queues.r, j);
    inst.cap_k = col(queues.r, k);
    inst.budget_j = state.f[j] / cfg.rho;
    inst.budget_k = state.f[k] / cfg.rho;
    inst.transfer = state.big_d(j, k);
    PairPlan plan = flavor == UtilityFlavor::Linear ? solve_pair_linear(inst)
                                                    : solve_pair_log(inst);
    plan.j = j;
    plan.k = k;
    g.pair[j][k] = std::move(plan);
  };
  unsigned hw = std::thread::hardware_concurrency();
  size_t n_threads = std::min<size_t>(hw ? hw : 1, pairs.size());
  if (n_threads <= 1) {
    for (auto [j, k] : pairs) solve_pair(j, k);
  } else {
    std::vector<std::thread> workers;
    std::atomic<size_t> next{0};
    for (size_t t = 0; t < n_threads; ++t)
      workers.emplace_back([&] {
        for (size_t idx; (idx = next.fetch_add(1)) < pairs.size();)
          solve_pair(pairs[idx].first, pairs[idx].second);
      });
    for (auto& th : workers) th.join();
  }
  for (auto [j, k] : pairs) g.edges.push_back({j, k, g.pair[j][k].objective});
  return g;
}

void decode_training(const CooperationGraph& g, const std::vector<int>& mate,
                     SlotDecision& dec) {
  const int m = g.n_workers;
  const int n = dec.x.rows();
  require(static_cast<int>(mate.size()) == 2 * m, "decode_training: mate size mismatch");
  for (int j = 0; j < m; ++j) {
    int partner = mate[j];
    if (partner == -1) continue;
    if (partner == m + j) {
      for (int i = 0; i < n; ++i) dec.x(i, j) += g.solo[j].x[i];
    } else if (partner > j && partner < m) {
      const PairPlan& p = g.pair[j][partner];
      dec.z(j, partner) = dec.z(partner, j) = 1.0;
      for (int i = 0; i < n; ++i) {
        dec.x(i, j) += p.x_j[i];
        dec.x(i, partner) += p.x_k[i];
        dec.y(i, j, partner) += p.y_jk[i];
        dec.y(i, partner, j) += p.y_kj[i];
      }
    }
  }
}

}  // namespace dsched
