#pragma once

#include "dsched/matching.hpp"
#include "dsched/model.hpp"

namespace dsched {

/// Marginal utilities of training one sample.
/// beta(i, j): source i trained locally at worker j.
/// gamma(i, j, k): source i held at j, offloaded to and trained at k.
struct TrainingWeights {
  Mat beta;    // N x M
  Ten3 gamma;  // N x M(holder) x M(trainer)
};

TrainingWeights training_weights(const MultiplierSet& mult, const SystemState& state,
                                 const FrameworkConfig& cfg);

/// How per-sample utilities enter the objective.
enum class UtilityFlavor {
  Linear,  // sum of w * amount
  Log      // sum of ln(w * amount) over selected terms (diminishing returns)
};

struct SoloPlan {
  std::vector<double> x;  // per source, samples trained locally
  double objective = 0;
};

/// Single worker j with budget f_j / rho samples and per-source caps r(., j).
/// Linear: greedy by utility. Log: water-filling over the active set.
SoloPlan solve_solo_linear(const std::vector<double>& beta, const std::vector<double>& caps,
                           double budget);
SoloPlan solve_solo_log(const std::vector<double>& beta, const std::vector<double>& caps,
                        double budget);

struct PairPlan {
  int j = -1, k = -1;
  std::vector<double> x_j, x_k;    // trained where held
  std::vector<double> y_jk, y_kj;  // y_jk: held at j, trained at k
  double objective = 0;
};

/// Workers j and k cooperating. Per source i the variables are
/// x_j[i], x_k[i], y_jk[i], y_kj[i] with caps
///   x_j + y_jk <= r(i, j),  x_k + y_kj <= r(i, k),
/// coupled by the transfer budget sum(y_jk + y_kj) <= d_pair and the two
/// compute budgets sum(x_j + y_kj) <= f_j / rho, sum(x_k + y_jk) <= f_k / rho.
struct PairInstance {
  std::vector<double> b_j, b_k;  // beta(., j), beta(., k)
  std::vector<double> g_jk, g_kj;  // gamma(., j, k), gamma(., k, j)
  std::vector<double> cap_j, cap_k;  // r(., j), r(., k)
  double budget_j = 0, budget_k = 0;  // samples
  double transfer = 0;                // samples
};

PairPlan solve_pair_linear(const PairInstance& inst);
PairPlan solve_pair_log(const PairInstance& inst);

/// Cooperation graph: vertices 0..M-1 are workers, M + j is worker j's
/// stand-alone option. Edge (j, k) carries the joint pair objective, edge
/// (j, M + j) the solo objective, so one matching chooses a partner or solo
/// operation for every worker at maximum total utility.
struct CooperationGraph {
  int n_workers = 0;
  std::vector<WeightedEdge> edges;
  std::vector<SoloPlan> solo;                  // per worker
  std::vector<std::vector<PairPlan>> pair;     // pair[j][k], j < k used
};

CooperationGraph build_cooperation_graph(const TrainingWeights& w, const QueueState& queues,
                                         const SystemState& state, const FrameworkConfig& cfg,
                                         UtilityFlavor flavor);

/// Fills x, y, z of `dec` from a matching on the cooperation graph.
void decode_training(const CooperationGraph& g, const std::vector<int>& mate,
                     SlotDecision& dec);

}  // namespace dsched
