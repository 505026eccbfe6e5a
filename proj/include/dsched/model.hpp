#pragma once

#include "dsched/core.hpp"

namespace dsched {

/// Static parameters of one scheduling problem instance.
struct FrameworkConfig {
  int n_sources = 0;        // N
  int n_workers = 0;        // M
  double rho = 0;           // CPU cycles per trained sample
  double zeta = 0;          // expected samples generated per source per slot
  double delta = 0;         // skew tolerance
  double epsilon = 0;       // multiplier step-size
  double q0 = 0;            // initial source backlog, samples
  int horizon = 0;          // slots
  double slot_length = 1;   // seconds
  double sample_size = 1;   // bits per sample

  double delta_lo() const { return 1.0 / n_sources - delta; }  // lower skew bound
  double delta_hi() const { return 1.0 / n_sources + delta; }  // upper skew bound

  void validate() const;
};

/// Per-slot capacities and unit costs.
struct SystemState {
  Mat d;                   // N x M, AM-MC capacity, samples/slot
  Mat big_d;               // M x M symmetric, MC-MC capacity, zero diagonal
  std::vector<double> f;   // M, compute capacity, cycles/slot
  Mat c;                   // N x M, unit collection cost
  Mat e;                   // M x M, unit offload cost
  std::vector<double> p;   // M, unit training cost
};

struct QueueState {
  std::vector<double> q;  // N, source backlogs
  Mat r;                  // N x M, per-worker per-source backlogs

  static QueueState initial(const FrameworkConfig& cfg);
};

struct MultiplierSet {
  std::vector<double> mu;  // N
  Mat eta;                 // N x M
  Mat phi;                 // N x M
  Mat lam;                 // N x M

  static MultiplierSet zeros(int n, int m);
};

/// One slot's controls: collection (alpha, theta) and training (x, y, z).
/// y(i, j, k) moves samples of source i from holder j to trainer k.
struct SlotDecision {
  Mat alpha;  // N x M binary
  Mat theta;  // N x M in [0,1]
  Mat x;      // N x M, locally trained
  Ten3 y;     // N x M x M, offloaded
  Mat z;      // M x M binary symmetric

  static SlotDecision zeros(int n, int m);
};

struct SkewLedger {
  Mat omega_cum;  // N x M cumulative trained counts

  explicit SkewLedger(int n = 0, int m = 0) : omega_cum(n, m) {}
};

struct SlotMetrics {
  double cost_collect = 0;
  double cost_offload = 0;
  double cost_train = 0;
  Mat omega;     // N x M trained this slot
  Mat uploaded;  // N x M collected this slot
  double backlog_q_total = 0;
  double backlog_r_total = 0;
  double max_skew_deviation = 0;
  long starved = 0;

  double total_cost() const { return cost_collect + cost_offload + cost_train; }
};

/// Samples uploaded per (source, worker): alpha * theta * d.
Mat collected_amounts(const SlotDecision& dec, const SystemState& state);

/// Trained per (source, trainer): omega(i,j) = x(i,j) + sum_k y(i,k,j).
Mat trained_amounts(const SlotDecision& dec);

/// Offloaded out of each holder queue: x(i,j) + sum_k y(i,j,k) is the service of r(i,j).
Mat queue_service(const SlotDecision& dec);

QueueState advance_source_queues(const QueueState& queues, const Mat& served,
                                 const std::vector<double>& arrivals);

/// Requires the queue-cap constraint to hold; throws InvariantViolation otherwise.
QueueState advance_worker_queues(const QueueState& queues, const SlotDecision& dec,
                                 const Mat& collected);

/// Fills the three cost fields of `out` from the decision and unit costs.
void framework_cost(const SlotDecision& dec, const SystemState& state, const Mat& collected,
                    SlotMetrics& out);

/// |share - 1/N| per (source, worker); 0 for workers that trained nothing.
Mat skew_deviation(const SkewLedger& ledger, const FrameworkConfig& cfg);

/// Weighted mean of parameter vectors, weights = trained counts.
std::vector<double> aggregate_parameters(const std::vector<double>& weights,
                                         const std::vector<std::vector<double>>& params);

/// Checks every per-slot feasibility constraint against the given queues/state.
/// Returns an empty string when all hold, else a diagnostic.
std::string check_decision(const SlotDecision& dec, const QueueState& queues,
                           const SystemState& state, const FrameworkConfig& cfg,
                           double tol = 1e-6);

}  // namespace dsched
