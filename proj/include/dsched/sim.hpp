#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dsched/model.hpp"
#include "dsched/scheduler.hpp"

namespace dsched {

/// How per-slot unit costs wander around their baselines.
enum class CostDynamics {
  OnePlusU,   // baseline * (1 + U(0,1))
  HalfPlusU,  // baseline * (0.5 + U(0,1)), mean-preserving
  Fixed       // baseline, no dynamics
};

/// How arrivals relate to the mean rate zeta.
enum class ArrivalModel {
  TwoZetaU,     // round(2 * zeta * U(0,1)), mean zeta
  HalfPlusUZeta // round(zeta * (0.5 + U(0,1))), mean zeta, lower variance
};

CostDynamics cost_dynamics_from_string(const std::string& s);
ArrivalModel arrival_model_from_string(const std::string& s);
std::string to_string(CostDynamics d);
std::string to_string(ArrivalModel a);

/// Environment description: base rates, cost baselines and load dynamics.
/// Capacity per slot = base * (1 - load) * slot_length (divided by the sample
/// size for links). Loads are uniform in [0,1) or replayed from a file.
struct TraceSpec {
  std::vector<double> am_rates;       // candidate source->worker rates, bits/s
  double mc_rate = 0;                 // worker<->worker rate, bits/s
  std::vector<double> worker_cycles;  // candidate compute rates, cycles/s
  double c_base = 0;                  // unit collection cost baseline
  double e_base = 0;                  // unit offload cost baseline
  double p_base = 0;                  // unit training cost baseline
  CostDynamics cost_dynamics = CostDynamics::OnePlusU;
  ArrivalModel arrival_model = ArrivalModel::TwoZetaU;
  std::string load_file;  // optional; whitespace-separated columns, row = slot

  void validate() const;
};

struct Episode {
  FrameworkConfig config;
  TraceSpec trace;
  uint64_t seed = 1;
  PolicyKind policy = PolicyKind::DS;
  double sigma0 = 1.0;
  double sigma_exponent = 1.0;
};

std::vector<double> gen_arrivals(const FrameworkConfig& cfg, ArrivalModel model, Rng& rng);

/// Per-episode random but slot-invariant structure: which base rate each link
/// uses and which compute rate each worker has.
struct StaticAssignment {
  Mat link_rate;                 // N x M bits/s
  std::vector<double> cycles;    // M cycles/s

  static StaticAssignment draw(const FrameworkConfig& cfg, const TraceSpec& spec, Rng& rng);
};

/// Reads a shared load file: one row per slot, one column per entity, values
/// in [0,1]. Entity order: N*M source links row-major, then worker pairs
/// (j,k) with j < k, then M compute nodes. Missing columns/rows wrap around.
class LoadTrace {
 public:
  LoadTrace() = default;
  static LoadTrace from_file(const std::string& path);

  bool empty() const { return rows_.empty(); }
  double at(int slot, int entity) const;
  bool wrapped() const { return wrapped_; }

 private:
  std::vector<std::vector<double>> rows_;
  mutable bool wrapped_ = false;
};

SystemState gen_capacities(const FrameworkConfig& cfg, const TraceSpec& spec,
                           const StaticAssignment& st, const LoadTrace& loads, int t,
                           Rng& load_rng, Rng& cost_rng);

struct EpisodeSummary {
  std::string policy;
  uint64_t seed = 0;
  double epsilon = 0;
  double time_avg_cost = 0;
  double total_cost = 0;
  double total_trained = 0;
  double unit_cost = 0;  // total_cost / total_trained (0 when nothing trained)
  double final_q = 0;
  double final_r = 0;
  double tail_avg_backlog = 0;  // mean q + r over the last quarter of the run
  double max_skew_deviation = 0;
  std::vector<double> uploads_per_source;
  double upload_stdev = 0;
  long starved = 0;
  double avg_decision_seconds = 0;
};

struct EpisodeResult {
  std::vector<SlotMetrics> slots;
  EpisodeSummary summary;
};

/// Runs one full episode. Aborts with InvariantViolation naming the slot if a
/// decision ever violates the per-slot constraints.
EpisodeResult run_episode(const Episode& ep);

struct ComparisonRow {
  std::string policy;
  int n_runs = 0;
  double time_avg_cost = 0;
  double total_trained = 0;
  double unit_cost = 0;
  double upload_stdev = 0;
  double max_skew_deviation = 0;
  double total_backlog = 0;  // final q + r
};

/// Averages summaries by policy, preserving first-seen policy order.
std::vector<ComparisonRow> summarize_comparison(const std::vector<EpisodeSummary>& runs);

}  // namespace dsched
