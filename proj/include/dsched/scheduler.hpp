#pragma once

#include <string>

#include "dsched/model.hpp"

namespace dsched {

/// DS          skew-aware collection + proportional-fair training
/// LDS         DS driven by the learning-aid combined multipliers
/// NO_SDC      baseline (non-skew) collection + proportional-fair training
/// NO_SDT      skew-aware collection + linear training
/// NO_LSA      DS with the long-term skew multipliers frozen at zero
/// ODT         fixed round-robin collection + proportional-fair training
/// ODC         skew-aware collection + stand-alone log training (no offloading)
enum class PolicyKind { DS, LDS, NO_SDC, NO_SDT, NO_LSA, ODT, ODC };

std::string to_string(PolicyKind p);
PolicyKind policy_from_string(const std::string& name);  // throws StructuralError

/// pi = sqrt(eps) * (log10 eps)^2, the anchor subtracted when combining the
/// actual and empirical multipliers (0.4 at eps = 0.01).
double learning_pi(double epsilon);

/// sigma0 / (1 + t)^exponent; exponent in (0.5, 1] keeps the Robbins-Monro
/// conditions (sum diverges, terms vanish).
double diminishing_step(int t, double sigma0, double exponent = 1.0);

struct SchedulerState {
  MultiplierSet theta_actual;     // updated with the fixed step epsilon
  MultiplierSet theta_empirical;  // updated with the diminishing step
  int slot = 0;
  double pi = 0;
  double sigma0 = 1.0;
  double sigma_exponent = 1.0;

  static SchedulerState init(const FrameworkConfig& cfg);
};

/// theta_actual + theta_empirical - pi, element-wise, not clipped: negative
/// values only enter weight formulas, where they correctly suppress activity.
MultiplierSet learning_aid_combine(const SchedulerState& sched);

/// Round-robin static assignment: source i connects to worker i mod M and
/// every worker splits its slot evenly among its assigned sources.
void fixed_collection(const FrameworkConfig& cfg, SlotDecision& dec);

/// One projected-subgradient update of every multiplier family.
///   mu   += step * (arrivals - row sums of served), at source queues
///   eta  += step * (collected - service), at worker queues
///   phi  += step * (delta_lo * total_j - omega_ij)   } skipped when
///   lam  += step * (omega_ij - delta_hi * total_j)   } skew_frozen
/// all projected at zero. `served` is what the decision asked to upload,
/// `collected` what actually arrived (capped at the source backlog).
MultiplierSet update_multipliers(const MultiplierSet& mult, const SlotDecision& dec,
                                 const Mat& served, const Mat& collected,
                                 const std::vector<double>& arrivals,
                                 const FrameworkConfig& cfg, double step,
                                 bool skew_frozen = false);

struct StepResult {
  SlotDecision decision;          // executed against the real queues
  SlotDecision virtual_decision;  // learning-aid only: the empirical solve
  bool has_virtual = false;
};

/// Solves the slot's collection + training subproblems under the policy's
/// effective multipliers. Pure: no state is mutated.
StepResult datasche_step(PolicyKind policy, const SchedulerState& sched,
                         const QueueState& queues, const SystemState& state,
                         const FrameworkConfig& cfg);

/// Applies the post-slot multiplier updates (both families for the
/// learning-aid policy) and advances the slot counter.
void commit_step(PolicyKind policy, SchedulerState& sched, const StepResult& result,
                 const Mat& served, const Mat& collected, const std::vector<double>& arrivals,
                 const SystemState& state, const FrameworkConfig& cfg);

}  // namespace dsched
