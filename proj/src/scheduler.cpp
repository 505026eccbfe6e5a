#include "dsched/scheduler.hpp"

#include <algorithm>
#include <cmath>

#include "dsched/collection.hpp"
#include "dsched/training.hpp"

namespace dsched {

std::string to_string(PolicyKind p) {
  switch (p) {
    case PolicyKind::DS: return "ds";
    case PolicyKind::LDS: return "lds";
    case PolicyKind::NO_SDC: return "no-sdc";
    case PolicyKind::NO_SDT: return "no-sdt";
    case PolicyKind::NO_LSA: return "no-lsa";
    case PolicyKind::ODT: return "odt";
    case PolicyKind::ODC: return "odc";
  }
  return "?";
}

PolicyKind policy_from_string(const std::string& name) {
  if (name == "ds") return PolicyKind::DS;
  if (name == "lds") return PolicyKind::LDS;
  if (name == "no-sdc") return PolicyKind::NO_SDC;
  if (name == "no-sdt") return PolicyKind::NO_SDT;
  if (name == "no-lsa") return PolicyKind::NO_LSA;
  if (name == "odt") return PolicyKind::ODT;
  if (name == "odc") return PolicyKind::ODC;
  throw StructuralError("unknown policy: " + name);
}

double learning_pi(double epsilon) {
  require(epsilon > 0, "learning_pi: epsilon must be positive");
  double l = std::log10(epsilon);
  return std::sqrt(epsilon) * l * l;
}

double diminishing_step(int t, double sigma0, double exponent) {
  require(t >= 0 && sigma0 > 0, "diminishing_step: bad arguments");
  return sigma0 / std::pow(1.0 + t, exponent);
}

SchedulerState SchedulerState::init(const FrameworkConfig& cfg) {
  SchedulerState s;
  s.theta_actual = MultiplierSet::zeros(cfg.n_sources, cfg.n_workers);
  s.theta_empirical = MultiplierSet::zeros(cfg.n_sources, cfg.n_workers);
  s.pi = learning_pi(cfg.epsilon);
  return s;
}

MultiplierSet learning_aid_combine(const SchedulerState& sched) {
  MultiplierSet out = sched.theta_actual;
  const double pi = sched.pi;
  for (size_t i = 0; i < out.mu.size(); ++i) out.mu[i] += sched.theta_empirical.mu[i] - pi;
  auto combine = [&](Mat& dst, const Mat& add) {
    for (int i = 0; i < dst.rows(); ++i)
      for (int j = 0; j < dst.cols(); ++j) dst(i, j) += add(i, j) - pi;
  };
  combine(out.eta, sched.theta_empirical.eta);
  combine(out.phi, sched.theta_empirical.phi);
  combine(out.lam, sched.theta_empirical.lam);
  return out;
}

void fixed_collection(const FrameworkConfig& cfg, SlotDecision& dec) {
  std::vector<int> count(cfg.n_workers, 0);
  for (int i = 0; i < cfg.n_sources; ++i) ++count[i % cfg.n_workers];
  for (int i = 0; i < cfg.n_sources; ++i) {
    int j = i % cfg.n_workers;
    dec.alpha(i, j) = 1.0;
    dec.theta(i, j) = 1.0 / count[j];
  }
}

MultiplierSet update_multipliers(const MultiplierSet& mult, const SlotDecision& dec,
                                 const Mat& served, const Mat& collected,
                                 const std::vector<double>& arrivals,
                                 const FrameworkConfig& cfg, double step,
                                 bool skew_frozen) {
  require(step > 0, "update_multipliers: step must be positive");
  const int n = cfg.n_sources, m = cfg.n_workers;
  MultiplierSet out = mult;

  for (int i = 0; i < n; ++i)
    out.mu[i] = std::max(mult.mu[i] + step * (arrivals[i] - served.row_sum(i)), 0.0);

  Mat service = queue_service(dec);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j)
      out.eta(i, j) = std::max(mult.eta(i, j) + step * (collected(i, j) - service(i, j)), 0.0);

  if (!skew_frozen) {
    Mat omega = trained_amounts(dec);
    for (int j = 0; j < m; ++j) {
      double total = omega.col_sum(j);
      for (int i = 0; i < n; ++i) {
        out.phi(i, j) = std::max(
            mult.phi(i, j) + step * (cfg.delta_lo() * total - omega(i, j)), 0.0);
        out.lam(i, j) = std::max(
            mult.lam(i, j) + step * (omega(i, j) - cfg.delta_hi() * total), 0.0);
      }
    }
  }
  return out;
}

namespace {

enum class CollectKind { Skew, Baseline, Fixed };
enum class TrainKind { Full, SoloOnly };

SlotDecision solve_slot(const MultiplierSet& eff, const QueueState& queues,
                        const SystemState& state, const FrameworkConfig& cfg,
                        CollectKind ck, TrainKind tk, UtilityFlavor flavor) {
  SlotDecision dec = SlotDecision::zeros(cfg.n_sources, cfg.n_workers);

  if (ck == CollectKind::Fixed) {
    fixed_collection(cfg, dec);
  } else {
    Mat w = collection_weight(eff, state);
    BipartiteGraph g = ck == CollectKind::Skew ? build_skew_graph(w) : build_baseline_graph(w);
    auto match = hungarian_max_matching(g);
    CollectionPlan plan =
        ck == CollectKind::Skew ? decode_skew(g, match) : decode_baseline(g, match);
    dec.alpha = plan.alpha;
    dec.theta = plan.theta;
  }

  TrainingWeights tw = training_weights(eff, state, cfg);
  if (tk == TrainKind::SoloOnly) {
    for (int j = 0; j < cfg.n_workers; ++j) {
      std::vector<double> beta(cfg.n_sources), caps(cfg.n_sources);
      for (int i = 0; i < cfg.n_sources; ++i) {
        beta[i] = tw.beta(i, j);
        caps[i] = queues.r(i, j);
      }
      SoloPlan plan = solve_solo_log(beta, caps, state.f[j] / cfg.rho);
      if (plan.objective <= 0) continue;  // same rule as dropped matching edges
      for (int i = 0; i < cfg.n_sources; ++i) dec.x(i, j) = plan.x[i];
    }
  } else {
    CooperationGraph g = build_cooperation_graph(tw, queues, state, cfg, flavor);
    auto mate = max_weight_matching(2 * cfg.n_workers, g.edges);
    decode_training(g, mate, dec);
  }
  return dec;
}

struct PolicyShape {
  CollectKind collect;
  TrainKind train;
  UtilityFlavor flavor;
};

PolicyShape shape_of(PolicyKind p) {
  switch (p) {
    case PolicyKind::DS:
    case PolicyKind::LDS:
    case PolicyKind::NO_LSA: return {CollectKind::Skew, TrainKind::Full, UtilityFlavor::Log};
    case PolicyKind::NO_SDC: return {CollectKind::Baseline, TrainKind::Full, UtilityFlavor::Log};
    case PolicyKind::NO_SDT: return {CollectKind::Skew, TrainKind::Full, UtilityFlavor::Linear};
    case PolicyKind::ODT: return {CollectKind::Fixed, TrainKind::Full, UtilityFlavor::Log};
    case PolicyKind::ODC: return {CollectKind::Skew, TrainKind::SoloOnly, UtilityFlavor::Log};
  }
  return {CollectKind::Skew, TrainKind::Full, UtilityFlavor::Log};
}

MultiplierSet frozen_skew(const MultiplierSet& m) {
  MultiplierSet out = m;
  out.phi = Mat(out.phi.rows(), out.phi.cols());
  out.lam = Mat(out.lam.rows(), out.lam.cols());
  return out;
}

}  // namespace

StepResult datasche_step(PolicyKind policy, const SchedulerState& sched,
                         const QueueState& queues, const SystemState& state,
                         const FrameworkConfig& cfg) {
  PolicyShape shape = shape_of(policy);
  StepResult out;
  switch (policy) {
    case PolicyKind::LDS: {
      MultiplierSet combined = learning_aid_combine(sched);
      out.decision = solve_slot(combined, queues, state, cfg, shape.collect, shape.train,
                                shape.flavor);
      out.virtual_decision = solve_slot(sched.theta_empirical, queues, state, cfg,
                                        shape.collect, shape.train, shape.flavor);
      out.has_virtual = true;
      break;
    }
    case PolicyKind::NO_LSA:
      out.decision = solve_slot(frozen_skew(sched.theta_actual), queues, state, cfg,
                                shape.collect, shape.train, shape.flavor);
      break;
    default:
      out.decision = solve_slot(sched.theta_actual, queues, state, cfg, shape.collect,
                                shape.train, shape.flavor);
      break;
  }
  return out;
}

void commit_step(PolicyKind policy, SchedulerState& sched, const StepResult& result,
                 const Mat& served, const Mat& collected, const std::vector<double>& arrivals,
                 const SystemState& state, const FrameworkConfig& cfg) {
  bool freeze = policy == PolicyKind::NO_LSA;
  sched.theta_actual = update_multipliers(sched.theta_actual, result.decision, served,
                                          collected, arrivals, cfg, cfg.epsilon, freeze);
  if (policy == PolicyKind::LDS) {
    require(result.has_virtual, "commit_step: learning-aid result lacks the empirical solve");
    // The empirical decision never touches the real queues, so its gradients
    // use the amounts the decision itself implies.
    Mat virt_served = collected_amounts(result.virtual_decision, state);
    double sigma = diminishing_step(sched.slot, sched.sigma0, sched.sigma_exponent);
    sched.theta_empirical =
        update_multipliers(sched.theta_empirical, result.virtual_decision, virt_served,
                           virt_served, arrivals, cfg, sigma, false);
  }
  ++sched.slot;
}

}  // namespace dsched
