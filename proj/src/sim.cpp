#include "dsched/sim.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

namespace dsched {

CostDynamics cost_dynamics_from_string(const std::string& s) {
  if (s == "one-plus-u") return CostDynamics::OnePlusU;
  if (s == "half-plus-u") return CostDynamics::HalfPlusU;
  if (s == "fixed") return CostDynamics::Fixed;
  throw StructuralError("unknown cost_dynamics: " + s);
}

ArrivalModel arrival_model_from_string(const std::string& s) {
  if (s == "two-zeta-u") return ArrivalModel::TwoZetaU;
  if (s == "half-plus-u-zeta") return ArrivalModel::HalfPlusUZeta;
  throw StructuralError("unknown arrival_model: " + s);
}

std::string to_string(CostDynamics d) {
  switch (d) {
    case CostDynamics::OnePlusU: return "one-plus-u";
    case CostDynamics::HalfPlusU: return "half-plus-u";
    case CostDynamics::Fixed: return "fixed";
  }
  return "?";
}

std::string to_string(ArrivalModel a) {
  switch (a) {
    case ArrivalModel::TwoZetaU: return "two-zeta-u";
    case ArrivalModel::HalfPlusUZeta: return "half-plus-u-zeta";
  }
  return "?";
}

void TraceSpec::validate() const {
  if (am_rates.empty()) throw StructuralError("trace: am_rates must not be empty");
  for (double r : am_rates)
    if (r < 0) throw StructuralError("trace: am_rates must be >= 0");
  if (mc_rate < 0) throw StructuralError("trace: mc_rate must be >= 0");
  if (worker_cycles.empty()) throw StructuralError("trace: worker_cycles must not be empty");
  for (double r : worker_cycles)
    if (r < 0) throw StructuralError("trace: worker_cycles must be >= 0");
  if (c_base < 0 || e_base < 0 || p_base < 0)
    throw StructuralError("trace: cost baselines must be >= 0");
}

std::vector<double> gen_arrivals(const FrameworkConfig& cfg, ArrivalModel model, Rng& rng) {
  std::vector<double> a(cfg.n_sources);
  for (double& v : a) {
    double u = rng.next_double();
    v = model == ArrivalModel::TwoZetaU ? std::round(2.0 * cfg.zeta * u)
                                        : std::round(cfg.zeta * (0.5 + u));
  }
  return a;
}

StaticAssignment StaticAssignment::draw(const FrameworkConfig& cfg, const TraceSpec& spec,
                                        Rng& rng) {
  StaticAssignment st;
  st.link_rate = Mat(cfg.n_sources, cfg.n_workers);
  for (int i = 0; i < cfg.n_sources; ++i)
    for (int j = 0; j < cfg.n_workers; ++j)
      st.link_rate(i, j) = spec.am_rates[rng.next_below(spec.am_rates.size())];
  st.cycles.resize(cfg.n_workers);
  for (int j = 0; j < cfg.n_workers; ++j)
    st.cycles[j] = spec.worker_cycles[rng.next_below(spec.worker_cycles.size())];
  return st;
}

LoadTrace LoadTrace::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw StructuralError("cannot open load file: " + path);
  LoadTrace tr;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    std::vector<double> row;
    double v;
    while (ss >> v) {
      if (v < 0 || v > 1) {
        std::ostringstream why;
        why << "load file " << path << " line " << lineno << ": value " << v
            << " outside [0,1]";
        throw StructuralError(why.str());
      }
      row.push_back(v);
    }
    if (!row.empty()) tr.rows_.push_back(std::move(row));
  }
  if (tr.rows_.empty()) throw StructuralError("load file has no data: " + path);
  return tr;
}

double LoadTrace::at(int slot, int entity) const {
  const auto& row = rows_[static_cast<size_t>(slot) % rows_.size()];
  if (static_cast<size_t>(slot) >= rows_.size() && !wrapped_) {
    wrapped_ = true;
    std::cerr << "load trace shorter than horizon; wrapping around\n";
  }
  return row[static_cast<size_t>(entity) % row.size()];
}

SystemState gen_capacities(const FrameworkConfig& cfg, const TraceSpec& spec,
                           const StaticAssignment& st, const LoadTrace& loads, int t,
                           Rng& load_rng, Rng& cost_rng) {
  const int n = cfg.n_sources, m = cfg.n_workers;
  SystemState s;
  s.d = Mat(n, m);
  s.big_d = Mat(m, m);
  s.f.resize(m);
  s.c = Mat(n, m);
  s.e = Mat(m, m);
  s.p.resize(m);

  int entity = 0;
  auto load = [&]() {
    double v = loads.empty() ? load_rng.next_double() : loads.at(t, entity);
    ++entity;
    return v;
  };
  auto dyn = [&]() {
    switch (spec.cost_dynamics) {
      case CostDynamics::OnePlusU: return 1.0 + cost_rng.next_double();
      case CostDynamics::HalfPlusU: return 0.5 + cost_rng.next_double();
      case CostDynamics::Fixed: return 1.0;
    }
    return 1.0;
  };

  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j)
      s.d(i, j) = std::floor(st.link_rate(i, j) * (1.0 - load()) * cfg.slot_length /
                             cfg.sample_size);
  for (int j = 0; j < m; ++j)
    for (int k = j + 1; k < m; ++k) {
      double cap = std::floor(spec.mc_rate * (1.0 - load()) * cfg.slot_length /
                              cfg.sample_size);
      s.big_d(j, k) = s.big_d(k, j) = cap;
    }
  for (int j = 0; j < m; ++j) s.f[j] = st.cycles[j] * (1.0 - load()) * cfg.slot_length;

  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) s.c(i, j) = spec.c_base * dyn();
  for (int j = 0; j < m; ++j)
    for (int k = j + 1; k < m; ++k) {
      double cost = spec.e_base * dyn();
      s.e(j, k) = s.e(k, j) = cost;
    }
  for (int j = 0; j < m; ++j) s.p[j] = spec.p_base * dyn();
  return s;
}

EpisodeResult run_episode(const Episode& ep) {
  ep.config.validate();
  ep.trace.validate();
  const auto& cfg = ep.config;
  const int n = cfg.n_sources, m = cfg.n_workers;

  // Independent named streams, derived from the seed alone so every policy
  // sees the same environment.
  Rng arrival_rng(Rng::substream(ep.seed, 1));
  Rng load_rng(Rng::substream(ep.seed, 2));
  Rng cost_rng(Rng::substream(ep.seed, 3));
  Rng static_rng(Rng::substream(ep.seed, 4));

  StaticAssignment st = StaticAssignment::draw(cfg, ep.trace, static_rng);
  LoadTrace loads;
  if (!ep.trace.load_file.empty()) loads = LoadTrace::from_file(ep.trace.load_file);

  QueueState queues = QueueState::initial(cfg);
  SchedulerState sched = SchedulerState::init(cfg);
  sched.sigma0 = ep.sigma0;
  sched.sigma_exponent = ep.sigma_exponent;
  SkewLedger ledger(n, m);

  EpisodeResult out;
  out.slots.reserve(cfg.horizon);
  std::vector<double> uploads(n, 0.0);
  double total_decision_seconds = 0;
  long starved_total = 0;

  for (int t = 0; t < cfg.horizon; ++t) {
    SystemState state = gen_capacities(cfg, ep.trace, st, loads, t, load_rng, cost_rng);
    std::vector<double> arrivals = gen_arrivals(cfg, ep.trace.arrival_model, arrival_rng);

    auto t0 = std::chrono::steady_clock::now();
    StepResult step = datasche_step(ep.policy, sched, queues, state, cfg);
    total_decision_seconds +=
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    std::string diag = check_decision(step.decision, queues, state, cfg);
    if (!diag.empty()) {
      std::ostringstream why;
      why << "slot " << t << ": " << diag;
      throw InvariantViolation(why.str());
    }

    Mat served = collected_amounts(step.decision, state);
    Mat collected = served;
    long starved = 0;
    for (int i = 0; i < n; ++i) {
      double want = served.row_sum(i);
      if (want > queues.q[i]) {
        // Source backlog cannot cover the requested upload; scale it down.
        double f = want > 0 ? queues.q[i] / want : 0.0;
        for (int j = 0; j < m; ++j) collected(i, j) = served(i, j) * f;
        ++starved;
      }
    }
    starved_total += starved;

    SlotMetrics metrics;
    framework_cost(step.decision, state, collected, metrics);
    metrics.omega = trained_amounts(step.decision);
    metrics.uploaded = collected;
    metrics.starved = starved;
    for (int i = 0; i < n; ++i) uploads[i] += collected.row_sum(i);

    for (int i = 0; i < n; ++i)
      for (int j = 0; j < m; ++j) ledger.omega_cum(i, j) += metrics.omega(i, j);
    Mat dev = skew_deviation(ledger, cfg);
    metrics.max_skew_deviation = *std::max_element(dev.data().begin(), dev.data().end());

    QueueState next = advance_source_queues(queues, served, arrivals);
    next.r = advance_worker_queues(queues, step.decision, collected).r;
    metrics.backlog_q_total = 0;
    for (double q : next.q) metrics.backlog_q_total += q;
    metrics.backlog_r_total = next.r.sum();

    commit_step(ep.policy, sched, step, served, collected, arrivals, state, cfg);
    queues = std::move(next);
    out.slots.push_back(std::move(metrics));
  }

  EpisodeSummary& sum = out.summary;
  sum.policy = to_string(ep.policy);
  sum.seed = ep.seed;
  sum.epsilon = cfg.epsilon;
  for (const auto& slot : out.slots) {
    sum.total_cost += slot.total_cost();
    sum.total_trained += slot.omega.sum();
  }
  sum.time_avg_cost = sum.total_cost / cfg.horizon;
  sum.unit_cost = sum.total_trained > 0 ? sum.total_cost / sum.total_trained : 0.0;
  for (double q : queues.q) sum.final_q += q;
  sum.final_r = queues.r.sum();
  sum.max_skew_deviation = out.slots.empty() ? 0 : out.slots.back().max_skew_deviation;
  if (!out.slots.empty()) {
    size_t tail = std::max<size_t>(1, out.slots.size() / 4);
    for (size_t s = out.slots.size() - tail; s < out.slots.size(); ++s)
      sum.tail_avg_backlog += out.slots[s].backlog_q_total + out.slots[s].backlog_r_total;
    sum.tail_avg_backlog /= tail;
  }
  sum.uploads_per_source = uploads;
  double mean = 0;
  for (double u : uploads) mean += u;
  mean /= n;
  double var = 0;
  for (double u : uploads) var += (u - mean) * (u - mean);
  sum.upload_stdev = std::sqrt(var / n);
  sum.starved = starved_total;
  sum.avg_decision_seconds = total_decision_seconds / cfg.horizon;
  return out;
}

std::vector<ComparisonRow> summarize_comparison(const std::vector<EpisodeSummary>& runs) {
  require(!runs.empty(), "summarize_comparison: no runs");
  std::vector<ComparisonRow> rows;
  for (const auto& run : runs) {
    ComparisonRow* row = nullptr;
    for (auto& r : rows)
      if (r.policy == run.policy) row = &r;
    if (!row) {
      rows.push_back({});
      row = &rows.back();
      row->policy = run.policy;
    }
    ++row->n_runs;
    row->time_avg_cost += run.time_avg_cost;
    row->total_trained += run.total_trained;
    row->unit_cost += run.unit_cost;
    row->upload_stdev += run.upload_stdev;
    row->max_skew_deviation += run.max_skew_deviation;
    row->total_backlog += run.final_q + run.final_r;
  }
  for (auto& r : rows) {
    r.time_avg_cost /= r.n_runs;
    r.total_trained /= r.n_runs;
    r.unit_cost /= r.n_runs;
    r.upload_stdev /= r.n_runs;
    r.max_skew_deviation /= r.n_runs;
    r.total_backlog /= r.n_runs;
  }
  return rows;
}

}  // namespace dsched
