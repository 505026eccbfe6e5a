#include "dsched/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace dsched {

void FrameworkConfig::validate() const {
  if (n_sources < 1) throw StructuralError("n_sources must be >= 1");
  if (n_workers < 1) throw StructuralError("n_workers must be >= 1");
  if (!(delta > 0 && delta < 1.0 / n_sources))
    throw StructuralError("delta must satisfy 0 < delta < 1/n_sources");
  if (!(epsilon > 0)) throw StructuralError("epsilon must be > 0");
  if (!(rho > 0)) throw StructuralError("rho must be > 0");
  if (zeta < 0) throw StructuralError("zeta must be >= 0");
  if (q0 < 0) throw StructuralError("q0 must be >= 0");
  if (horizon < 1) throw StructuralError("horizon must be >= 1");
  if (!(slot_length > 0)) throw StructuralError("slot_length must be > 0");
  if (!(sample_size > 0)) throw StructuralError("sample_size must be > 0");
}

QueueState QueueState::initial(const FrameworkConfig& cfg) {
  QueueState qs;
  qs.q.assign(cfg.n_sources, cfg.q0);
  qs.r = Mat(cfg.n_sources, cfg.n_workers);
  return qs;
}

MultiplierSet MultiplierSet::zeros(int n, int m) {
  MultiplierSet ms;
  ms.mu.assign(n, 0.0);
  ms.eta = Mat(n, m);
  ms.phi = Mat(n, m);
  ms.lam = Mat(n, m);
  return ms;
}

SlotDecision SlotDecision::zeros(int n, int m) {
  SlotDecision d;
  d.alpha = Mat(n, m);
  d.theta = Mat(n, m);
  d.x = Mat(n, m);
  d.y = Ten3(n, m, m);
  d.z = Mat(m, m);
  return d;
}

Mat collected_amounts(const SlotDecision& dec, const SystemState& state) {
  require(dec.alpha.same_shape(state.d) && dec.theta.same_shape(state.d),
          "collected_amounts: shape mismatch");
  Mat out(state.d.rows(), state.d.cols());
  for (int i = 0; i < out.rows(); ++i)
    for (int j = 0; j < out.cols(); ++j)
      out(i, j) = dec.alpha(i, j) * dec.theta(i, j) * state.d(i, j);
  return out;
}

Mat trained_amounts(const SlotDecision& dec) {
  const int n = dec.x.rows(), m = dec.x.cols();
  Mat out(n, m);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) {
      double s = dec.x(i, j);
      for (int k = 0; k < m; ++k) s += dec.y(i, k, j);
      out(i, j) = s;
    }
  return out;
}

Mat queue_service(const SlotDecision& dec) {
  const int n = dec.x.rows(), m = dec.x.cols();
  Mat out(n, m);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) {
      double s = dec.x(i, j);
      for (int k = 0; k < m; ++k) s += dec.y(i, j, k);
      out(i, j) = s;
    }
  return out;
}

QueueState advance_source_queues(const QueueState& queues, const Mat& served,
                                 const std::vector<double>& arrivals) {
  require(static_cast<int>(queues.q.size()) == served.rows() &&
              arrivals.size() == queues.q.size(),
          "advance_source_queues: shape mismatch");
  QueueState out = queues;
  for (int i = 0; i < served.rows(); ++i)
    out.q[i] = std::max(queues.q[i] - served.row_sum(i), 0.0) + arrivals[i];
  return out;
}

QueueState advance_worker_queues(const QueueState& queues, const SlotDecision& dec,
                                 const Mat& collected) {
  require(queues.r.same_shape(collected), "advance_worker_queues: shape mismatch");
  QueueState out = queues;
  Mat service = queue_service(dec);
  for (int i = 0; i < queues.r.rows(); ++i)
    for (int j = 0; j < queues.r.cols(); ++j) {
      double drained = queues.r(i, j) - service(i, j);
      if (drained < -1e-6 * std::max(1.0, queues.r(i, j)))
        throw InvariantViolation("advance_worker_queues: service exceeds backlog");
      out.r(i, j) = std::max(drained, 0.0) + collected(i, j);
    }
  return out;
}

void framework_cost(const SlotDecision& dec, const SystemState& state, const Mat& collected,
                    SlotMetrics& out) {
  const int n = dec.x.rows(), m = dec.x.cols();
  require(collected.rows() == n && collected.cols() == m, "framework_cost: shape mismatch");
  out.cost_collect = out.cost_offload = out.cost_train = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) out.cost_collect += state.c(i, j) * collected(i, j);
  for (int j = 0; j < m; ++j)
    for (int k = 0; k < m; ++k) {
      double moved = 0;
      for (int i = 0; i < n; ++i) moved += dec.y(i, j, k);
      out.cost_offload += state.e(j, k) * moved;
    }
  Mat omega = trained_amounts(dec);
  for (int j = 0; j < m; ++j) out.cost_train += state.p[j] * omega.col_sum(j);
}

Mat skew_deviation(const SkewLedger& ledger, const FrameworkConfig& cfg) {
  const double share = 1.0 / cfg.n_sources;
  Mat out(ledger.omega_cum.rows(), ledger.omega_cum.cols());
  for (int j = 0; j < out.cols(); ++j) {
    double total = ledger.omega_cum.col_sum(j);
    if (total <= 0) continue;  // worker trained nothing: deviation defined as 0
    for (int i = 0; i < out.rows(); ++i)
      out(i, j) = std::fabs(ledger.omega_cum(i, j) / total - share);
  }
  return out;
}

std::vector<double> aggregate_parameters(const std::vector<double>& weights,
                                         const std::vector<std::vector<double>>& params) {
  require(weights.size() == params.size(), "aggregate_parameters: shape mismatch");
  double wsum = 0;
  for (double w : weights) {
    require(w >= 0, "aggregate_parameters: negative weight");
    wsum += w;
  }
  if (wsum <= 0) throw DegenerateInputError("aggregate_parameters: all weights zero");
  size_t len = params.empty() ? 0 : params[0].size();
  std::vector<double> out(len, 0.0);
  for (size_t j = 0; j < params.size(); ++j) {
    require(params[j].size() == len, "aggregate_parameters: vector length mismatch");
    for (size_t k = 0; k < len; ++k) out[k] += weights[j] * params[j][k];
  }
  for (double& v : out) v /= wsum;
  return out;
}

std::string check_decision(const SlotDecision& dec, const QueueState& queues,
                           const SystemState& state, const FrameworkConfig& cfg,
                           double tol) {
  const int n = cfg.n_sources, m = cfg.n_workers;
  std::ostringstream why;
  auto fail = [&](auto&&... parts) {
    ((why << parts), ...);
    return why.str();
  };

  for (int i = 0; i < n; ++i) {
    double asum = 0, tsum;
    for (int j = 0; j < m; ++j) {
      double a = dec.alpha(i, j);
      if (a != 0.0 && a != 1.0) return fail("alpha not binary at (", i, ",", j, ")");
      if (dec.theta(i, j) < -tol || dec.theta(i, j) > 1 + tol)
        return fail("theta out of [0,1] at (", i, ",", j, ")");
      if (dec.theta(i, j) > tol && a == 0.0)
        return fail("theta positive without connection at (", i, ",", j, ")");
      asum += a;
    }
    if (asum > 1 + tol) return fail("source ", i, " connects to more than one worker");
    (void)tsum;
  }
  for (int j = 0; j < m; ++j) {
    double tsum = 0;
    for (int i = 0; i < n; ++i) tsum += dec.theta(i, j);
    if (tsum > 1 + tol) return fail("worker ", j, " time allocation exceeds slot");
  }

  for (int j = 0; j < m; ++j) {
    double zdeg = 0;
    for (int k = 0; k < m; ++k) {
      double zv = dec.z(j, k);
      if (zv != 0.0 && zv != 1.0) return fail("z not binary at (", j, ",", k, ")");
      if (zv != dec.z(k, j)) return fail("z not symmetric at (", j, ",", k, ")");
      if (j == k && zv != 0.0) return fail("z diagonal nonzero at ", j);
      zdeg += zv;
    }
    if (zdeg > 1) return fail("worker ", j, " has more than one cooperation partner");
  }

  for (int j = 0; j < m; ++j)
    for (int k = 0; k < m; ++k) {
      double moved = 0;
      for (int i = 0; i < n; ++i) {
        if (dec.y(i, j, k) < -tol) return fail("negative offload at (", i, ",", j, ",", k, ")");
        if (dec.y(i, j, k) > tol && dec.z(j, k) == 0.0)
          return fail("offload without connection at (", i, ",", j, ",", k, ")");
        moved += dec.y(i, j, k) + dec.y(i, k, j);
      }
      if (j < k && moved > state.big_d(j, k) + tol * std::max(1.0, state.big_d(j, k)))
        return fail("transfer capacity exceeded between ", j, " and ", k);
    }

  Mat omega = trained_amounts(dec);
  for (int j = 0; j < m; ++j) {
    double load = omega.col_sum(j) * cfg.rho;
    if (load > state.f[j] + tol * std::max(1.0, state.f[j]))
      return fail("compute capacity exceeded at worker ", j);
  }

  Mat service = queue_service(dec);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) {
      if (dec.x(i, j) < -tol) return fail("negative x at (", i, ",", j, ")");
      if (service(i, j) > queues.r(i, j) + tol * std::max(1.0, queues.r(i, j)))
        return fail("queue cap exceeded at (", i, ",", j, ")");
    }

  return {};
}

}  // namespace dsched
