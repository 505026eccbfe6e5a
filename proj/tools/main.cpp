// Command-line front end: single runs, policy comparisons and step-size
// sweeps, with CSV/JSON export of per-slot metrics and summaries.
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "dsched/config.hpp"
#include "dsched/sim.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace dsched;

namespace {

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

void write_slot_csv(const fs::path& path, const EpisodeResult& result, int n, int m) {
  std::ofstream out(path);
  out.precision(12);
  out << "t,cost_collect,cost_offload,cost_train,total_q,total_r";
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) out << ",up_" << i << "_" << j;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) out << ",om_" << i << "_" << j;
  out << ",max_skew_deviation,starved_count\n";
  for (size_t t = 0; t < result.slots.size(); ++t) {
    const auto& s = result.slots[t];
    out << t << "," << s.cost_collect << "," << s.cost_offload << "," << s.cost_train << ","
        << s.backlog_q_total << "," << s.backlog_r_total;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < m; ++j) out << "," << s.uploaded(i, j);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < m; ++j) out << "," << s.omega(i, j);
    out << "," << s.max_skew_deviation << "," << s.starved << "\n";
  }
}

json summary_to_json(const EpisodeSummary& s) {
  return json{{"policy", s.policy},
              {"seed", s.seed},
              {"epsilon", s.epsilon},
              {"time_avg_cost", s.time_avg_cost},
              {"total_cost", s.total_cost},
              {"total_trained", s.total_trained},
              {"unit_cost", s.unit_cost},
              {"final_q", s.final_q},
              {"final_r", s.final_r},
              {"tail_avg_backlog", s.tail_avg_backlog},
              {"max_skew_deviation", s.max_skew_deviation},
              {"uploads_per_source", s.uploads_per_source},
              {"upload_stdev", s.upload_stdev},
              {"starved", s.starved},
              {"avg_decision_seconds", s.avg_decision_seconds}};
}

/// Runs the given episodes on a bounded pool; results keep input order.
std::vector<EpisodeResult> run_pool(const std::vector<Episode>& jobs, unsigned n_jobs) {
  std::vector<EpisodeResult> results(jobs.size());
  std::vector<std::string> errors(jobs.size());
  std::atomic<size_t> next{0};
  unsigned hw = std::thread::hardware_concurrency();
  unsigned n_threads = std::min<unsigned>(n_jobs ? n_jobs : (hw ? hw : 1),
                                          static_cast<unsigned>(jobs.size()));
  auto worker = [&] {
    for (size_t idx; (idx = next.fetch_add(1)) < jobs.size();) {
      try {
        results[idx] = run_episode(jobs[idx]);
      } catch (const std::exception& e) {
        errors[idx] = e.what();
      }
    }
  };
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (size_t i = 0; i < jobs.size(); ++i)
    if (!errors[i].empty())
      throw std::runtime_error("episode " + to_string(jobs[i].policy) + " seed " +
                               std::to_string(jobs[i].seed) + ": " + errors[i]);
  return results;
}

json comparison_to_json(const std::vector<ComparisonRow>& rows) {
  json out = json::array();
  for (const auto& r : rows)
    out.push_back({{"policy", r.policy},
                   {"n_runs", r.n_runs},
                   {"time_avg_cost", r.time_avg_cost},
                   {"total_trained", r.total_trained},
                   {"unit_cost", r.unit_cost},
                   {"upload_stdev", r.upload_stdev},
                   {"max_skew_deviation", r.max_skew_deviation},
                   {"total_backlog", r.total_backlog}});
  return out;
}

json pairwise_ratios(const std::vector<ComparisonRow>& rows) {
  json out = json::array();
  for (const auto& a : rows)
    for (const auto& b : rows) {
      if (a.policy == b.policy) continue;
      json entry{{"policy_a", a.policy}, {"policy_b", b.policy}};
      auto ratio = [](double x, double y) { return y != 0 ? x / y : 0.0; };
      entry["time_avg_cost_ratio"] = ratio(a.time_avg_cost, b.time_avg_cost);
      entry["total_trained_ratio"] = ratio(a.total_trained, b.total_trained);
      entry["unit_cost_ratio"] = ratio(a.unit_cost, b.unit_cost);
      entry["upload_stdev_ratio"] = ratio(a.upload_stdev, b.upload_stdev);
      out.push_back(entry);
    }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Online data scheduling simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  if (const char* env = std::getenv("DSCHED_OUT_DIR")) out_dir = env;
  if (out_dir.empty()) out_dir = "out";
  unsigned n_jobs = 0;

  app.add_option("--config", config_path, "episode config file")->required();
  app.add_option("--out-dir", out_dir, "output directory (env DSCHED_OUT_DIR)");
  app.add_option("--jobs", n_jobs, "worker pool size (default: hardware threads)");

  // run
  auto* run_cmd = app.add_subcommand("run", "run one episode");
  std::string policy_arg, seed_arg, horizon_arg, eps_arg;
  bool dump_effective = false;
  run_cmd->add_option("--policy", policy_arg, "policy override");
  run_cmd->add_option("--seed", seed_arg, "seed override");
  run_cmd->add_option("--horizon", horizon_arg, "horizon override");
  run_cmd->add_option("--epsilon", eps_arg, "step-size override");
  run_cmd->add_flag("--dump-effective-config", dump_effective,
                    "print the effective config and exit");

  // compare
  auto* cmp_cmd = app.add_subcommand("compare", "run several policies and compare");
  std::string policies_arg = "ds,no-sdc,no-sdt,no-lsa";
  std::string seeds_arg = "1";
  cmp_cmd->add_option("--policies", policies_arg, "comma-separated policies");
  cmp_cmd->add_option("--seeds", seeds_arg, "comma-separated seeds");
  cmp_cmd->add_option("--horizon", horizon_arg, "horizon override");
  cmp_cmd->add_option("--epsilon", eps_arg, "step-size override");

  // sweep-epsilon
  auto* swp_cmd = app.add_subcommand("sweep-epsilon", "sweep the step-size for ds and lds");
  std::string eps_list_arg = "0.1,0.2,0.4,0.8";
  std::string swp_seeds_arg = "1,2,3,4,5";
  swp_cmd->add_option("--eps", eps_list_arg, "comma-separated step sizes");
  swp_cmd->add_option("--seeds", swp_seeds_arg, "comma-separated seeds");
  swp_cmd->add_option("--horizon", horizon_arg, "horizon override");

  CLI11_PARSE(app, argc, argv);

  try {
    Episode base = load_config(config_path);
    if (!horizon_arg.empty()) apply_override(base, "horizon", horizon_arg);
    if (!eps_arg.empty()) apply_override(base, "epsilon", eps_arg);

    fs::create_directories(out_dir);

    if (run_cmd->parsed()) {
      if (!policy_arg.empty()) apply_override(base, "policy", policy_arg);
      if (!seed_arg.empty()) apply_override(base, "seed", seed_arg);
      if (dump_effective) {
        std::cout << dump_config(base);
        return 0;
      }
      base.config.validate();
      base.trace.validate();
      EpisodeResult result = run_episode(base);
      std::string stem = "run_" + to_string(base.policy) + "_seed" +
                         std::to_string(base.seed);
      write_slot_csv(fs::path(out_dir) / (stem + ".csv"), result, base.config.n_sources,
                     base.config.n_workers);
      std::ofstream(fs::path(out_dir) / (stem + ".json"))
          << summary_to_json(result.summary).dump(2) << "\n";
      std::cout << summary_to_json(result.summary).dump(2) << "\n";
      return 0;
    }

    if (cmp_cmd->parsed()) {
      auto policies = split_list(policies_arg);
      auto seeds = split_list(seeds_arg);
      if (policies.size() < 2) {
        std::cerr << "compare needs at least 2 policies\n";
        return 1;
      }
      std::vector<Episode> jobs;
      for (const auto& p : policies)
        for (const auto& s : seeds) {
          Episode ep = base;
          apply_override(ep, "policy", p);
          apply_override(ep, "seed", s);
          jobs.push_back(ep);
        }
      auto results = run_pool(jobs, n_jobs);
      std::vector<EpisodeSummary> summaries;
      for (auto& r : results) summaries.push_back(r.summary);
      auto rows = summarize_comparison(summaries);
      json out{{"rows", comparison_to_json(rows)}, {"ratios", pairwise_ratios(rows)}};
      std::ofstream(fs::path(out_dir) / "comparison.json") << out.dump(2) << "\n";
      std::ofstream csv(fs::path(out_dir) / "comparison.csv");
      csv.precision(12);
      csv << "policy,n_runs,time_avg_cost,total_trained,unit_cost,upload_stdev,"
             "max_skew_deviation,total_backlog\n";
      for (const auto& r : rows)
        csv << r.policy << "," << r.n_runs << "," << r.time_avg_cost << ","
            << r.total_trained << "," << r.unit_cost << "," << r.upload_stdev << ","
            << r.max_skew_deviation << "," << r.total_backlog << "\n";
      std::cout << out.dump(2) << "\n";
      return 0;
    }

    if (swp_cmd->parsed()) {
      auto eps_values = split_list(eps_list_arg);
      auto seeds = split_list(swp_seeds_arg);
      std::vector<Episode> jobs;
      for (const auto& e : eps_values)
        for (const char* p : {"ds", "lds"})
          for (const auto& s : seeds) {
            Episode ep = base;
            apply_override(ep, "epsilon", e);
            apply_override(ep, "policy", p);
            apply_override(ep, "seed", s);
            jobs.push_back(ep);
          }
      auto results = run_pool(jobs, n_jobs);
      json out = json::array();
      std::ofstream csv(fs::path(out_dir) / "sweep.csv");
      csv.precision(12);
      csv << "epsilon,policy,time_avg_cost,total_backlog,total_trained,max_skew_deviation\n";
      size_t idx = 0;
      for (const auto& e : eps_values)
        for (const char* p : {"ds", "lds"}) {
          double cost = 0, backlog = 0, trained = 0, skew = 0;
          for (size_t s = 0; s < seeds.size(); ++s, ++idx) {
            const auto& sum = results[idx].summary;
            cost += sum.time_avg_cost;
            backlog += sum.final_q + sum.final_r;
            trained += sum.total_trained;
            skew += sum.max_skew_deviation;
          }
          double ns = static_cast<double>(seeds.size());
          out.push_back({{"epsilon", std::stod(e)},
                         {"policy", p},
                         {"time_avg_cost", cost / ns},
                         {"total_backlog", backlog / ns},
                         {"total_trained", trained / ns},
                         {"max_skew_deviation", skew / ns}});
          csv << e << "," << p << "," << cost / ns << "," << backlog / ns << ","
              << trained / ns << "," << skew / ns << "\n";
        }
      std::ofstream(fs::path(out_dir) / "sweep.json") << out.dump(2) << "\n";
      std::cout << out.dump(2) << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
