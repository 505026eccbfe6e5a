#include "dsched/config.hpp"

#include <fstream>
#include <map>
#include <sstream>

namespace dsched {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double parse_num(const std::string& key, const std::string& value) {
  try {
    size_t pos = 0;
    double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing junk");
    return v;
  } catch (const std::exception&) {
    throw StructuralError("config key '" + key + "': not a number: '" + value + "'");
  }
}

long parse_int(const std::string& key, const std::string& value) {
  double v = parse_num(key, value);
  long r = static_cast<long>(v);
  if (static_cast<double>(r) != v)
    throw StructuralError("config key '" + key + "': not an integer: '" + value + "'");
  return r;
}

std::vector<double> parse_list(const std::string& key, const std::string& value) {
  std::vector<double> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(parse_num(key, item));
  }
  if (out.empty()) throw StructuralError("config key '" + key + "': empty list");
  return out;
}

void set_key(Episode& ep, const std::string& key, const std::string& value) {
  auto& cfg = ep.config;
  auto& tr = ep.trace;
  if (key == "n_sources") cfg.n_sources = static_cast<int>(parse_int(key, value));
  else if (key == "n_workers") cfg.n_workers = static_cast<int>(parse_int(key, value));
  else if (key == "rho") cfg.rho = parse_num(key, value);
  else if (key == "zeta") cfg.zeta = parse_num(key, value);
  else if (key == "delta") cfg.delta = parse_num(key, value);
  else if (key == "epsilon") cfg.epsilon = parse_num(key, value);
  else if (key == "q0") cfg.q0 = parse_num(key, value);
  else if (key == "horizon") cfg.horizon = static_cast<int>(parse_int(key, value));
  else if (key == "slot_length") cfg.slot_length = parse_num(key, value);
  else if (key == "sample_size") cfg.sample_size = parse_num(key, value);
  else if (key == "am_rates") tr.am_rates = parse_list(key, value);
  else if (key == "mc_rate") tr.mc_rate = parse_num(key, value);
  else if (key == "worker_cycles") tr.worker_cycles = parse_list(key, value);
  else if (key == "c_base") tr.c_base = parse_num(key, value);
  else if (key == "e_base") tr.e_base = parse_num(key, value);
  else if (key == "p_base") tr.p_base = parse_num(key, value);
  else if (key == "cost_dynamics") tr.cost_dynamics = cost_dynamics_from_string(value);
  else if (key == "arrival_model") tr.arrival_model = arrival_model_from_string(value);
  else if (key == "load_file") tr.load_file = value;
  else if (key == "policy") ep.policy = policy_from_string(value);
  else if (key == "seed") ep.seed = static_cast<uint64_t>(parse_int(key, value));
  else if (key == "sigma0") ep.sigma0 = parse_num(key, value);
  else if (key == "sigma_exponent") ep.sigma_exponent = parse_num(key, value);
  else throw StructuralError("unknown config key '" + key + "'");
}

}  // namespace

Episode parse_config(const std::string& text, const std::string& origin) {
  Episode ep;
  std::map<std::string, bool> seen;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    size_t eq = line.find('=');
    if (eq == std::string::npos) {
      std::ostringstream why;
      why << origin << ":" << lineno << ": expected key=value, got '" << line << "'";
      throw StructuralError(why.str());
    }
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    set_key(ep, key, value);
    seen[key] = true;
  }
  for (const char* req : {"n_sources", "n_workers", "rho", "zeta", "delta", "epsilon",
                          "horizon", "am_rates", "worker_cycles"})
    if (!seen.count(req))
      throw StructuralError(origin + ": missing required config key '" + std::string(req) + "'");
  return ep;
}

Episode load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw StructuralError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path);
}

void apply_override(Episode& ep, const std::string& key, const std::string& value) {
  set_key(ep, key, value);
}

std::string dump_config(const Episode& ep) {
  std::ostringstream out;
  out.precision(17);
  auto list = [](const std::vector<double>& v) {
    std::ostringstream s;
    s.precision(17);
    for (size_t i = 0; i < v.size(); ++i) s << (i ? "," : "") << v[i];
    return s.str();
  };
  out << "n_sources = " << ep.config.n_sources << "\n";
  out << "n_workers = " << ep.config.n_workers << "\n";
  out << "rho = " << ep.config.rho << "\n";
  out << "zeta = " << ep.config.zeta << "\n";
  out << "delta = " << ep.config.delta << "\n";
  out << "epsilon = " << ep.config.epsilon << "\n";
  out << "q0 = " << ep.config.q0 << "\n";
  out << "horizon = " << ep.config.horizon << "\n";
  out << "slot_length = " << ep.config.slot_length << "\n";
  out << "sample_size = " << ep.config.sample_size << "\n";
  out << "am_rates = " << list(ep.trace.am_rates) << "\n";
  out << "mc_rate = " << ep.trace.mc_rate << "\n";
  out << "worker_cycles = " << list(ep.trace.worker_cycles) << "\n";
  out << "c_base = " << ep.trace.c_base << "\n";
  out << "e_base = " << ep.trace.e_base << "\n";
  out << "p_base = " << ep.trace.p_base << "\n";
  out << "cost_dynamics = " << to_string(ep.trace.cost_dynamics) << "\n";
  out << "arrival_model = " << to_string(ep.trace.arrival_model) << "\n";
  if (!ep.trace.load_file.empty()) out << "load_file = " << ep.trace.load_file << "\n";
  out << "policy = " << to_string(ep.policy) << "\n";
  out << "seed = " << ep.seed << "\n";
  out << "sigma0 = " << ep.sigma0 << "\n";
  out << "sigma_exponent = " << ep.sigma_exponent << "\n";
  return out.str();
}

}  // namespace dsched
