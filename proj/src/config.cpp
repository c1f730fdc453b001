#include "adapt/config.hpp"

#include <fstream>
#include <stdexcept>

namespace adapt {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t");
  return s.substr(begin, end - begin + 1);
}

bool parse_bool(const std::string& v, const std::string& key) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw std::runtime_error("config: invalid boolean for " + key + ": " + v);
}

int parse_int(const std::string& v, const std::string& key) {
  try {
    size_t pos = 0;
    int out = std::stoi(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return out;
  } catch (const std::exception&) {
    throw std::runtime_error("config: invalid integer for " + key + ": " + v);
  }
}

double parse_double(const std::string& v, const std::string& key) {
  try {
    size_t pos = 0;
    double out = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return out;
  } catch (const std::exception&) {
    throw std::runtime_error("config: invalid number for " + key + ": " + v);
  }
}

}  // namespace

AdaptOptions AdaptConfig::adapt_options() const {
  AdaptOptions opts;
  opts.l_split = l_split;
  opts.l_collapse = l_collapse;
  opts.q_min_accept = q_min_accept;
  opts.max_sweeps = max_sweeps;
  opts.smooth_iters = smooth_iters;
  return opts;
}

void apply_config_entry(AdaptConfig& c, const std::string& key, const std::string& value) {
  if (key == "n_ptfx") {
    c.n_ptfx = parse_int(value, key);
  } else if (key == "n_adap") {
    c.n_adap = parse_int(value, key);
  } else if (key == "N_st") {
    c.N_st = parse_double(value, key);
  } else if (key == "p") {
    c.p = value == "inf" ? 0 : parse_int(value, key);
  } else if (key == "samples_per_interval") {
    c.samples_per_interval = parse_int(value, key);
  } else if (key == "t_end") {
    c.t_end = parse_double(value, key);
  } else if (key == "T_period") {
    c.T_period = parse_double(value, key);
  } else if (key == "initial_mesh") {
    c.initial_mesh = value;
  } else if (key == "remesh_final") {
    c.remesh_final = parse_bool(value, key);
  } else if (key == "dt") {
    c.dt = parse_double(value, key);
  } else if (key == "cfl") {
    c.cfl = parse_double(value, key);
  } else if (key == "theta") {
    c.theta = parse_double(value, key);
  } else if (key == "supg") {
    c.supg = parse_bool(value, key);
  } else if (key == "lin_tol") {
    c.lin_tol = parse_double(value, key);
  } else if (key == "h_min") {
    c.h_min = parse_double(value, key);
  } else if (key == "h_max") {
    c.h_max = parse_double(value, key);
  } else if (key == "a_max") {
    c.a_max = parse_double(value, key);
  } else if (key == "eps_det") {
    c.eps_det = parse_double(value, key);
  } else if (key == "l_split") {
    c.l_split = parse_double(value, key);
  } else if (key == "l_collapse") {
    c.l_collapse = parse_double(value, key);
  } else if (key == "q_min_accept") {
    c.q_min_accept = parse_double(value, key);
  } else if (key == "max_sweeps") {
    c.max_sweeps = parse_int(value, key);
  } else if (key == "smooth_iters") {
    c.smooth_iters = parse_int(value, key);
  } else if (key == "out_dir") {
    c.out_dir = value;
  } else if (key == "output_cadence") {
    c.output_cadence = parse_int(value, key);
  } else if (key == "seed") {
    c.seed = static_cast<uint64_t>(std::stoull(value));
  } else if (key == "verbose") {
    c.verbose = parse_bool(value, key);
  } else {
    throw std::runtime_error("config: unknown key: " + key);
  }
}

AdaptConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open " + path);
  AdaptConfig config;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error("config: missing '=' at line " + std::to_string(lineno));
    }
    apply_config_entry(config, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return config;
}

}  // namespace adapt
