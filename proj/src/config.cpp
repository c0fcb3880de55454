#include "bsv/config.hpp"

#include <algorithm>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <cmath>
#include <fstream>
#include <sstream>

namespace bsv {

const std::map<std::string, std::vector<std::string>>& ExperimentConfig::schema() {
  static const std::map<std::string, std::vector<std::string>> s = {
      {"map", {"name", "l", "t", "beta", "n", "amplitude", "gamma", "alpha", "zeta", "k0", "i_max", "verbatim", "fraction", "branches"}},
      {"space", {"s", "p", "q"}},
      {"discretization", {"K", "quad_order", "dense_max", "table_log2", "tol", "mode", "tau"}},
      {"experiment",
       {"op", "j", "probes", "seed", "out", "sweep_key", "sweep", "N", "T", "threshold", "drift_steps", "n_max", "phi",
        "psi", "function", "region", "alpha", "max_level", "corpus", "floor", "dim"}},
  };
  return s;
}

void ExperimentConfig::check_known(const std::string& section, const std::string& key) const {
  auto it = schema().find(section);
  if (it == schema().end()) throw ConfigError("config: unknown section [" + section + "]");
  if (std::find(it->second.begin(), it->second.end(), key) == it->second.end())
    throw ConfigError("config: unknown key '" + key + "' in section [" + section + "]");
}

ExperimentConfig ExperimentConfig::from_string(const std::string& text) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  ExperimentConfig c;
  for (auto& [sec, sub] : tree) {
    if (sub.empty() && !sub.data().empty()) throw ConfigError("config: key '" + sec + "' outside any section");
    for (auto& [key, val] : sub) {
      c.check_known(sec, key);
      c.e_[sec][key] = val.data();
    }
  }
  return c;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("config: cannot read '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return from_string(ss.str());
}

bool ExperimentConfig::has(const std::string& section, const std::string& key) const {
  auto it = e_.find(section);
  return it != e_.end() && it->second.count(key);
}

std::string ExperimentConfig::str(const std::string& section, const std::string& key, const std::string& def) const {
  check_known(section, key);
  return has(section, key) ? e_.at(section).at(key) : def;
}

namespace {
double parse_num(const std::string& txt, const std::string& where) {
  std::string t = txt;
  t.erase(0, t.find_first_not_of(" \t"));
  t.erase(t.find_last_not_of(" \t") + 1);
  // powers of two written as 2^-20
  if (t.rfind("2^", 0) == 0) return std::ldexp(1.0, int(parse_num(t.substr(2), where)));
  std::size_t pos = 0;
  double v;
  try {
    v = std::stod(t, &pos);
  } catch (...) {
    throw ConfigError("config: '" + where + "' is not a number: '" + txt + "'");
  }
  if (pos != t.size()) throw ConfigError("config: '" + where + "' is not a number: '" + txt + "'");
  return v;
}
}  // namespace

double ExperimentConfig::num(const std::string& section, const std::string& key, double def) const {
  check_known(section, key);
  if (!has(section, key)) return def;
  return parse_num(e_.at(section).at(key), section + "." + key);
}

int ExperimentConfig::integer(const std::string& section, const std::string& key, int def) const {
  double v = num(section, key, def);
  if (v != std::floor(v) || std::abs(v) > 2e9) throw ConfigError("config: '" + section + "." + key + "' must be an integer");
  return int(v);
}

std::vector<double> ExperimentConfig::list(const std::string& section, const std::string& key,
                                           std::vector<double> def) const {
  check_known(section, key);
  if (!has(section, key)) return def;
  std::vector<double> out;
  std::stringstream ss(e_.at(section).at(key));
  std::string item;
  while (std::getline(ss, item, ','))
    if (item.find_first_not_of(" \t") != std::string::npos) out.push_back(parse_num(item, section + "." + key));
  if (out.empty()) throw ConfigError("config: '" + section + "." + key + "' is an empty list");
  return out;
}

void ExperimentConfig::set(const std::string& section, const std::string& key, const std::string& value) {
  check_known(section, key);
  e_[section][key] = value;
}

}  // namespace bsv
