#pragma once
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace bsv {

struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// INI-style experiment description: sections map, space, discretization,
// experiment; every key must be known to its section.
class ExperimentConfig {
 public:
  static ExperimentConfig from_file(const std::string& path);
  static ExperimentConfig from_string(const std::string& text);

  bool has(const std::string& section, const std::string& key) const;
  std::string str(const std::string& section, const std::string& key, const std::string& def) const;
  double num(const std::string& section, const std::string& key, double def) const;
  int integer(const std::string& section, const std::string& key, int def) const;
  std::vector<double> list(const std::string& section, const std::string& key, std::vector<double> def) const;
  // Override or add a key; the section.key must be in the schema.
  void set(const std::string& section, const std::string& key, const std::string& value);

  const std::map<std::string, std::map<std::string, std::string>>& entries() const { return e_; }
  static const std::map<std::string, std::vector<std::string>>& schema();

 private:
  void check_known(const std::string& section, const std::string& key) const;
  std::map<std::string, std::map<std::string, std::string>> e_;
};

}  // namespace bsv
