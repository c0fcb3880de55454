#pragma once
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bsv/config.hpp"
#include "bsv/maps.hpp"

namespace bsv::cli {

// Raised when a computation finishes without meeting its numerical contract.
struct NumericalFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CommonOptions {
  std::string config, out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::optional<int> level;
  int threads = 0;
  std::vector<std::string> sets;  // section.key=value overrides
  bool json = false;
};

enum Exit { kOk = 0, kValidation = 1, kNumerical = 2 };

// Runs one subcommand; returns the process exit code.
int dispatch(const std::string& command, const CommonOptions& o, std::ostream& out, std::ostream& err);
const std::vector<std::string>& command_names();

MapSpec build_map(const ExperimentConfig& c);

}  // namespace bsv::cli
