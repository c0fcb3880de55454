#pragma once
#include <string>
#include <utility>
#include <vector>

#include "bsv/repr.hpp"

namespace bsv {

// Comma-separated table with a header row and a trailing "# key=value" block.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);
  void row(std::vector<std::string> cells);
  void meta(const std::string& key, const std::string& value);
  std::string str() const;
  void write(const std::string& path) const;
  std::size_t rows() const { return rows_.size(); }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
  std::vector<std::pair<std::string, std::string>> meta_;
};

// Shortest round-trip decimal form.
std::string fmt(double v);
std::string fmt(long long v);
inline std::string fmt(int v) { return fmt((long long)v); }
inline std::string fmt(std::size_t v) { return fmt((long long)v); }
void write_text(const std::string& path, const std::string& text);
std::string join_path(const std::string& dir, const std::string& file);

constexpr const char* kVersion = "1.0.0";

// Level-K function as CSV: header "index,value", one row per cell in flat
// order, trailer "# dim=D" and "# K=K".
std::string function_csv(const PiecewiseConstantFn& f);
void write_function(const std::string& path, const PiecewiseConstantFn& f);
// Throws std::invalid_argument on a malformed file.
PiecewiseConstantFn read_function(const std::string& path);

}  // namespace bsv
