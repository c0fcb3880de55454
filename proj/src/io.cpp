#include "bsv/io.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace bsv {

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

void CsvTable::row(std::vector<std::string> cells) {
  if (cells.size() != header_.size()) throw std::logic_error("csv: row width differs from header");
  rows_.push_back(std::move(cells));
}

void CsvTable::meta(const std::string& key, const std::string& value) { meta_.push_back({key, value}); }

namespace {
std::string quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}
}  // namespace

std::string CsvTable::str() const {
  std::ostringstream os;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << quote(cells[i]);
    os << '\n';
  };
  line(header_);
  for (auto& r : rows_) line(r);
  for (auto& [k, v] : meta_) os << "# " << k << "=" << v << '\n';
  return os.str();
}

void CsvTable::write(const std::string& path) const { write_text(path, str()); }

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string fmt(long long v) { return std::to_string(v); }

void write_text(const std::string& path, const std::string& text) {
  std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write '" + path + "'");
  f << text;
}

std::string join_path(const std::string& dir, const std::string& file) {
  if (dir.empty()) return file;
  return (std::filesystem::path(dir) / file).string();
}

std::string function_csv(const PiecewiseConstantFn& f) {
  CsvTable t({"index", "value"});
  for (std::size_t i = 0; i < f.size(); ++i) t.row({fmt(i), fmt(f.values[i])});
  t.meta("dim", fmt(f.dim));
  t.meta("K", fmt(f.level));
  t.meta("version", kVersion);
  return t.str();
}

void write_function(const std::string& path, const PiecewiseConstantFn& f) { write_text(path, function_csv(f)); }

PiecewiseConstantFn read_function(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read function file '" + path + "'");
  std::string line;
  std::vector<double> vals;
  int dim = -1, K = -1;
  bool header = false;
  auto bad = [&](const std::string& why) { return std::invalid_argument("function file '" + path + "': " + why); };
  auto parse = [&](const std::string& t, auto& out) {
    auto r = std::from_chars(t.data(), t.data() + t.size(), out);
    if (r.ec != std::errc() || r.ptr != t.data() + t.size()) throw bad("bad number '" + t + "'");
  };
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      std::string k = line.substr(1, eq - 1), v = line.substr(eq + 1);
      k.erase(0, k.find_first_not_of(' '));
      if (k == "dim") parse(v, dim);
      if (k == "K") parse(v, K);
      continue;
    }
    if (!header) {
      if (line != "index,value") throw bad("expected header 'index,value'");
      header = true;
      continue;
    }
    auto comma = line.find(',');
    if (comma == std::string::npos) throw bad("row without value");
    std::size_t idx = 0;
    double v = 0;
    parse(line.substr(0, comma), idx);
    parse(line.substr(comma + 1), v);
    if (idx != vals.size()) throw bad("rows out of order");
    vals.push_back(v);
  }
  if (dim != 1 && dim != 2) throw bad("missing or invalid '# dim='");
  if (K < 0 || K * dim > 28) throw bad("missing or invalid '# K='");
  if (vals.size() != cells_at(dim, K)) throw bad("expected " + std::to_string(cells_at(dim, K)) + " rows");
  return PiecewiseConstantFn(dim, K, std::move(vals));
}

}  // namespace bsv
