#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"

namespace fs = std::filesystem;

namespace {

std::string bin() {
  const char* b = std::getenv("BESTIARY_BIN");
  return b ? b : "bestiary";
}

fs::path fresh_dir(const std::string& name) {
  fs::path d = fs::temp_directory_path() / ("bsv_cli_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

int run(const std::string& args) {
  int st = std::system((bin() + " " + args + " >/dev/null 2>&1").c_str());
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void put(const fs::path& p, const std::string& s) { std::ofstream(p) << s; }

std::vector<std::vector<std::string>> data_rows(const std::string& csv) {
  std::vector<std::vector<std::string>> rows;
  std::stringstream ss(csv);
  std::string line;
  bool header = true;
  while (std::getline(ss, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (header) {
      header = false;
      continue;
    }
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string c;
    while (std::getline(ls, c, ',')) cells.push_back(c);
    rows.push_back(cells);
  }
  return rows;
}

const char* kToy =
    "[map]\nname = linear_circle\nl = 2\n[space]\ns = 0.5\np = 1\nq = 1\n"
    "[discretization]\nK = 8\n[experiment]\nop = ly\nj = 4\nprobes = 40\nseed = 5\n";

}  // namespace

TEST_CASE("list-bestiary") {
  fs::path d = fresh_dir("bestiary");
  CHECK(run("list-bestiary --out-dir " + d.string()) == 0);
  CHECK(data_rows(slurp(d / "bestiary.csv")).size() >= 7);
  CHECK(slurp(d / "bestiary.json").find("\"constructor\"") != std::string::npos);
  fs::remove_all(d);
}

TEST_CASE("ly on the doubling map, deterministic output") {
  fs::path d = fresh_dir("ly"), d1 = d / "a", d2 = d / "b";
  put(d / "toy.ini", kToy);
  CHECK(run("run --config " + (d / "toy.ini").string() + " --out-dir " + d1.string()) == 0);
  CHECK(run("ly --config " + (d / "toy.ini").string() + " --out-dir " + d2.string() + " --threads 2") == 0);
  std::string a = slurp(d1 / "ly.csv");
  auto rows = data_rows(a);
  REQUIRE(rows.size() == 5);
  CHECK(std::stod(rows.back()[7]) < 1);
  CHECK(a.find("# version=") != std::string::npos);
  CHECK(a == slurp(d2 / "ly.csv"));
  fs::remove_all(d);
}

TEST_CASE("validation failures exit 1") {
  fs::path d = fresh_dir("bad");
  put(d / "bad.ini", std::string(kToy) + "[space]\nr = 2\n");
  put(d / "bad2.ini", "[map]\nname = linear_circle\nt = 0.8\n[experiment]\nop = ly\n");
  put(d / "bad3.ini", "[map]\nname = tent\nt = 0.3\n[experiment]\nop = acim\n");
  CHECK(run("run --config " + (d / "bad.ini").string() + " --out-dir " + d.string()) == 1);
  CHECK(run("run --config " + (d / "bad2.ini").string() + " --out-dir " + d.string()) == 1);
  CHECK(run("run --config " + (d / "bad3.ini").string() + " --out-dir " + d.string()) == 1);
  CHECK(run("spectrum --set map.colour=red --out-dir " + d.string()) == 1);
  CHECK(run("no-such-command") == 1);
  CHECK(run("ly --threads -3 --out-dir " + d.string()) == 1);
  fs::remove_all(d);
}

TEST_CASE("numerical failure exits 2") {
  fs::path d = fresh_dir("num");
  CHECK(run("spectrum --set map.name=tent --set map.t=0.8 --set discretization.tol=0 --level 5 --out-dir " +
            d.string()) == 2);
  fs::remove_all(d);
}

TEST_CASE("small wild run and norm of a function") {
  fs::path d = fresh_dir("wild");
  CHECK(run("wild --set map.name=wild --set map.alpha=1 --set experiment.N=100 --set experiment.T=100 --out-dir " +
            d.string()) == 0);
  auto rows = data_rows(slurp(d / "wild.csv"));
  CHECK(rows.size() == 1);
  CHECK(run("norm --set experiment.function=indicator:0,0.5 --level 8 --out-dir " + d.string()) == 0);
  CHECK(fs::exists(d / "norm.csv"));
  CHECK(run("norm --set experiment.function=file:" + (d / "norm_function.csv").string() + " --out-dir " +
            (d / "again").string()) == 0);
  auto r1 = data_rows(slurp(d / "norm.csv")), r2 = data_rows(slurp(d / "again" / "norm.csv"));
  REQUIRE(r1.size() == 1);
  REQUIRE(r2.size() == 1);
  // the first column is a quoted spec; index from the end
  CHECK(r1[0][r1[0].size() - 6] == r2[0][r2[0].size() - 6]);
  CHECK(r1[0][r1[0].size() - 7] == "8");
  fs::remove_all(d);
}

TEST_CASE("piecewise map from the config") {
  fs::path d = fresh_dir("pw");
  put(d / "pw.ini",
      "[map]\nname = piecewise\nbranches = power:0,0.25,0,1,1; affine:0.25,1,0,1,dec\n[space]\ns = 0.5\n"
      "[discretization]\nK = 10\n[experiment]\nop = acim\n");
  CHECK(run("run --config " + (d / "pw.ini").string() + " --out-dir " + d.string()) == 0);
  CHECK(fs::exists(d / "acim_density.csv"));
  CHECK(run("acim --set map.name=piecewise --set \"map.branches=affine:0,1,0,0.5\" --out-dir " + d.string()) == 1);
}
