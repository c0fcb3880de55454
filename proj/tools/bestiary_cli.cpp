#include <iostream>
#include <map>

#include "CLI11.hpp"
#include "commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Besov-space transfer operator experiments"};
  app.require_subcommand(1);
  bsv::cli::CommonOptions opt;
  std::uint64_t seed = 0;
  int level = 0;
  const std::map<std::string, std::string> about = {
      {"run", "run the operation named by experiment.op"},
      {"list-bestiary", "table of map families, constructors and r_ess formulas"},
      {"norm", "Besov and comparison norms of one function"},
      {"operator", "assemble the transfer matrix and export it as COO"},
      {"spectrum", "leading eigenvalue and second modulus"},
      {"ly", "Lasota-Yorke fit of lambda and C for j = 0..J"},
      {"acim", "invariant density, its Besov norm and support"},
      {"correlations", "decay of correlations against the invariant density"},
      {"wild", "escape statistics of the wild family"},
      {"regular-domain", "greedy regular-domain certificate and its verification"},
      {"compare-norms", "inclusion checks between Besov and comparison norms"},
  };
  for (const auto& name : bsv::cli::command_names()) {
    CLI::App* sub = app.add_subcommand(name, about.at(name));
    sub->add_option("--config", opt.config, "experiment config file (INI)");
    sub->add_option("--out-dir", opt.out_dir, "directory for output files");
    sub->add_option("--seed", seed, "seed override");
    sub->add_option("--threads", opt.threads, "worker threads, 0 = hardware");
    sub->add_option("--level", level, "grid level K override");
    sub->add_option("--set", opt.sets, "section.key=value override (repeatable)");
    if (name == "list-bestiary") sub->add_flag("--json", opt.json, "print JSON instead of a table");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : bsv::cli::kValidation;
  }
  CLI::App* chosen = app.get_subcommands().front();
  if (chosen->count("--seed")) opt.seed = seed;
  if (chosen->count("--level")) opt.level = level;
  return bsv::cli::dispatch(chosen->get_name(), opt, std::cout, std::cerr);
}
