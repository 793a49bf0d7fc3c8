#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "dynperc/errors.hpp"
#include "dynperc/experiments.hpp"

using dynperc::ExperimentConfig;

namespace {

void common(CLI::App* sub, ExperimentConfig& cfg) {
  sub->add_option("--n", cfg.n, "number of vertices")->check(CLI::Range(2u, 1u << 30));
  sub->add_option("--lambda", cfg.lambda, "critical window parameter");
  sub->add_option("--replicas", cfg.replicas, "number of replicas");
  sub->add_option("--seed", cfg.seed, "master seed");
  sub->add_option("--out", cfg.out, "output path (directory for simulate)");
  sub->add_option("--format", cfg.format, "jsonl or csv");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Critical random graph dynamics: simulation, duality and geometry checks"};
  app.require_subcommand(1);
  ExperimentConfig cfg;
  std::string mode = "dynperc";
  std::optional<double> rate, p_refresh;

  auto* sample = app.add_subcommand("sample", "sample G(n, p(lambda, n)) and list its components");
  common(sample, cfg);

  auto* simulate = app.add_subcommand("simulate", "run coalescence, fragmentation or dynamical percolation");
  common(simulate, cfg);
  simulate->add_option("--mode", mode, "coal, frag or dynperc");
  simulate->add_option("--t-max", cfg.t_max, "time horizon");
  simulate->add_option("--snapshots", cfg.snapshots, "snapshot times t1,t2,...")->delimiter(',');
  simulate->add_option("--rate", rate, "per-pair clock rate override");
  simulate->add_option("--p-refresh", p_refresh, "refresh probability override");
  simulate->add_flag("--record-edges", cfg.record_edges, "store full edge lists in snapshots");

  auto* structure = app.add_subcommand("structure", "cores, kernels and heights of the largest components");
  common(structure, cfg);
  structure->add_option("--input", cfg.input, "graph snapshot JSON (sampled when absent)");
  structure->add_option("--top", cfg.top, "number of components reported");
  structure->add_option("--epsilon", cfg.epsilons, "oscillation window(s)")->delimiter(',');

  auto* duality = app.add_subcommand("duality-test", "compare coalescence of G(n,p) with fragmentation of G(n,p')");
  common(duality, cfg);
  duality->add_option("--s", cfg.s, "window shift");

  auto* mc = app.add_subcommand("mc-structure", "heart / hanging tree structure of the multiplicative coalescent");
  common(mc, cfg);
  mc->add_option("--t-max", cfg.t_max, "time horizon T");
  mc->add_option("--epsilon", cfg.epsilons, "significance level(s)")->delimiter(',');
  mc->add_option("--k-samples", cfg.k_samples, "samples for the K quantile");

  auto* lemma = app.add_subcommand("lemma-check", "brute-force and Monte-Carlo checks of the coalescent lemmas");
  common(lemma, cfg);
  lemma->add_option("--lemma", cfg.lemma, "all, 20, 23, 17, pourSkorL2 or pourSkorL2-single");
  lemma->add_option("--instances", cfg.instances, "random instances for exhaustive checks");

  auto* ghp = app.add_subcommand("ghp", "distances between measured metric spaces or collections");
  common(ghp, cfg);
  ghp->add_option("file_a", cfg.file_a, "first space or collection (JSON)")->required();
  ghp->add_option("file_b", cfg.file_b, "second space or collection (JSON)")->required();
  ghp->add_option("--mode", cfg.ghp_mode, "auto, exact or bounds");
  ghp->add_option("--tol", cfg.tol, "tail tolerance for L_GHP");

  auto* conv = app.add_subcommand("convergence", "KS distances of the largest component across n");
  common(conv, cfg);
  conv->add_option("--n-list", cfg.n_list, "ascending n values")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  cfg.command = app.get_subcommands().front()->get_name();
  try {
    if (cfg.command == "simulate") {
      cfg.mode = dynperc::parse_mode(mode);
      cfg.rate = rate;
      cfg.p_refresh = p_refresh;
    }
    const auto res = dynperc::run_command(cfg);
    if (!res.output.empty()) std::cout << res.output;
    for (const auto& f : res.files) std::cerr << "wrote " << f << '\n';
    return res.exit_code;
  } catch (const dynperc::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const dynperc::InvalidSpec& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
