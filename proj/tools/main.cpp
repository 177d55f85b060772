#include <iostream>

#include <CLI11.hpp>

#include "sepkit/runner.hpp"
#include "sepkit/version.hpp"

int main(int argc, char** argv) {
  CLI::App app{"sepkit: separability hierarchies, robustness and state-estimation bounds"};
  app.set_version_flag("--version", sepkit::kVersion);
  app.require_subcommand(1);

  sepkit::RunConfig cfg;
  app.add_option("--tolerance", cfg.solverTolerance, "solver tolerance")
      ->capture_default_str();
  app.add_option("--jobs", cfg.jobs, "worker threads for scans")->capture_default_str();
  app.add_option("--seed", cfg.seed, "seed for all randomness")->capture_default_str();
  app.add_option("--output-dir", cfg.outputDir, "directory for artifacts")
      ->capture_default_str();

  sepkit::EpsilonCmd epsilon;
  auto* epsApp = app.add_subcommand("epsilon", "perturbation strength of the inner ppt sets");
  epsApp->add_option("--d", epsilon.d, "local dimension of B")->required();
  epsApp->add_option("--n", epsilon.n, "hierarchy level N")->required();

  sepkit::MembershipCmd membership;
  auto* memApp = app.add_subcommand("membership", "hierarchy membership test");
  memApp->add_option("--state", membership.stateFile, "state JSON file")->required();
  memApp->add_option("--n", membership.n, "hierarchy level N")->required();
  memApp->add_flag("--ppt", membership.ppt, "impose the PPT cut");
  memApp->add_flag("--inner", membership.inner, "test the inner (separability) set");

  sepkit::RobustnessCmd robustness;
  auto* robApp = app.add_subcommand("robustness", "entanglement robustness bound");
  robApp->add_option("--state", robustness.stateFile, "state JSON file")->required();
  robApp->add_option("--n", robustness.n, "hierarchy level N")->required();
  robApp->add_flag("--ppt", robustness.ppt, "impose the PPT cut");
  robApp->add_option("--side", robustness.side, "outer (lower bound) or inner (upper)")
      ->required()
      ->check(CLI::IsMember({"outer", "inner"}));

  sepkit::FidelityCmd fidelity;
  auto* fidApp = app.add_subcommand("fidelity", "state-estimation fidelity bounds");
  fidApp->add_option("--ensemble", fidelity.ensembleFile, "ensemble JSON file")->required();
  fidApp->add_option("--n", fidelity.levels, "hierarchy levels (repeatable)");
  fidApp->add_flag("--ppt", fidelity.ppt, "impose the PPT cut");
  fidApp->add_option("--emit-strategy", fidelity.emitStrategy,
                     "write the measure-and-prepare strategy JSON here");
  fidApp->add_option("--samples", fidelity.samples, "decomposition sample count")
      ->capture_default_str();

  sepkit::DecomposeCmd decompose;
  auto* decApp = app.add_subcommand("decompose", "explicit separable decomposition");
  decApp->add_option("--state", decompose.stateFile, "state JSON file")->required();
  decApp->add_option("--n", decompose.n, "hierarchy level N")->capture_default_str();
  decApp->add_flag("--ppt", decompose.ppt, "impose the PPT cut");
  decApp->add_option("--samples", decompose.samples, "Monte Carlo samples")
      ->capture_default_str();
  decApp->add_option("--out", decompose.outFile, "output file name")
      ->capture_default_str();

  sepkit::DattaScanCmd dattaScan;
  auto* scanApp = app.add_subcommand("datta-scan", "robustness bounds over the alpha grid");
  scanApp->add_option("--alpha-start", dattaScan.alphaStart)->capture_default_str();
  scanApp->add_option("--alpha-end", dattaScan.alphaEnd)->capture_default_str();
  scanApp->add_option("--alpha-step", dattaScan.alphaStep)->capture_default_str();
  scanApp->add_flag("!--skip-n15", dattaScan.withN15, "skip the inner N=15 upper bounds");
  scanApp->add_option("--csv", dattaScan.csvFile, "CSV output name")->capture_default_str();
  scanApp->add_option("--manifest", dattaScan.manifestFile, "manifest output name")
      ->capture_default_str();

  sepkit::RandomSweepCmd sweep;
  auto* sweepApp =
      app.add_subcommand("random-sweep", "inner membership over seeded Haar unitaries");
  sweepApp->add_option("--samples", sweep.samples, "number of Haar unitaries")
      ->capture_default_str();
  sweepApp->add_option("--alpha", sweep.alpha)->capture_default_str();
  sweepApp->add_flag("--include-special", sweep.includeSpecial,
                     "prepend the unitary 2 P_sym - I to the sample set");
  sweepApp->add_option("--out", sweep.outFile, "output file name")->capture_default_str();
  sweepApp->add_flag("--emit-certificates", sweep.emitCertificates,
                     "write extension certificates per INSIDE verdict");

  CLI11_PARSE(app, argc, argv);

  try {
    if (epsApp->parsed()) return sepkit::cmd_epsilon(cfg, epsilon, std::cout);
    if (memApp->parsed()) return sepkit::cmd_membership(cfg, membership, std::cout);
    if (robApp->parsed()) return sepkit::cmd_robustness(cfg, robustness, std::cout);
    if (fidApp->parsed()) return sepkit::cmd_fidelity(cfg, fidelity, std::cout);
    if (decApp->parsed()) return sepkit::cmd_decompose(cfg, decompose, std::cout);
    if (scanApp->parsed()) return sepkit::cmd_datta_scan(cfg, dattaScan, std::cout);
    if (sweepApp->parsed()) return sepkit::cmd_random_sweep(cfg, sweep, std::cout);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return sepkit::kExitError;
  }
  return sepkit::kExitError;
}
