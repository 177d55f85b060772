#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "sepkit/conic.hpp"

namespace sepkit {

// Global command-line configuration shared by every subcommand. Every
// artifact embeds it, together with the tool version, as the
// reproducibility manifest.
struct RunConfig {
  double solverTolerance = kDefaultSolverTol;
  double verdictMarginFactor = 10.0;
  int jobs = 1;
  std::uint64_t seed = 1234;
  std::string outputDir = ".";
};

// exit codes shared by the drivers: 0 success, 2 indeterminate-dominated
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitIndeterminate = 2;

struct EpsilonCmd {
  int d = 2;
  int n = 1;
};
int cmd_epsilon(const RunConfig& cfg, const EpsilonCmd& cmd, std::ostream& out);

struct MembershipCmd {
  std::string stateFile;
  int n = 1;
  bool ppt = false;
  bool inner = false;
};
int cmd_membership(const RunConfig& cfg, const MembershipCmd& cmd, std::ostream& out);

struct RobustnessCmd {
  std::string stateFile;
  int n = 1;
  bool ppt = false;
  std::string side = "outer";  // "outer": lower bound; "inner": upper bound
};
int cmd_robustness(const RunConfig& cfg, const RobustnessCmd& cmd, std::ostream& out);

struct FidelityCmd {
  std::string ensembleFile;
  std::vector<int> levels = {1, 2, 3};
  bool ppt = false;
  std::string emitStrategy;  // path; empty = skip
  int samples = 100000;
};
int cmd_fidelity(const RunConfig& cfg, const FidelityCmd& cmd, std::ostream& out);

struct DecomposeCmd {
  std::string stateFile;
  int n = 3;
  bool ppt = false;
  int samples = 100000;
  std::string outFile = "decomposition.json";
};
int cmd_decompose(const RunConfig& cfg, const DecomposeCmd& cmd, std::ostream& out);

// Alpha scan of the Datta family for U = 2 P_sym - I across the 12|3 cut:
// lower bounds from the outer N=3 ppt level, upper bounds from the inner
// N=3 set and optionally the inner N=15 set.
struct DattaScanCmd {
  double alphaStart = 0.0;
  double alphaEnd = 0.9;
  double alphaStep = 0.05;
  bool withN15 = true;
  std::string csvFile = "datta_scan.csv";
  std::string manifestFile = "datta_scan_manifest.json";
};
int cmd_datta_scan(const RunConfig& cfg, const DattaScanCmd& cmd, std::ostream& out);

// Membership of rho^V_alpha in the inner N=3 set for seeded Haar unitaries
// V (optionally prepending the special U) across the 12|3 cut.
struct RandomSweepCmd {
  int samples = 20;
  double alpha = 0.5;
  bool includeSpecial = false;
  std::string outFile = "random_sweep.json";
  bool emitCertificates = false;
};
int cmd_random_sweep(const RunConfig& cfg, const RandomSweepCmd& cmd, std::ostream& out);

}  // namespace sepkit
