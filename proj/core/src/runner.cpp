#include "sepkit/runner.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <thread>

#include <json.hpp>

#include "sepkit/decomp.hpp"
#include "sepkit/hierarchy.hpp"
#include "sepkit/jacobi.hpp"
#include "sepkit/state_io.hpp"
#include "sepkit/states.hpp"
#include "sepkit/tasks.hpp"
#include "sepkit/version.hpp"

namespace sepkit {

namespace {
using nlohmann::json;

json manifest(const RunConfig& cfg, const std::string& command) {
  return json{{"tool", "sepkit"},
              {"version", kVersion},
              {"command", command},
              {"config",
               {{"solverTolerance", cfg.solverTolerance},
                {"verdictMarginFactor", cfg.verdictMarginFactor},
                {"jobs", cfg.jobs},
                {"seed", cfg.seed},
                {"outputDir", cfg.outputDir}}}};
}

HierarchyOptions hierarchy_options(const RunConfig& cfg) {
  HierarchyOptions opts;
  opts.solverTol = cfg.solverTolerance;
  opts.marginFactor = cfg.verdictMarginFactor;
  return opts;
}

std::string join_path(const std::string& dir, const std::string& name) {
  if (dir.empty() || dir == ".") return name;
  return dir.back() == '/' ? dir + name : dir + "/" + name;
}

void write_json_file(const json& j, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << j.dump(2) << "\n";
}

// fixed-width scientific with 6 significant digits, stable across reruns
std::string fmt6(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// ordered parallel map over [0, count)
template <typename F>
void parallel_for(int count, int jobs, F&& body) {
  jobs = std::max(1, std::min(jobs, count));
  if (jobs == 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(jobs);
  for (int t = 0; t < jobs; ++t)
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) body(i);
    });
  for (auto& th : pool) th.join();
}

}  // namespace

int cmd_epsilon(const RunConfig& cfg, const EpsilonCmd& cmd, std::ostream& out) {
  const EpsilonResult r = epsilon_n(cmd.d, cmd.n);
  json j = manifest(cfg, "epsilon");
  j["result"] = {{"d", r.d},           {"N", r.N},
                 {"epsilon", r.epsilon}, {"largestRoot", r.largestRoot},
                 {"degree", r.degree},   {"alpha", r.alpha},
                 {"beta", r.beta}};
  out << j.dump(2) << "\n";
  return kExitOk;
}

int cmd_membership(const RunConfig& cfg, const MembershipCmd& cmd, std::ostream& out) {
  const BipartiteOperator rho = load_state_json(cmd.stateFile);
  const HierarchyLevel level{cmd.n, cmd.ppt, cmd.inner ? Side::Inner : Side::Outer};
  const auto opts = hierarchy_options(cfg);
  const MembershipVerdict v =
      cmd.inner ? membership_inner(rho, level, opts) : membership_outer(rho, level, opts);

  json j = manifest(cfg, "membership");
  j["level"] = {{"N", cmd.n}, {"ppt", cmd.ppt}, {"side", cmd.inner ? "inner" : "outer"}};
  j["verdict"] = to_string(v.verdict);
  j["margin"] = v.margin;
  j["solverStatus"] = to_string(v.solverStatus);
  if (v.extension) {
    const std::string path = join_path(cfg.outputDir, "membership_extension.json");
    save_matrix_json(*v.extension, path);
    j["certificatePath"] = path;
    j["certificateKind"] = "extension";
  } else if (v.witness) {
    const std::string path = join_path(cfg.outputDir, "membership_witness.json");
    save_state_json(*v.witness, path);
    j["certificatePath"] = path;
    j["certificateKind"] = "witness";
  }
  out << j.dump(2) << "\n";
  return v.verdict == Verdict::Indeterminate ? kExitIndeterminate : kExitOk;
}

int cmd_robustness(const RunConfig& cfg, const RobustnessCmd& cmd, std::ostream& out) {
  const BipartiteOperator rho = load_state_json(cmd.stateFile);
  const auto opts = hierarchy_options(cfg);
  json j = manifest(cfg, "robustness");
  j["level"] = {{"N", cmd.n}, {"ppt", cmd.ppt}, {"side", cmd.side}};

  int rc = kExitOk;
  if (cmd.side == "outer") {
    const auto r = robustness_lower(rho, outer_level(cmd.n, cmd.ppt), opts);
    j["bound"] = "lower";
    j["solverStatus"] = to_string(r.status);
    if (r.value)
      j["value"] = *r.value;
    else {
      j["value"] = nullptr;
      rc = kExitIndeterminate;
    }
  } else if (cmd.side == "inner") {
    const auto r = robustness_upper(rho, inner_level(cmd.n, cmd.ppt), opts);
    j["bound"] = "upper";
    j["solverStatus"] = to_string(r.status);
    if (r.levelTooWeak) {
      j["value"] = "infinity";
    } else if (r.value) {
      j["value"] = *r.value;
      if (r.sigmaTilde) {
        const std::string path = join_path(cfg.outputDir, "robustness_sigma.json");
        save_state_json(*r.sigmaTilde, path);
        j["sigmaPath"] = path;
      }
    } else {
      j["value"] = nullptr;
      rc = kExitIndeterminate;
    }
  } else {
    throw std::invalid_argument("robustness: side must be 'inner' or 'outer'");
  }
  out << j.dump(2) << "\n";
  return rc;
}

int cmd_fidelity(const RunConfig& cfg, const FidelityCmd& cmd, std::ostream& out) {
  const auto ensemble = load_ensemble_json(cmd.ensembleFile);
  const BipartiteOperator rhoSE = assemble_se_instance(ensemble);
  const auto opts = hierarchy_options(cfg);

  json j = manifest(cfg, "fidelity");
  json levels = json::array();
  int indeterminate = 0;
  std::optional<FidelityBounds> last;
  for (int n : cmd.levels) {
    const auto b = fidelity_inner(rhoSE, inner_level(n, cmd.ppt), opts);
    json lv = {{"N", n}, {"ppt", cmd.ppt}};
    if (b) {
      lv["fTilde"] = b->fTilde;
      lv["fUpper"] = b->fUpper;
      last = b;
    } else {
      lv["fTilde"] = nullptr;
      lv["fUpper"] = nullptr;
      ++indeterminate;
    }
    levels.push_back(std::move(lv));
  }
  j["levels"] = std::move(levels);

  if (!cmd.emitStrategy.empty() && last && last->extension) {
    const auto maps = shared_maps(rhoSE.dB, last->level.N);
    const auto decomp = decompose(*last->extension, *maps, rhoSE.dA, last->level,
                                  cmd.samples, cfg.seed);
    const auto strategy = as_measure_and_prepare(decomp);
    save_decomposition_json(decomp, cmd.emitStrategy);
    j["strategyPath"] = cmd.emitStrategy;
    j["strategyCompletenessResidual"] = strategy.completenessResidual;
    j["strategyResidualTraceNorm"] = decomp.residualTraceNorm;
  }
  out << j.dump(2) << "\n";
  return indeterminate * 2 > static_cast<int>(cmd.levels.size()) ? kExitIndeterminate
                                                                 : kExitOk;
}

int cmd_decompose(const RunConfig& cfg, const DecomposeCmd& cmd, std::ostream& out) {
  const BipartiteOperator rho = load_state_json(cmd.stateFile);
  const HierarchyLevel level = inner_level(cmd.n, cmd.ppt);
  const auto opts = hierarchy_options(cfg);
  const MembershipVerdict v = membership_inner(rho, level, opts);

  json j = manifest(cfg, "decompose");
  j["verdict"] = to_string(v.verdict);
  j["margin"] = v.margin;
  if (v.verdict != Verdict::Inside) {
    j["error"] = "state not certified inside the inner set at this level";
    out << j.dump(2) << "\n";
    return kExitIndeterminate;
  }
  const auto maps = shared_maps(rho.dB, cmd.n);
  const auto decomp =
      decompose(*v.extension, *maps, rho.dA, level, cmd.samples, cfg.seed);
  const std::string path = join_path(cfg.outputDir, cmd.outFile);
  save_decomposition_json(decomp, path);
  j["decompositionPath"] = path;
  j["residualTraceNorm"] = decomp.residualTraceNorm;
  j["normalizationConstant"] = decomp.normalizationConstant;
  j["samples"] = cmd.samples;
  out << j.dump(2) << "\n";
  return kExitOk;
}

int cmd_datta_scan(const RunConfig& cfg, const DattaScanCmd& cmd, std::ostream& out) {
  const CMat u = special_unitary_U();
  std::vector<double> alphas;
  for (double a = cmd.alphaStart; a <= cmd.alphaEnd + 1e-12; a += cmd.alphaStep)
    alphas.push_back(a);
  const int count = static_cast<int>(alphas.size());
  const auto opts = hierarchy_options(cfg);

  struct PointResult {
    double lower = std::numeric_limits<double>::quiet_NaN();
    double upper3 = std::numeric_limits<double>::quiet_NaN();
    double upper15 = std::numeric_limits<double>::quiet_NaN();
    std::vector<std::string> warnings;
  };
  std::vector<PointResult> results(count);

  parallel_for(count, cfg.jobs, [&](int i) {
    const double alpha = alphas[i];
    const BipartiteOperator rho = datta_state(u, alpha, DattaCut::Cut12_3).asBipartite;
    PointResult& r = results[i];
    const auto lower = robustness_lower(rho, outer_level(3, true), opts);
    if (lower.value)
      r.lower = *lower.value;
    else
      r.warnings.push_back("lower_S3p " + std::string(to_string(lower.status)));
    const auto upper3 = robustness_upper(rho, inner_level(3, false), opts);
    if (upper3.value)
      r.upper3 = *upper3.value;
    else
      r.warnings.push_back("upper_S3tilde " + std::string(to_string(upper3.status)));
    if (cmd.withN15) {
      const auto upper15 = robustness_upper(rho, inner_level(15, false), opts);
      if (upper15.value)
        r.upper15 = *upper15.value;
      else
        r.warnings.push_back("upper_S15tilde " + std::string(to_string(upper15.status)));
    }
  });

  const std::string csvPath = join_path(cfg.outputDir, cmd.csvFile);
  {
    std::ofstream csv(csvPath);
    if (!csv) throw std::runtime_error("cannot write " + csvPath);
    csv << "alpha,lower_S3p,upper_S3tilde,upper_S15tilde\n";
    for (int i = 0; i < count; ++i)
      csv << fmt6(alphas[i]) << "," << fmt6(results[i].lower) << ","
          << fmt6(results[i].upper3) << "," << fmt6(results[i].upper15) << "\n";
  }

  json j = manifest(cfg, "datta-scan");
  j["alphaGrid"] = alphas;
  j["withN15"] = cmd.withN15;
  j["csvPath"] = csvPath;
  json warnings = json::array();
  int warned = 0;
  for (int i = 0; i < count; ++i)
    for (const auto& w : results[i].warnings) {
      warnings.push_back(json{{"alpha", alphas[i]}, {"message", w}});
      ++warned;
    }
  j["warnings"] = std::move(warnings);
  const std::string manifestPath = join_path(cfg.outputDir, cmd.manifestFile);
  write_json_file(j, manifestPath);
  out << j.dump(2) << "\n";
  return warned * 2 > count ? kExitIndeterminate : kExitOk;
}

int cmd_random_sweep(const RunConfig& cfg, const RandomSweepCmd& cmd, std::ostream& out) {
  std::vector<CMat> unitaries;
  if (cmd.includeSpecial) unitaries.push_back(special_unitary_U());
  std::mt19937_64 rng(cfg.seed);
  for (int k = 0; k < cmd.samples; ++k) unitaries.push_back(haar_unitary(4, rng));
  const int count = static_cast<int>(unitaries.size());
  const auto opts = hierarchy_options(cfg);

  std::vector<MembershipVerdict> verdicts(count);
  parallel_for(count, cfg.jobs, [&](int i) {
    const BipartiteOperator rho =
        datta_state(unitaries[i], cmd.alpha, DattaCut::Cut12_3).asBipartite;
    verdicts[i] = membership_inner(rho, inner_level(3, false), opts);
  });

  json samples = json::array();
  int inside = 0, indeterminate = 0;
  for (int i = 0; i < count; ++i) {
    const auto& v = verdicts[i];
    json s = {{"index", i},
              {"special", cmd.includeSpecial && i == 0},
              {"verdict", to_string(v.verdict)},
              {"margin", v.margin}};
    if (v.verdict == Verdict::Inside) ++inside;
    if (v.verdict == Verdict::Indeterminate) ++indeterminate;
    if (cmd.emitCertificates && v.extension) {
      const std::string path =
          join_path(cfg.outputDir, "sweep_extension_" + std::to_string(i) + ".json");
      save_matrix_json(*v.extension, path);
      s["certificatePath"] = path;
    }
    samples.push_back(std::move(s));
  }

  json j = manifest(cfg, "random-sweep");
  j["alpha"] = cmd.alpha;
  j["includeSpecial"] = cmd.includeSpecial;
  j["samples"] = std::move(samples);
  j["summary"] = {{"total", count},
                  {"inside", inside},
                  {"indeterminate", indeterminate},
                  {"notInside", count - inside}};
  const std::string path = join_path(cfg.outputDir, cmd.outFile);
  write_json_file(j, path);
  out << j.dump(2) << "\n";
  return indeterminate * 2 > count ? kExitIndeterminate : kExitOk;
}

}  // namespace sepkit
