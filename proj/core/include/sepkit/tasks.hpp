#pragma once

#include <optional>
#include <vector>

#include "sepkit/hierarchy.hpp"
#include "sepkit/states.hpp"

namespace sepkit {

// Lower bound on the robustness of entanglement: minimize tr(s) with s and
// rho + s both in the outer cone of the level. Empty on NUMERICAL_LIMIT.
struct RobustnessLowerResult {
  std::optional<double> value;
  SolveStatus status = SolveStatus::NumericalLimit;
};

RobustnessLowerResult robustness_lower(const BipartiteOperator& rho,
                                       const HierarchyLevel& level,
                                       const HierarchyOptions& opts = {});

// Upper bound via the inner sets: minimize tr(T(s1)) with s1 and
// s1 + T^{-1}(rho) in the outer cone. A zero value certifies separability,
// and rhoPlusSigmaExtension is then the extension realizing rho itself.
struct RobustnessUpperResult {
  std::optional<double> value;
  bool levelTooWeak = false;  // solver produced an infeasibility certificate
  std::optional<BipartiteOperator> sigmaTilde;   // optimal T(s1)
  std::optional<CMat> rhoPlusSigmaExtension;     // compressed extension of s1 + T^{-1}(rho)
  SolveStatus status = SolveStatus::NumericalLimit;
};

RobustnessUpperResult robustness_upper(const BipartiteOperator& rho,
                                       const HierarchyLevel& level,
                                       const HierarchyOptions& opts = {});

struct RobustnessBounds {
  double lower = 0.0;
  double upper = 0.0;
  HierarchyLevel levelLower;
  HierarchyLevel levelUpper;
  std::optional<BipartiteOperator> optimalSigmaUpper;
};

// rho_SE = sum_i p_i PsiPrime_i (x) Psi_i; Hermitian PSD, unit trace.
// Throws when the distribution or the vectors are not normalized.
BipartiteOperator assemble_se_instance(const std::vector<EnsembleTerm>& ensemble);

struct FidelityBounds {
  double fTilde = 0.0;  // inner optimum
  double fUpper = 0.0;  // perturbation bound, clamped to 1
  HierarchyLevel level;
  std::optional<BipartiteOperator> optimalLambda;  // T(s*), the achievable strategy operator
  std::optional<CMat> extension;                   // compressed extension of s*
  SolveStatus status = SolveStatus::NumericalLimit;
};

// Maximize tr(rhoSE T(s)) over s in the outer cone with tr_B s = I_A.
// fUpper follows from the perturbation strength: (d/N)(fTilde - 1/d) beyond
// fTilde for plain levels, eps/(1-eps) in place of d/N for ppt levels.
std::optional<FidelityBounds> fidelity_inner(const BipartiteOperator& rhoSE,
                                             const HierarchyLevel& level,
                                             const HierarchyOptions& opts = {});

// Outer relaxation of the same objective (upper bound on the true optimal
// fidelity); exact for two-qubit instances at N = 1 with ppt.
std::optional<double> fidelity_outer(const BipartiteOperator& rhoSE,
                                     const HierarchyLevel& level,
                                     const HierarchyOptions& opts = {});

}  // namespace sepkit
