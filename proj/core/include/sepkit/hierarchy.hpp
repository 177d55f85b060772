#pragma once

#include <memory>
#include <optional>
#include <utility>

#include "sepkit/embed.hpp"
#include "sepkit/linalg.hpp"
#include "sepkit/solver.hpp"
#include "sepkit/symmetry.hpp"

namespace sepkit {

enum class Side { Outer, Inner };

// Outer levels are the Bose-symmetric-extension sets S^N (optionally with
// the PPT cut); inner levels are their images under the affine perturbation
// maps, which certify genuine separability.
struct HierarchyLevel {
  int N = 1;
  bool ppt = false;
  Side side = Side::Outer;
};

inline HierarchyLevel outer_level(int n, bool ppt) { return {n, ppt, Side::Outer}; }
inline HierarchyLevel inner_level(int n, bool ppt) { return {n, ppt, Side::Inner}; }

// The PPT cut (a, b) imposed at level N: (ceil(N/2), floor(N/2)) from the
// extension bipartition A B^a | B^b. At N = 1 that split is the trivial
// everything|nothing partition, so the unique nontrivial bipartition A | B
// is used instead, which reproduces the plain PPT test.
std::pair<int, int> ppt_cut_for(int N);

enum class Verdict { Inside, Outside, Indeterminate };
const char* to_string(Verdict v);

struct MembershipVerdict {
  Verdict verdict = Verdict::Indeterminate;
  // Optimum of the decisive SDP (the largest slack t with lambda - t I and
  // the PPT-cut image - t I both PSD over the marginal-constrained slice):
  // distance of the decisive quantity from zero, in solver units.
  double margin = 0.0;
  // INSIDE: compressed PSD extension whose marginal reproduces the tested
  // operator (for inner levels, the extension of the affine preimage sigma).
  std::optional<CMat> extension;
  // OUTSIDE at an outer level: entanglement witness, normalized to
  // sup-norm 1, nonnegative on the outer cone and negative on the input.
  // Inner OUTSIDE verdicts carry no witness: failing an inner test does not
  // certify entanglement.
  std::optional<BipartiteOperator> witness;
  SolveStatus solverStatus = SolveStatus::NumericalLimit;
};

struct HierarchyOptions {
  double solverTol = kDefaultSolverTol;
  double marginFactor = 10.0;                  // gray zone is +- marginFactor*tol
  const SolverBackend* backend = nullptr;      // default_backend() when null
};

// Shared, thread-safe cache of SymmetricSpaceMaps keyed by (d, N); each
// entry carries the standard PPT cut. Read-shared after build.
std::shared_ptr<const SymmetricSpaceMaps> shared_maps(int d, int N);

// Forward affine perturbation map of the inner sets, acting on AB operators:
//   non-ppt: T(s) = (N s + tr_B(s) (x) I_B) / (N + d)
//   ppt:     T(s) = (1 - eps_N) s + eps_N tr_B(s) (x) I_B / d
CMat inner_map_apply(const CMat& s, int dA, int dB, const HierarchyLevel& level);
CMat inner_map_adjoint(const CMat& z, int dA, int dB, const HierarchyLevel& level);

// Unique sigma with T(sigma) = rho; both maps fix the A-marginal.
BipartiteOperator inner_preimage(const BipartiteOperator& rho, const HierarchyLevel& level);

MembershipVerdict membership_outer(const BipartiteOperator& rho, const HierarchyLevel& level,
                                   const HierarchyOptions& opts = {});

MembershipVerdict membership_inner(const BipartiteOperator& rho, const HierarchyLevel& level,
                                   const HierarchyOptions& opts = {});

enum class DistanceNorm { Trace, Operator };

struct NearestPointResult {
  BipartiteOperator point;  // nearest T(s), s in the outer cone, tr s = 1
  double distance = 0.0;
  SolveStatus solverStatus = SolveStatus::NumericalLimit;
};

NearestPointResult nearest_inner_point(const BipartiteOperator& rho,
                                       const HierarchyLevel& level, DistanceNorm norm,
                                       const HierarchyOptions& opts = {});

// Cone-variable assembly shared by membership and the application solvers:
// adds lambda (compressed extension, Hermitian PSD) and, for ppt levels, the
// linked PPT-cut block.
struct OuterConeVar {
  HermitianVar lambda;
  std::optional<HermitianVar> pptBlock;
  int nLambda = 0;  // dA * symDim
};

OuterConeVar add_outer_cone_variable(HermitianProgramBuilder& builder,
                                     const SymmetricSpaceMaps& maps, int dA, bool ppt);

}  // namespace sepkit
