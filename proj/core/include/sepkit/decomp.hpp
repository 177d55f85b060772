#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "sepkit/hierarchy.hpp"
#include "sepkit/linalg.hpp"
#include "sepkit/states.hpp"
#include "sepkit/symmetry.hpp"

namespace sepkit {

struct DecompositionTerm {
  double weight = 0.0;
  CMat aOperator;  // PSD on A
  CVec bVector;    // prepared pure state on B
};

struct SeparableDecomposition {
  std::vector<DecompositionTerm> terms;
  BipartiteOperator reconstruction;  // sum weight * aOperator (x) bState
  double residualTraceNorm = 0.0;    // against target
  double normalizationConstant = 0.0;
  BipartiteOperator target;          // the perturbed-map image being realized
  int dA = 0;
  int dB = 0;
};

// Monte Carlo realization of the Haar-integral decomposition: each sample
// draws a Haar pure state phi, takes aOperator prop to the compressed
// contraction of the extension against phi^{(x)N}, prepares phi, and the
// common weight is fixed by trace matching against the target T(sigma).
// Sampling is chunked so a fixed seed gives identical output for any
// parallel schedule. Throws on a (near) zero extension.
SeparableDecomposition decompose(const CMat& extension, const SymmetricSpaceMaps& maps,
                                 int dA, const HierarchyLevel& level, int samples,
                                 std::uint64_t seed, int chunks = 64);

struct MeasureAndPrepareStrategy {
  struct Element {
    CMat povm;      // M_x, PSD
    CMat prepared;  // density matrix prepared on outcome x
  };
  std::vector<Element> elements;
  std::optional<CMat> closingElement;  // I - sum M_x when that residual is positive
  double completenessResidual = 0.0;   // trace-norm distance of sum M_x from I
};

// Reads a decomposition whose A-marginal is (close to) the identity as a
// measure-and-prepare strategy. Throws when the marginal is farther than
// marginalTol from I in trace norm.
MeasureAndPrepareStrategy as_measure_and_prepare(const SeparableDecomposition& decomp,
                                                 double marginalTol = 1e-3);

}  // namespace sepkit
