#pragma once

#include "sepkit/conic.hpp"

namespace sepkit {

// Primal-dual interior-point backend on the homogeneous self-dual embedding,
// NT scaling, Mehrotra predictor-corrector. Detects infeasibility and
// unboundedness through the embedding certificates; anything it cannot
// resolve is surfaced as NUMERICAL_LIMIT, never silently mapped to
// OPTIMAL/INFEASIBLE.
class HsdIpmBackend final : public SolverBackend {
 public:
  struct Options {
    int maxIterations = 150;
    double stepFraction = 0.99;  // fraction-to-boundary
  };

  HsdIpmBackend() = default;
  explicit HsdIpmBackend(Options opts) : opts_(opts) {}

  SolverCapabilities capabilities() const override {
    return {/*maxPsdBlockSize=*/512, /*supportsWarmStart=*/false,
            /*concurrentSolves=*/true};
  }

  ConicSolution solve(const ConicProgram& prog, double tolerance) const override;

 private:
  Options opts_;
};

// Shared default backend instance (stateless, safe for concurrent use).
const SolverBackend& default_backend();

}  // namespace sepkit
