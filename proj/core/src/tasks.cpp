#include "sepkit/tasks.hpp"

#include <cmath>
#include <stdexcept>

#include "sepkit/jacobi.hpp"

namespace sepkit {

namespace {
const SolverBackend& backend_of(const HierarchyOptions& opts) {
  return opts.backend ? *opts.backend : default_backend();
}

std::function<CMat(const CMat&)> marginal_adjoint(const SymmetricSpaceMaps& maps, int dA,
                                                  double sign) {
  return [&maps, dA, sign](const CMat& e) {
    return CMat(sign * compressed_partial_trace_adjoint(maps, e, dA));
  };
}
}  // namespace

RobustnessLowerResult robustness_lower(const BipartiteOperator& rho,
                                       const HierarchyLevel& level,
                                       const HierarchyOptions& opts) {
  if (level.side != Side::Outer)
    throw std::invalid_argument("robustness_lower: level must be OUTER");
  const auto maps = shared_maps(rho.dB, level.N);

  HermitianProgramBuilder builder;
  const OuterConeVar s = add_outer_cone_variable(builder, *maps, rho.dA, level.ppt);
  const OuterConeVar rhoPlusS = add_outer_cone_variable(builder, *maps, rho.dA, level.ppt);
  // marginal(rhoPlusS) - marginal(s) = rho
  builder.add_linear_operator_equality({{rhoPlusS.lambda, marginal_adjoint(*maps, rho.dA, 1.0)},
                                        {s.lambda, marginal_adjoint(*maps, rho.dA, -1.0)}},
                                       {}, hermitize(rho.mat));
  // tr(s) = tr(lambda_s): the compressed trace map is trace-preserving
  builder.objective_add(s.lambda, CMat::Identity(s.nLambda, s.nLambda));

  const ConicSolution sol = backend_of(opts).solve(builder.prog, opts.solverTol);
  RobustnessLowerResult out;
  out.status = sol.status;
  if (sol.status == SolveStatus::Optimal)
    out.value = std::max(sol.objectiveValue, 0.0);
  return out;
}

RobustnessUpperResult robustness_upper(const BipartiteOperator& rho,
                                       const HierarchyLevel& level,
                                       const HierarchyOptions& opts) {
  if (level.side != Side::Inner)
    throw std::invalid_argument("robustness_upper: level must be INNER");
  const auto maps = shared_maps(rho.dB, level.N);
  const BipartiteOperator preimage = inner_preimage(rho, level);

  HermitianProgramBuilder builder;
  const OuterConeVar s1 = add_outer_cone_variable(builder, *maps, rho.dA, level.ppt);
  const OuterConeVar s2 = add_outer_cone_variable(builder, *maps, rho.dA, level.ppt);
  // s2 = s1 + T^{-1}(rho) at the marginal level
  builder.add_linear_operator_equality({{s2.lambda, marginal_adjoint(*maps, rho.dA, 1.0)},
                                        {s1.lambda, marginal_adjoint(*maps, rho.dA, -1.0)}},
                                       {}, hermitize(preimage.mat));
  // tr T(s1) = tr s1 = tr lambda_1
  builder.objective_add(s1.lambda, CMat::Identity(s1.nLambda, s1.nLambda));

  const ConicSolution sol = backend_of(opts).solve(builder.prog, opts.solverTol);
  RobustnessUpperResult out;
  out.status = sol.status;
  if (sol.status == SolveStatus::Infeasible) {
    out.levelTooWeak = true;  // callers report the +infinity sentinel
    return out;
  }
  if (sol.status != SolveStatus::Optimal) return out;
  out.value = std::max(sol.objectiveValue, 0.0);
  const CMat lambda1 = extract_complex(sol, s1.lambda).value;
  const CMat sigma1 = compressed_partial_trace(*maps, lambda1, rho.dA).mat;
  out.sigmaTilde = BipartiteOperator(
      hermitize(inner_map_apply(sigma1, rho.dA, rho.dB, level)), rho.dA, rho.dB);
  out.rhoPlusSigmaExtension = extract_complex(sol, s2.lambda).value;
  return out;
}

BipartiteOperator assemble_se_instance(const std::vector<EnsembleTerm>& ensemble) {
  if (ensemble.empty())
    throw std::invalid_argument("assemble_se_instance: empty ensemble");
  const int dA = static_cast<int>(ensemble.front().psiPrime.size());
  const int dB = static_cast<int>(ensemble.front().psi.size());
  double total = 0.0;
  CMat rho = CMat::Zero(dA * dB, dA * dB);
  for (const auto& term : ensemble) {
    if (term.p < 0.0)
      throw std::invalid_argument("assemble_se_instance: negative probability");
    if (term.psiPrime.size() != dA || term.psi.size() != dB)
      throw std::invalid_argument("assemble_se_instance: inhomogeneous dimensions");
    if (std::abs(term.psiPrime.norm() - 1.0) > 1e-9 ||
        std::abs(term.psi.norm() - 1.0) > 1e-9)
      throw std::invalid_argument("assemble_se_instance: states must be normalized");
    total += term.p;
    rho += term.p * kron(CMat(term.psiPrime * term.psiPrime.adjoint()),
                         CMat(term.psi * term.psi.adjoint()));
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw std::invalid_argument("assemble_se_instance: probabilities must sum to 1");
  return BipartiteOperator(hermitize(rho), dA, dB);
}

namespace {

// shared assembly for the inner/outer fidelity programs
std::optional<FidelityBounds> solve_fidelity(const BipartiteOperator& rhoSE,
                                             const HierarchyLevel& level, bool applyInnerMap,
                                             const HierarchyOptions& opts) {
  const int dA = rhoSE.dA, dB = rhoSE.dB;
  const auto maps = shared_maps(dB, level.N);

  HermitianProgramBuilder builder;
  const OuterConeVar s = add_outer_cone_variable(builder, *maps, dA, level.ppt);

  // tr_B s = I_A; the perturbation maps fix the A-marginal, so this is the
  // strategy normalization for both variants
  builder.add_linear_operator_equality(
      {{s.lambda, [&maps, dA, dB](const CMat& eA) {
          return compressed_partial_trace_adjoint(
              *maps, kron(eA, CMat::Identity(dB, dB)), dA);
        }}},
      {}, CMat::Identity(dA, dA));

  // maximize <rhoSE, T(s)> (or <rhoSE, s> for the outer relaxation)
  const CMat objAB = applyInnerMap
                         ? inner_map_adjoint(hermitize(rhoSE.mat), dA, dB, level)
                         : hermitize(rhoSE.mat);
  builder.objective_add(s.lambda,
                        CMat(-compressed_partial_trace_adjoint(*maps, objAB, dA)));

  const ConicSolution sol = backend_of(opts).solve(builder.prog, opts.solverTol);
  if (sol.status != SolveStatus::Optimal) return std::nullopt;

  FidelityBounds out;
  out.level = level;
  out.status = sol.status;
  out.fTilde = -sol.objectiveValue;
  const double excess = out.fTilde - 1.0 / dB;
  if (level.ppt) {
    const double eps = epsilon_n(dB, level.N).epsilon;
    out.fUpper = out.fTilde + eps / (1.0 - eps) * excess;
  } else {
    out.fUpper = out.fTilde + static_cast<double>(dB) / level.N * excess;
  }
  out.fUpper = std::min(out.fUpper, 1.0);  // fidelities exceed 1 only by bound slack
  out.fUpper = std::max(out.fUpper, out.fTilde);

  const CMat lambda = extract_complex(sol, s.lambda).value;
  const CMat sMat = compressed_partial_trace(*maps, lambda, dA).mat;
  out.optimalLambda = BipartiteOperator(
      hermitize(applyInnerMap ? inner_map_apply(sMat, dA, dB, level) : sMat), dA, dB);
  out.extension = lambda;
  return out;
}

}  // namespace

std::optional<FidelityBounds> fidelity_inner(const BipartiteOperator& rhoSE,
                                             const HierarchyLevel& level,
                                             const HierarchyOptions& opts) {
  if (level.side != Side::Inner)
    throw std::invalid_argument("fidelity_inner: level must be INNER");
  if (min_eigenvalue(rhoSE.mat) < -1e-8)
    throw std::invalid_argument("fidelity_inner: instance must be PSD");
  return solve_fidelity(rhoSE, level, /*applyInnerMap=*/true, opts);
}

std::optional<double> fidelity_outer(const BipartiteOperator& rhoSE,
                                     const HierarchyLevel& level,
                                     const HierarchyOptions& opts) {
  if (level.side != Side::Outer)
    throw std::invalid_argument("fidelity_outer: level must be OUTER");
  const auto bounds = solve_fidelity(rhoSE, level, /*applyInnerMap=*/false, opts);
  if (!bounds) return std::nullopt;
  return bounds->fTilde;
}

}  // namespace sepkit
