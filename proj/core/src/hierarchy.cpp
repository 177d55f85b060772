#include "sepkit/hierarchy.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "sepkit/jacobi.hpp"

namespace sepkit {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Inside: return "INSIDE";
    case Verdict::Outside: return "OUTSIDE";
    case Verdict::Indeterminate: return "INDETERMINATE";
  }
  return "?";
}

std::pair<int, int> ppt_cut_for(int N) {
  if (N == 1) return {0, 1};
  return {(N + 1) / 2, N / 2};
}

std::shared_ptr<const SymmetricSpaceMaps> shared_maps(int d, int N) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::shared_ptr<const SymmetricSpaceMaps>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find({d, N});
  if (it != cache.end()) return it->second;
  auto maps = std::make_shared<const SymmetricSpaceMaps>(
      build_symmetric_maps(d, N, {ppt_cut_for(N)}));
  cache.emplace(std::make_pair(d, N), maps);
  return maps;
}

CMat inner_map_apply(const CMat& s, int dA, int dB, const HierarchyLevel& level) {
  const BipartiteOperator op(s, dA, dB);
  const CMat sA = partial_trace(op, Subsystem::B);
  const CMat lift = kron(sA, CMat::Identity(dB, dB));
  if (!level.ppt) return (level.N * s + lift) / (level.N + dB);
  const double eps = epsilon_n(dB, level.N).epsilon;
  return (1.0 - eps) * s + (eps / dB) * lift;
}

CMat inner_map_adjoint(const CMat& z, int dA, int dB, const HierarchyLevel& level) {
  // the lift term s -> tr_B(s) (x) I_B is self-adjoint in form
  return inner_map_apply(z, dA, dB, level);
}

BipartiteOperator inner_preimage(const BipartiteOperator& rho, const HierarchyLevel& level) {
  const int d = rho.dB, N = level.N;
  const CMat rhoA = partial_trace(rho, Subsystem::B);
  const CMat lift = kron(rhoA, CMat::Identity(d, d));
  CMat sigma;
  if (!level.ppt) {
    sigma = ((N + d) * rho.mat - lift) / N;
  } else {
    const double eps = epsilon_n(d, N).epsilon;
    sigma = (rho.mat - (eps / d) * lift) / (1.0 - eps);
  }
  return BipartiteOperator(std::move(sigma), rho.dA, rho.dB);
}

OuterConeVar add_outer_cone_variable(HermitianProgramBuilder& builder,
                                     const SymmetricSpaceMaps& maps, int dA, bool ppt) {
  OuterConeVar var;
  var.nLambda = dA * maps.symDim;
  var.lambda = builder.add_hermitian_psd_variable(var.nLambda);
  if (ppt) {
    const auto cut = ppt_cut_for(maps.N);
    const auto& se = maps.split(cut);
    const int nG = dA * se.symDimA * se.symDimB;
    var.pptBlock = builder.add_hermitian_psd_variable(nG);
    // G - pptmap(lambda) = 0
    builder.add_linear_operator_equality(
        {{*var.pptBlock, [](const CMat& e) { return e; }},
         {var.lambda,
          [&maps, dA, cut](const CMat& e) { return CMat(-ppt_cut_adjoint(maps, e, dA, cut)); }}},
        {}, CMat::Zero(nG, nG));
  }
  return var;
}

namespace {

const SolverBackend& backend_of(const HierarchyOptions& opts) {
  return opts.backend ? *opts.backend : default_backend();
}

CMat psd_projection(const CMat& h) {
  Eigen::SelfAdjointEigenSolver<CMat> es(hermitize(h));
  RVec vals = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * vals.asDiagonal() * es.eigenvectors().adjoint();
}

// max t over { T(lambda) = target, lambda - t I psd, pptmap(lambda) - t I psd }.
// The sign of the optimum is the membership verdict; duals of the marginal
// rows assemble into the witness.
struct MaxSlackResult {
  SolveStatus status = SolveStatus::NumericalLimit;
  double tStar = 0.0;
  CMat lambda;      // optimal lambda (= lambda0 + t I), not PSD-projected
  CMat dualZ;       // Hermitian dual of the marginal rows
  double marginalResidual = 0.0;
};

MaxSlackResult solve_max_slack(const CMat& target, int dA,
                               const SymmetricSpaceMaps& maps, bool ppt,
                               const HierarchyOptions& opts) {
  HermitianProgramBuilder builder;
  const int nL = dA * maps.symDim;
  const HermitianVar lambda0 = builder.add_hermitian_psd_variable(nL);
  const int tBlock = builder.add_free_scalar();
  builder.objective_add_free(tBlock, -1.0);  // max t

  // marginal slice in shifted variables: T(lambda0 + t I) = target
  const CMat tOfIdentity =
      compressed_partial_trace(maps, CMat::Identity(nL, nL), dA).mat;
  const auto marginalRows = builder.add_linear_operator_equality(
      {{lambda0,
        [&maps, dA](const CMat& e) { return compressed_partial_trace_adjoint(maps, e, dA); }}},
      {{tBlock, tOfIdentity}}, target);

  if (ppt) {
    // G0 = pptmap(lambda0 + t I) - t I, i.e. the PPT-cut image shifted by
    // the same slack: G0 - pptmap(lambda0) - t (pptmap(I) - I) = 0
    const auto cut = ppt_cut_for(maps.N);
    const auto& se = maps.split(cut);
    const int nG = dA * se.symDimA * se.symDimB;
    const CMat pptOfIdentity = ppt_cut_operator(maps, CMat::Identity(nL, nL), dA, cut);
    const HermitianVar g0 = builder.add_hermitian_psd_variable(nG);
    builder.add_linear_operator_equality(
        {{g0, [](const CMat& e) { return e; }},
         {lambda0,
          [&maps, dA, cut](const CMat& e) { return CMat(-ppt_cut_adjoint(maps, e, dA, cut)); }}},
        {{tBlock, CMat(CMat::Identity(nG, nG) - pptOfIdentity)}}, CMat::Zero(nG, nG));
  }

  const ConicSolution sol = backend_of(opts).solve(builder.prog, opts.solverTol);
  MaxSlackResult out;
  out.status = sol.status;
  if (sol.status != SolveStatus::Optimal && sol.status != SolveStatus::NumericalLimit)
    return out;
  const double t = extract_free_scalar(sol, tBlock);
  out.tStar = t;
  out.lambda = extract_complex(sol, lambda0).value + t * CMat::Identity(nL, nL);
  out.dualZ = assemble_dual_operator(sol, marginalRows, static_cast<int>(target.rows()));
  out.marginalResidual =
      trace_norm(compressed_partial_trace(maps, out.lambda, dA).mat - target);
  return out;
}

MembershipVerdict classify(const MaxSlackResult& r, const CMat& target, int dA,
                           const SymmetricSpaceMaps& maps,
                           const HierarchyOptions& opts) {
  MembershipVerdict v;
  v.solverStatus = r.status;
  if (r.status != SolveStatus::Optimal) return v;  // INDETERMINATE

  const double grayZone = opts.marginFactor * opts.solverTol;
  const int d = maps.d;

  if (r.tStar >= grayZone) {
    v.verdict = Verdict::Inside;
    v.margin = r.tStar;
    v.extension = hermitize(r.lambda);
    return v;
  }
  if (r.tStar <= -grayZone) {
    v.verdict = Verdict::Outside;
    v.margin = -r.tStar;
    CMat w = -r.dualZ;
    const double scale = operator_norm(w);
    if (scale > 0) w /= scale;
    v.witness = BipartiteOperator(hermitize(w), dA, d);
    return v;
  }
  // Boundary band: accept as INSIDE when the PSD projection of the returned
  // extension still reproduces the target within the certificate tolerance.
  const CMat proj = psd_projection(r.lambda);
  const double res = trace_norm(compressed_partial_trace(maps, proj, dA).mat - target);
  if (res <= 1e-6) {
    v.verdict = Verdict::Inside;
    v.margin = std::max(r.tStar, 0.0);
    v.extension = proj;
    return v;
  }
  v.margin = std::abs(r.tStar);
  return v;  // INDETERMINATE
}

void check_state_preconditions(const BipartiteOperator& rho) {
  const double scale = operator_norm(rho.mat);
  if (scale == 0.0 || std::abs(rho.mat.trace()) < 1e-12)
    throw std::invalid_argument("membership: input has (near) zero trace");
  if (min_eigenvalue(rho.mat) < -1e-6 * std::max(1.0, scale))
    throw std::invalid_argument("membership: input is not PSD to tolerance");
}

}  // namespace

MembershipVerdict membership_outer(const BipartiteOperator& rho, const HierarchyLevel& level,
                                   const HierarchyOptions& opts) {
  if (level.side != Side::Outer)
    throw std::invalid_argument("membership_outer: level must be OUTER");
  check_state_preconditions(rho);
  const auto maps = shared_maps(rho.dB, level.N);
  const auto r = solve_max_slack(hermitize(rho.mat), rho.dA, *maps, level.ppt, opts);
  return classify(r, hermitize(rho.mat), rho.dA, *maps, opts);
}

MembershipVerdict membership_inner(const BipartiteOperator& rho, const HierarchyLevel& level,
                                   const HierarchyOptions& opts) {
  if (level.side != Side::Inner)
    throw std::invalid_argument("membership_inner: level must be INNER");
  check_state_preconditions(rho);
  const BipartiteOperator sigma = inner_preimage(rho, level);
  const auto maps = shared_maps(rho.dB, level.N);
  const auto r = solve_max_slack(hermitize(sigma.mat), rho.dA, *maps, level.ppt, opts);
  MembershipVerdict v = classify(r, hermitize(sigma.mat), rho.dA, *maps, opts);
  // An inner OUTSIDE is not an entanglement certificate; drop the witness.
  v.witness.reset();
  return v;
}

NearestPointResult nearest_inner_point(const BipartiteOperator& rho,
                                       const HierarchyLevel& level, DistanceNorm norm,
                                       const HierarchyOptions& opts) {
  if (level.side != Side::Inner)
    throw std::invalid_argument("nearest_inner_point: level must be INNER");
  check_state_preconditions(rho);
  const int dA = rho.dA, dB = rho.dB;
  const int nAB = dA * dB;
  const auto maps = shared_maps(dB, level.N);

  HermitianProgramBuilder builder;
  const OuterConeVar cone = add_outer_cone_variable(builder, *maps, dA, level.ppt);

  auto mapAdjoint = [&](const CMat& e) {
    return compressed_partial_trace_adjoint(*maps,
                                            inner_map_adjoint(e, dA, dB, level), dA);
  };

  // tr s = tr lambda = 1 so the candidate T(s) is a normalized state
  builder.add_scalar_row({{cone.lambda, CMat::Identity(cone.nLambda, cone.nLambda)}}, {},
                         1.0);

  NearestPointResult out;
  ConicSolution sol;
  if (norm == DistanceNorm::Trace) {
    // || rho - T(s) ||_1 = min tr(P + Q), P - Q = rho - T(s)
    const HermitianVar p = builder.add_hermitian_psd_variable(nAB);
    const HermitianVar q = builder.add_hermitian_psd_variable(nAB);
    builder.add_linear_operator_equality(
        {{p, [](const CMat& e) { return e; }},
         {q, [](const CMat& e) { return CMat(-e); }},
         {cone.lambda, mapAdjoint}},
        {}, hermitize(rho.mat));
    builder.objective_add(p, CMat::Identity(nAB, nAB));
    builder.objective_add(q, CMat::Identity(nAB, nAB));
    sol = backend_of(opts).solve(builder.prog, opts.solverTol);
  } else {
    // || rho - T(s) ||_inf <= t as the pair t I -+ (rho - T(s)) psd:
    //   Y1 = t I - rho + T(s),  Y2 = t I + rho - T(s)
    const HermitianVar y1 = builder.add_hermitian_psd_variable(nAB);
    const HermitianVar y2 = builder.add_hermitian_psd_variable(nAB);
    const int tBlock = builder.add_free_scalar();
    builder.add_linear_operator_equality(
        {{y1, [](const CMat& e) { return e; }},
         {cone.lambda, [&](const CMat& e) { return CMat(-mapAdjoint(e)); }}},
        {{tBlock, CMat(-CMat::Identity(nAB, nAB))}}, CMat(-hermitize(rho.mat)));
    builder.add_linear_operator_equality(
        {{y2, [](const CMat& e) { return e; }}, {cone.lambda, mapAdjoint}},
        {{tBlock, CMat(-CMat::Identity(nAB, nAB))}}, hermitize(rho.mat));
    builder.objective_add_free(tBlock, 1.0);
    sol = backend_of(opts).solve(builder.prog, opts.solverTol);
  }

  out.solverStatus = sol.status;
  if (sol.status == SolveStatus::Optimal || sol.status == SolveStatus::NumericalLimit) {
    const CMat lambda = extract_complex(sol, cone.lambda).value;
    const CMat s = compressed_partial_trace(*maps, lambda, dA).mat;
    out.point = BipartiteOperator(hermitize(inner_map_apply(s, dA, dB, level)), dA, dB);
    out.distance = sol.objectiveValue;
  }
  return out;
}

}  // namespace sepkit
