#include "sepkit/decomp.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace sepkit {

SeparableDecomposition decompose(const CMat& extension, const SymmetricSpaceMaps& maps,
                                 int dA, const HierarchyLevel& level, int samples,
                                 std::uint64_t seed, int chunks) {
  const int s = maps.symDim, d = maps.d;
  if (extension.rows() != static_cast<Eigen::Index>(dA) * s)
    throw std::invalid_argument("decompose: extension dimension mismatch");
  if (samples < 1) throw std::invalid_argument("decompose: samples must be >= 1");
  if (std::abs(extension.trace()) < 1e-12)
    throw std::invalid_argument("decompose: zero extension");

  // clip solver dust so every emitted aOperator is PSD by construction
  CMat lambda = hermitize(extension);
  {
    Eigen::SelfAdjointEigenSolver<CMat> es(lambda);
    if (es.eigenvalues().minCoeff() < 0)
      lambda = es.eigenvectors() * es.eigenvalues().cwiseMax(0.0).asDiagonal() *
               es.eigenvectors().adjoint();
  }

  const CMat sigma = compressed_partial_trace(maps, lambda, dA).mat;
  const CMat target = inner_map_apply(sigma, dA, d, level);

  SeparableDecomposition out;
  out.dA = dA;
  out.dB = d;
  out.target = BipartiteOperator(target, dA, d);
  out.terms.reserve(samples);

  CMat accum = CMat::Zero(dA * d, dA * d);
  double traceSum = 0.0;

  chunks = std::max(1, std::min(chunks, samples));
  const int base = samples / chunks, extra = samples % chunks;
  for (int chunk = 0; chunk < chunks; ++chunk) {
    std::mt19937_64 rng(seed + 0x9e3779b97f4a7c15ULL * (chunk + 1));
    const int count = base + (chunk < extra ? 1 : 0);
    CMat local = CMat::Zero(dA * d, dA * d);
    for (int k = 0; k < count; ++k) {
      const CVec phi = haar_pure_state(d, rng);
      const CVec v = sym_compress_power(maps, phi);
      CMat a(dA, dA);
      for (int p = 0; p < dA; ++p)
        for (int q = 0; q < dA; ++q)
          a(p, q) = (v.adjoint() * lambda.block(p * s, q * s, s, s) * v).value();
      a = hermitize(a);
      traceSum += a.trace().real();
      local.noalias() += kron(a, phi * phi.adjoint());
      out.terms.push_back({0.0, std::move(a), phi});
    }
    accum += local;
  }

  if (traceSum <= 0.0) throw std::invalid_argument("decompose: zero extension");

  // C from trace matching: reconstruction trace equals the target trace
  const double targetTrace = target.trace().real();
  const double c = targetTrace * samples / traceSum;
  out.normalizationConstant = c;
  const double weight = c / samples;
  for (auto& term : out.terms) term.weight = weight;
  out.reconstruction = BipartiteOperator(hermitize(weight * accum), dA, d);
  out.residualTraceNorm = trace_norm(out.reconstruction.mat - target);
  return out;
}

MeasureAndPrepareStrategy as_measure_and_prepare(const SeparableDecomposition& decomp,
                                                 double marginalTol) {
  const int dA = decomp.dA;
  CMat marginal = CMat::Zero(dA, dA);
  for (const auto& t : decomp.terms) marginal += t.weight * t.aOperator;
  const CMat gap = CMat::Identity(dA, dA) - marginal;
  const double residual = trace_norm(gap);
  if (residual > marginalTol)
    throw std::invalid_argument(
        "as_measure_and_prepare: decomposition A-marginal too far from identity");

  MeasureAndPrepareStrategy out;
  out.completenessResidual = residual;
  out.elements.reserve(decomp.terms.size());
  for (const auto& t : decomp.terms)
    out.elements.push_back(
        {t.weight * t.aOperator, t.bVector * t.bVector.adjoint()});
  if (min_eigenvalue(gap) >= 0.0 && residual > 0.0) {
    out.closingElement = gap;  // prepares the maximally mixed state
  }
  return out;
}

}  // namespace sepkit
