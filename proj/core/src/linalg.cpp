#include "sepkit/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace sepkit {

bool is_hermitian(const CMat& x, double tol) {
  if (x.rows() != x.cols()) return false;
  return (x - x.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

CMat hermitize(const CMat& x) { return 0.5 * (x + x.adjoint()); }

BipartiteOperator::BipartiteOperator(CMat m, int dimA, int dimB)
    : mat(std::move(m)), dA(dimA), dB(dimB) {
  if (dA < 1 || dB < 1)
    throw std::invalid_argument("BipartiteOperator: dimensions must be positive");
  if (mat.rows() != mat.cols() || mat.rows() != static_cast<Eigen::Index>(dA) * dB)
    throw std::invalid_argument("BipartiteOperator: matrix must be (dA*dB) square");
}

BipartiteOperator BipartiteOperator::hermitian(const CMat& m, int dimA, int dimB) {
  if (!is_hermitian(m))
    throw std::invalid_argument("BipartiteOperator::hermitian: input exceeds Hermiticity tolerance");
  return BipartiteOperator(hermitize(m), dimA, dimB);
}

CMat kron(const CMat& a, const CMat& b) {
  CMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

CMat partial_trace(const BipartiteOperator& op, Subsystem traced) {
  const int dA = op.dA, dB = op.dB;
  if (traced == Subsystem::B) {
    CMat out = CMat::Zero(dA, dA);
    for (int i = 0; i < dA; ++i)
      for (int j = 0; j < dA; ++j)
        for (int k = 0; k < dB; ++k) out(i, j) += op.mat(i * dB + k, j * dB + k);
    return out;
  }
  CMat out = CMat::Zero(dB, dB);
  for (int k = 0; k < dB; ++k)
    for (int l = 0; l < dB; ++l)
      for (int i = 0; i < dA; ++i) out(k, l) += op.mat(i * dB + k, i * dB + l);
  return out;
}

BipartiteOperator partial_transpose(const BipartiteOperator& op, Subsystem part) {
  const int dA = op.dA, dB = op.dB;
  CMat out(op.mat.rows(), op.mat.cols());
  for (int i = 0; i < dA; ++i)
    for (int j = 0; j < dA; ++j)
      for (int k = 0; k < dB; ++k)
        for (int l = 0; l < dB; ++l) {
          if (part == Subsystem::B)
            out(i * dB + k, j * dB + l) = op.mat(i * dB + l, j * dB + k);
          else
            out(i * dB + k, j * dB + l) = op.mat(j * dB + k, i * dB + l);
        }
  return BipartiteOperator(std::move(out), dA, dB);
}

double min_eigenvalue(const CMat& h) {
  if (!is_hermitian(h))
    throw std::invalid_argument("min_eigenvalue: non-Hermitian input");
  Eigen::SelfAdjointEigenSolver<CMat> es(hermitize(h), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

RMat real_embedding(const CMat& h) {
  if (!is_hermitian(h))
    throw std::invalid_argument("real_embedding: non-Hermitian input");
  const CMat hs = hermitize(h);
  const Eigen::Index n = hs.rows();
  RMat out(2 * n, 2 * n);
  out.topLeftCorner(n, n) = hs.real();
  out.topRightCorner(n, n) = -hs.imag();
  out.bottomLeftCorner(n, n) = hs.imag();
  out.bottomRightCorner(n, n) = hs.real();
  return out;
}

double trace_norm(const CMat& x) {
  if (is_hermitian(x)) {
    Eigen::SelfAdjointEigenSolver<CMat> es(hermitize(x), Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().sum();
  }
  Eigen::JacobiSVD<CMat> svd(x);
  return svd.singularValues().sum();
}

double operator_norm(const CMat& x) {
  if (is_hermitian(x)) {
    Eigen::SelfAdjointEigenSolver<CMat> es(hermitize(x), Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().maxCoeff();
  }
  Eigen::JacobiSVD<CMat> svd(x);
  return svd.singularValues().maxCoeff();
}

}  // namespace sepkit
