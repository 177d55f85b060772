#pragma once

#include <complex>
#include <stdexcept>

#include <Eigen/Dense>

namespace sepkit {

using Complex = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using RMat = Eigen::MatrixXd;
using CVec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;

// Hermiticity tolerance in the entrywise max norm. Inputs within tolerance
// are symmetrized as (X + X^dag)/2 before any spectral work.
inline constexpr double kHermTol = 1e-10;

bool is_hermitian(const CMat& x, double tol = kHermTol);

// (X + X^dag)/2
CMat hermitize(const CMat& x);

// Operator on H_A (x) H_B with recorded local dimensions. Subsystem A is
// always the slower-varying (left) tensor factor: global index = a*dB + b.
struct BipartiteOperator {
  CMat mat;
  int dA = 0;
  int dB = 0;

  BipartiteOperator() = default;
  BipartiteOperator(CMat m, int dimA, int dimB);

  // Validates Hermiticity to kHermTol and stores the symmetrized matrix.
  static BipartiteOperator hermitian(const CMat& m, int dimA, int dimB);

  int dim() const { return dA * dB; }
};

enum class Subsystem { A, B };

CMat kron(const CMat& a, const CMat& b);

// Trace out the named factor; tr(result) == tr(op.mat).
CMat partial_trace(const BipartiteOperator& op, Subsystem traced);

// Transpose the indices of the named factor. Involution, trace- and
// Hermiticity-preserving.
BipartiteOperator partial_transpose(const BipartiteOperator& op, Subsystem part);

// Smallest eigenvalue of a Hermitian matrix. Throws on non-Hermitian input.
double min_eigenvalue(const CMat& h);

// [[Re h, -Im h], [Im h, Re h]]: real symmetric, PSD iff h is PSD,
// every eigenvalue of h appears twice.
RMat real_embedding(const CMat& h);

double trace_norm(const CMat& x);
double operator_norm(const CMat& x);

}  // namespace sepkit
