#pragma once

#include <functional>
#include <vector>

#include "sepkit/conic.hpp"
#include "sepkit/linalg.hpp"

namespace sepkit {

// Complex Hermitian layer over the real conic IR. An n x n Hermitian PSD
// variable becomes one PSD(2n) real block carrying the real_embedding
// structure; all coefficient data is embedded so that feasible real blocks
// and Hermitian matrices are in exact objective/constraint correspondence,
// and extraction averages the two real copies back into a Hermitian matrix.

struct HermitianVar {
  int block = -1;
  int n = 0;  // complex dimension
};

// Component walk of the n x n Hermitian space: Re(p,q) for p <= q row-major,
// then Im(p,q) for p < q. herm_basis_element(k) is the Hermitian E_k with
// tr(E_k h) = component k of h.
int herm_component_count(int n);  // n*n
CMat herm_basis_element(int n, int k);
double herm_component(const CMat& h, int k);
CMat herm_from_components(int n, const RVec& comps);

class HermitianProgramBuilder {
 public:
  ConicProgram prog;

  HermitianVar add_hermitian_psd_variable(int n);
  int add_free_scalar();  // FREE(1) block index

  // accumulate <h, X_v> into the minimized objective
  void objective_add(const HermitianVar& v, const CMat& h);
  void objective_add_free(int freeBlock, double w);

  struct MatTerm {
    HermitianVar var;
    CMat coeff;  // Hermitian
  };
  struct FreeTerm {
    int block;
    double coeff;
  };
  int add_scalar_row(const std::vector<MatTerm>& terms,
                     const std::vector<FreeTerm>& freeTerms, double rhs);

  // Operator equality  sum_v L_v(X_v) + sum_t f_t * F_t = target. Each L_v
  // enters through its adjoint; F_t is a fixed Hermitian coupling matrix.
  // Emits one scalar row per independent real component of target and
  // returns the row indices in component order.
  struct OperatorTerm {
    HermitianVar var;
    std::function<CMat(const CMat&)> adjoint;
  };
  struct FreeOperatorTerm {
    int block;
    CMat coupling;
  };
  std::vector<int> add_linear_operator_equality(
      const std::vector<OperatorTerm>& terms,
      const std::vector<FreeOperatorTerm>& freeTerms, const CMat& target);
};

struct ExtractedHermitian {
  CMat value;       // symmetrized
  double residual;  // distance of the real block from embedded form
};

ExtractedHermitian extract_complex(const ConicSolution& sol, const HermitianVar& v);

double extract_free_scalar(const ConicSolution& sol, int freeBlock);

// Hermitian combination sum_k y_{rows[k]} E_k of equality duals; rows must
// be the index list returned by add_linear_operator_equality.
CMat assemble_dual_operator(const ConicSolution& sol, const std::vector<int>& rows,
                            int n);

}  // namespace sepkit
