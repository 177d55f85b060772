#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "sepkit/linalg.hpp"

namespace sepkit {

// Deterministic standard normal (Box-Muller over the raw engine stream, so
// streams are identical across standard library implementations).
double gaussian(std::mt19937_64& rng);

// Haar-random pure state: normalized complex Gaussian vector.
CVec haar_pure_state(int d, std::mt19937_64& rng);

// Haar-distributed unitary: QR of a complex Ginibre matrix with the
// diagonal phase correction that makes the distribution exactly invariant.
CMat haar_unitary(int d, std::mt19937_64& rng);

// Three-qubit uniparametric family built from a two-qubit unitary V:
//   rho_alpha^V = (I + alpha |0><1| (x) V + alpha |1><0| (x) V^dag) / 8.
// Eigenvalues are (1 +- alpha)/8, each four-fold, for any unitary V.
enum class DattaCut { Cut1_23, Cut12_3 };

struct DattaState {
  int n = 3;
  CMat v;
  double alpha = 0.0;
  DattaCut cut = DattaCut::Cut12_3;
  BipartiteOperator asBipartite;
};

DattaState datta_state(const CMat& v, double alpha, DattaCut cut);

// 2 P_sym - I on two qubits; equals SWAP, Hermitian and unitary.
CMat special_unitary_U();

// Conjugate an operator on k qubits by the permutation that places original
// qubit perm[i] at position i.
CMat permute_qubit_order(const CMat& m, const std::vector<int>& perm);

BipartiteOperator bell_state();                  // |Phi+><Phi+|, 2 qubits
BipartiteOperator isotropic_state(double p);     // p Phi+ + (1-p) I/4
BipartiteOperator werner_state(double p);        // p psi- + (1-p) I/4
BipartiteOperator random_product_state(int dA, int dB, std::uint64_t seed);

// Dispatcher over the reference corpus: "bell", "isotropic", "werner",
// "product-random".
BipartiteOperator reference_state(const std::string& name, double param = 0.0,
                                  std::uint64_t seed = 0);

// One term of a state-estimation ensemble: the source emits psi with
// probability p and hands us the encoding psiPrime.
struct EnsembleTerm {
  double p = 0.0;
  CVec psiPrime;
  CVec psi;
};

// Uniform prior over the six eigenstates of X, Y, Z: a projective 2-design,
// so the assembled instance equals the Haar average P_sym / 3 exactly.
std::vector<EnsembleTerm> qubit_estimation_two_design();

}  // namespace sepkit
