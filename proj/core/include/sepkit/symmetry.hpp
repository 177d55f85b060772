#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/SparseCore>

#include "sepkit/linalg.hpp"

namespace sepkit {

// dim Sym^n(C^d) = binomial(d+n-1, n)
int sym_dim(int d, int n);

// Occupation vectors (m_1..m_d) with sum n, in ascending lexicographic order.
std::vector<std::vector<int>> occupation_list(int d, int n);

double multinomial(int n, const std::vector<int>& occ);

// One coefficient of the compressed B^{N-1} partial trace:
//   marginal[(a,i),(a',j)] += coeff * lambda[(a,m),(a',mp)]
// where m - e_i = mp - e_j as occupation vectors.
struct TraceMapEntry {
  int i, j;    // single-copy B indices
  int m, mp;   // symmetric-basis indices
  double coeff;
};

// Isometric embedding Sym^N -> Sym^a (x) Sym^b for one registered cut.
struct SplitEmbedding {
  int a = 0, b = 0;
  int symDimA = 0, symDimB = 0;
  Eigen::SparseMatrix<double> w;  // (symDimA*symDimB) x symDim, W^T W = I
};

// Precomputed structure of Sym^N(H_B): symmetrizing isometry, the
// compressed partial-trace table, and split embeddings for PPT cuts.
// Immutable after build; safe to share across threads.
struct SymmetricSpaceMaps {
  int d = 0;
  int N = 0;
  int symDim = 0;
  std::vector<std::vector<int>> occupations;   // lex order, defines basis order
  Eigen::SparseMatrix<double> isometry;        // d^N x symDim, real entries
  std::vector<TraceMapEntry> traceMap;
  std::map<std::pair<int, int>, SplitEmbedding> splits;

  const SplitEmbedding& split(std::pair<int, int> cut) const;
};

// cuts: list of (a,b) pairs with a+b=N to prepare split embeddings for.
// Throws std::length_error once d^N exceeds amplitudeCap; hierarchies that
// large need a scale of machinery this library does not provide.
SymmetricSpaceMaps build_symmetric_maps(int d, int N,
                                        const std::vector<std::pair<int, int>>& cuts = {},
                                        std::int64_t amplitudeCap = 10'000'000);

// tr_{B^{N-1}} [ (I_A (x) V) lambda (I_A (x) V)^dag ]; linear in lambda,
// trace-preserving. lambda is (dA*symDim) square.
BipartiteOperator compressed_partial_trace(const SymmetricSpaceMaps& maps,
                                           const CMat& lambdaCompressed, int dA);

// Adjoint of compressed_partial_trace: lifts an AB operator to the
// compressed extension space. Used to assemble marginal constraints.
CMat compressed_partial_trace_adjoint(const SymmetricSpaceMaps& maps,
                                      const CMat& z, int dA);

// Partial transpose over the Sym^b factor of
// (I_A (x) W) lambda (I_A (x) W)^dag. PSD-ness of the result is the PPT
// condition of the uncompressed extension across the A B^a | B^b cut.
CMat ppt_cut_operator(const SymmetricSpaceMaps& maps, const CMat& lambdaCompressed,
                      int dA, std::pair<int, int> cut);

CMat ppt_cut_adjoint(const SymmetricSpaceMaps& maps, const CMat& z, int dA,
                     std::pair<int, int> cut);

// V^dag (phi^{(x)N}) computed in closed form: entry at occupation m is
// sqrt(N!/prod m_i!) * prod_i phi_i^{m_i}. No d^N object is materialized.
CVec sym_compress_power(const SymmetricSpaceMaps& maps, const CVec& phi);

// isometry * isometry^T, the projector onto Sym^N inside (C^d)^{(x)N}.
RMat symmetric_projector(const SymmetricSpaceMaps& maps);

// Optional binary cache, keyed by (d, N, cuts) and a format version string.
// load returns nullopt on any mismatch (missing file, stale version, wrong key).
void save_maps_cache(const SymmetricSpaceMaps& maps, const std::string& path);
std::optional<SymmetricSpaceMaps> load_maps_cache(const std::string& path, int d, int N,
                                                  const std::vector<std::pair<int, int>>& cuts);

}  // namespace sepkit
