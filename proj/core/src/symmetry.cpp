#include "sepkit/symmetry.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace sepkit {

int sym_dim(int d, int n) {
  // binomial(d+n-1, n), exact in double well past the sizes the
  // amplitude cap admits
  double v = 1.0;
  for (int k = 1; k <= n; ++k) v = v * (d - 1 + k) / k;
  return static_cast<int>(std::llround(v));
}

std::vector<std::vector<int>> occupation_list(int d, int n) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(d, 0);
  // lexicographic enumeration over (m_1, ..., m_d), sum = n
  auto rec = [&](auto&& self, int pos, int remaining) -> void {
    if (pos == d - 1) {
      cur[pos] = remaining;
      out.push_back(cur);
      return;
    }
    for (int v = 0; v <= remaining; ++v) {
      cur[pos] = v;
      self(self, pos + 1, remaining - v);
    }
  };
  rec(rec, 0, n);
  return out;
}

double multinomial(int n, const std::vector<int>& occ) {
  double v = 1.0;
  int used = 0;
  for (int m : occ) {
    for (int k = 1; k <= m; ++k) v = v * (used + k) / k;
    used += m;
  }
  (void)n;
  return v;
}

const SplitEmbedding& SymmetricSpaceMaps::split(std::pair<int, int> cut) const {
  auto it = splits.find(cut);
  if (it == splits.end())
    throw std::invalid_argument("SymmetricSpaceMaps: cut not registered at construction");
  return it->second;
}

namespace {

std::map<std::vector<int>, int> index_occupations(const std::vector<std::vector<int>>& occ) {
  std::map<std::vector<int>, int> idx;
  for (int k = 0; k < static_cast<int>(occ.size()); ++k) idx[occ[k]] = k;
  return idx;
}

SplitEmbedding build_split(int d, int N, const std::vector<std::vector<int>>& occN,
                           const std::map<std::vector<int>, int>& idxN, int a, int b) {
  if (a < 0 || b < 0 || a + b != N)
    throw std::invalid_argument("build_symmetric_maps: cut must satisfy a+b=N, a,b >= 0");
  SplitEmbedding se;
  se.a = a;
  se.b = b;
  const auto occA = occupation_list(d, a);
  const auto occB = occupation_list(d, b);
  const auto idxA = index_occupations(occA);
  const auto idxB = index_occupations(occB);
  se.symDimA = static_cast<int>(occA.size());
  se.symDimB = static_cast<int>(occB.size());

  std::vector<Eigen::Triplet<double>> trips;
  std::vector<int> ma(d);
  for (int m = 0; m < static_cast<int>(occN.size()); ++m) {
    const auto& occ = occN[m];
    const double cm = multinomial(N, occ);
    // every split of the multiset into an a-part and a b-part
    auto rec = [&](auto&& self, int pos, int left) -> void {
      if (pos == d) {
        if (left != 0) return;
        std::vector<int> mb(d);
        for (int q = 0; q < d; ++q) mb[q] = occ[q] - ma[q];
        const double ca = multinomial(a, ma);
        const double cb = multinomial(b, mb);
        const int row = idxA.at(ma) * se.symDimB + idxB.at(mb);
        trips.emplace_back(row, m, std::sqrt(ca * cb / cm));
        return;
      }
      for (int v = 0; v <= std::min(occ[pos], left); ++v) {
        ma[pos] = v;
        self(self, pos + 1, left - v);
      }
    };
    rec(rec, 0, a);
  }
  se.w.resize(se.symDimA * se.symDimB, static_cast<int>(occN.size()));
  se.w.setFromTriplets(trips.begin(), trips.end());
  (void)idxN;
  return se;
}

}  // namespace

SymmetricSpaceMaps build_symmetric_maps(int d, int N,
                                        const std::vector<std::pair<int, int>>& cuts,
                                        std::int64_t amplitudeCap) {
  if (d < 2) throw std::invalid_argument("build_symmetric_maps: d must be >= 2");
  if (N < 1) throw std::invalid_argument("build_symmetric_maps: N must be >= 1");
  std::int64_t full = 1;
  for (int k = 0; k < N; ++k) {
    full *= d;
    if (full > amplitudeCap)
      throw std::length_error(
          "build_symmetric_maps: d^N exceeds the amplitude cap; this scale "
          "requires larger-scale methods not provided here");
  }

  SymmetricSpaceMaps maps;
  maps.d = d;
  maps.N = N;
  maps.occupations = occupation_list(d, N);
  maps.symDim = static_cast<int>(maps.occupations.size());
  const auto idx = index_occupations(maps.occupations);

  // Symmetrizing isometry: column m collects the 1/sqrt(C(m)) amplitudes of
  // every product string of type m. First tensor factor is most significant.
  {
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<size_t>(full));
    std::vector<double> colNorm(maps.symDim);
    for (int m = 0; m < maps.symDim; ++m)
      colNorm[m] = 1.0 / std::sqrt(multinomial(N, maps.occupations[m]));
    std::vector<int> digits(N, 0);
    std::vector<int> type(d);
    for (std::int64_t s = 0; s < full; ++s) {
      std::fill(type.begin(), type.end(), 0);
      for (int k = 0; k < N; ++k) ++type[digits[k]];
      const int m = idx.at(type);
      trips.emplace_back(static_cast<int>(s), m, colNorm[m]);
      for (int k = N - 1; k >= 0; --k) {  // increment base-d string
        if (++digits[k] < d) break;
        digits[k] = 0;
      }
    }
    maps.isometry.resize(static_cast<int>(full), maps.symDim);
    maps.isometry.setFromTriplets(trips.begin(), trips.end());
  }

  // Compressed first-copy marginal of |m><mp|: entry (i,j) carries
  // sqrt(m_i * mp_j)/N whenever m - e_i = mp - e_j.
  for (int m = 0; m < maps.symDim; ++m) {
    const auto& occ = maps.occupations[m];
    for (int i = 0; i < d; ++i) {
      if (occ[i] == 0) continue;
      for (int j = 0; j < d; ++j) {
        std::vector<int> occp = occ;
        --occp[i];
        ++occp[j];
        const int mp = idx.at(occp);
        const double coeff = std::sqrt(static_cast<double>(occ[i]) * occp[j]) / N;
        maps.traceMap.push_back({i, j, m, mp, coeff});
      }
    }
  }

  for (const auto& cut : cuts)
    maps.splits.emplace(cut, build_split(d, N, maps.occupations, idx, cut.first, cut.second));
  return maps;
}

BipartiteOperator compressed_partial_trace(const SymmetricSpaceMaps& maps,
                                           const CMat& lambdaCompressed, int dA) {
  const int s = maps.symDim, d = maps.d;
  if (lambdaCompressed.rows() != lambdaCompressed.cols() ||
      lambdaCompressed.rows() != static_cast<Eigen::Index>(dA) * s)
    throw std::invalid_argument("compressed_partial_trace: dimension mismatch");
  CMat out = CMat::Zero(dA * d, dA * d);
  for (const auto& e : maps.traceMap)
    for (int a = 0; a < dA; ++a)
      for (int ap = 0; ap < dA; ++ap)
        out(a * d + e.i, ap * d + e.j) += e.coeff * lambdaCompressed(a * s + e.m, ap * s + e.mp);
  return BipartiteOperator(std::move(out), dA, d);
}

CMat compressed_partial_trace_adjoint(const SymmetricSpaceMaps& maps, const CMat& z,
                                      int dA) {
  const int s = maps.symDim, d = maps.d;
  if (z.rows() != z.cols() || z.rows() != static_cast<Eigen::Index>(dA) * d)
    throw std::invalid_argument("compressed_partial_trace_adjoint: dimension mismatch");
  CMat out = CMat::Zero(dA * s, dA * s);
  for (const auto& e : maps.traceMap)
    for (int a = 0; a < dA; ++a)
      for (int ap = 0; ap < dA; ++ap)
        out(a * s + e.m, ap * s + e.mp) += e.coeff * z(a * d + e.i, ap * d + e.j);
  return out;
}

CMat ppt_cut_operator(const SymmetricSpaceMaps& maps, const CMat& lambdaCompressed,
                      int dA, std::pair<int, int> cut) {
  const auto& se = maps.split(cut);
  const int s = maps.symDim;
  if (lambdaCompressed.rows() != static_cast<Eigen::Index>(dA) * s)
    throw std::invalid_argument("ppt_cut_operator: dimension mismatch");
  const int sab = se.symDimA * se.symDimB;
  CMat embedded(dA * sab, dA * sab);
  for (int a = 0; a < dA; ++a)
    for (int ap = 0; ap < dA; ++ap)
      embedded.block(a * sab, ap * sab, sab, sab) =
          se.w * lambdaCompressed.block(a * s, ap * s, s, s) * se.w.transpose();
  BipartiteOperator asBipartite(std::move(embedded), dA * se.symDimA, se.symDimB);
  return partial_transpose(asBipartite, Subsystem::B).mat;
}

CMat ppt_cut_adjoint(const SymmetricSpaceMaps& maps, const CMat& z, int dA,
                     std::pair<int, int> cut) {
  const auto& se = maps.split(cut);
  const int s = maps.symDim;
  const int sab = se.symDimA * se.symDimB;
  if (z.rows() != static_cast<Eigen::Index>(dA) * sab)
    throw std::invalid_argument("ppt_cut_adjoint: dimension mismatch");
  // partial transpose is self-adjoint; undo the isometric embedding
  const CMat zt = partial_transpose(BipartiteOperator(z, dA * se.symDimA, se.symDimB),
                                    Subsystem::B)
                      .mat;
  CMat out(dA * s, dA * s);
  for (int a = 0; a < dA; ++a)
    for (int ap = 0; ap < dA; ++ap)
      out.block(a * s, ap * s, s, s) =
          se.w.transpose() * zt.block(a * sab, ap * sab, sab, sab) * se.w;
  return out;
}

CVec sym_compress_power(const SymmetricSpaceMaps& maps, const CVec& phi) {
  if (phi.size() != maps.d)
    throw std::invalid_argument("sym_compress_power: wrong local dimension");
  CVec v(maps.symDim);
  for (int m = 0; m < maps.symDim; ++m) {
    Complex amp = std::sqrt(multinomial(maps.N, maps.occupations[m]));
    for (int i = 0; i < maps.d; ++i)
      for (int k = 0; k < maps.occupations[m][i]; ++k) amp *= phi(i);
    v(m) = amp;
  }
  return v;
}

RMat symmetric_projector(const SymmetricSpaceMaps& maps) {
  return RMat(maps.isometry * maps.isometry.transpose());
}

namespace {
constexpr char kCacheMagic[] = "sepkit-symmaps-v1";

void write_sparse(std::ofstream& f, const Eigen::SparseMatrix<double>& m) {
  const std::int64_t rows = m.rows(), cols = m.cols(), nnz = m.nonZeros();
  f.write(reinterpret_cast<const char*>(&rows), sizeof rows);
  f.write(reinterpret_cast<const char*>(&cols), sizeof cols);
  f.write(reinterpret_cast<const char*>(&nnz), sizeof nnz);
  for (int k = 0; k < m.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(m, k); it; ++it) {
      const std::int32_t r = static_cast<std::int32_t>(it.row()),
                         c = static_cast<std::int32_t>(it.col());
      const double v = it.value();
      f.write(reinterpret_cast<const char*>(&r), sizeof r);
      f.write(reinterpret_cast<const char*>(&c), sizeof c);
      f.write(reinterpret_cast<const char*>(&v), sizeof v);
    }
}

bool read_sparse(std::ifstream& f, Eigen::SparseMatrix<double>& m) {
  std::int64_t rows = 0, cols = 0, nnz = 0;
  f.read(reinterpret_cast<char*>(&rows), sizeof rows);
  f.read(reinterpret_cast<char*>(&cols), sizeof cols);
  f.read(reinterpret_cast<char*>(&nnz), sizeof nnz);
  if (!f) return false;
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<size_t>(nnz));
  for (std::int64_t k = 0; k < nnz; ++k) {
    std::int32_t r = 0, c = 0;
    double v = 0;
    f.read(reinterpret_cast<char*>(&r), sizeof r);
    f.read(reinterpret_cast<char*>(&c), sizeof c);
    f.read(reinterpret_cast<char*>(&v), sizeof v);
    if (!f) return false;
    trips.emplace_back(r, c, v);
  }
  m.resize(static_cast<int>(rows), static_cast<int>(cols));
  m.setFromTriplets(trips.begin(), trips.end());
  return true;
}
}  // namespace

void save_maps_cache(const SymmetricSpaceMaps& maps, const std::string& path) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("save_maps_cache: cannot open " + path);
  f.write(kCacheMagic, sizeof kCacheMagic);
  const std::int32_t d = maps.d, N = maps.N, nCuts = static_cast<std::int32_t>(maps.splits.size());
  f.write(reinterpret_cast<const char*>(&d), sizeof d);
  f.write(reinterpret_cast<const char*>(&N), sizeof N);
  f.write(reinterpret_cast<const char*>(&nCuts), sizeof nCuts);
  write_sparse(f, maps.isometry);
  const std::int64_t nEntries = static_cast<std::int64_t>(maps.traceMap.size());
  f.write(reinterpret_cast<const char*>(&nEntries), sizeof nEntries);
  f.write(reinterpret_cast<const char*>(maps.traceMap.data()),
          static_cast<std::streamsize>(nEntries * sizeof(TraceMapEntry)));
  for (const auto& [cut, se] : maps.splits) {
    const std::int32_t a = cut.first, b = cut.second;
    f.write(reinterpret_cast<const char*>(&a), sizeof a);
    f.write(reinterpret_cast<const char*>(&b), sizeof b);
    write_sparse(f, se.w);
  }
}

std::optional<SymmetricSpaceMaps> load_maps_cache(
    const std::string& path, int d, int N, const std::vector<std::pair<int, int>>& cuts) {
  std::ifstream f(path, std::ios::binary);
  if (!f) return std::nullopt;
  char magic[sizeof kCacheMagic] = {};
  f.read(magic, sizeof magic);
  if (!f || std::string(magic) != kCacheMagic) return std::nullopt;
  std::int32_t fd = 0, fN = 0, nCuts = 0;
  f.read(reinterpret_cast<char*>(&fd), sizeof fd);
  f.read(reinterpret_cast<char*>(&fN), sizeof fN);
  f.read(reinterpret_cast<char*>(&nCuts), sizeof nCuts);
  if (!f || fd != d || fN != N || nCuts != static_cast<std::int32_t>(cuts.size()))
    return std::nullopt;

  SymmetricSpaceMaps maps;
  maps.d = d;
  maps.N = N;
  maps.occupations = occupation_list(d, N);
  maps.symDim = static_cast<int>(maps.occupations.size());
  if (!read_sparse(f, maps.isometry)) return std::nullopt;
  std::int64_t nEntries = 0;
  f.read(reinterpret_cast<char*>(&nEntries), sizeof nEntries);
  if (!f) return std::nullopt;
  maps.traceMap.resize(static_cast<size_t>(nEntries));
  f.read(reinterpret_cast<char*>(maps.traceMap.data()),
         static_cast<std::streamsize>(nEntries * sizeof(TraceMapEntry)));
  for (std::int32_t k = 0; k < nCuts; ++k) {
    std::int32_t a = 0, b = 0;
    f.read(reinterpret_cast<char*>(&a), sizeof a);
    f.read(reinterpret_cast<char*>(&b), sizeof b);
    SplitEmbedding se;
    se.a = a;
    se.b = b;
    se.symDimA = sym_dim(d, a);
    se.symDimB = sym_dim(d, b);
    if (!read_sparse(f, se.w)) return std::nullopt;
    maps.splits.emplace(std::make_pair(a, b), std::move(se));
  }
  if (!f) return std::nullopt;
  for (const auto& cut : cuts)
    if (maps.splits.find(cut) == maps.splits.end()) return std::nullopt;
  return maps;
}

}  // namespace sepkit
