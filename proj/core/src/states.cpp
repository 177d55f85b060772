#include "sepkit/states.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/QR>

namespace sepkit {

double gaussian(std::mt19937_64& rng) {
  // Box-Muller on uniforms taken straight from the engine
  constexpr double kTwoPi = 6.283185307179586;
  double u1 = 0.0;
  while (u1 <= 0.0) u1 = (rng() >> 11) * 0x1.0p-53;
  const double u2 = (rng() >> 11) * 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

CVec haar_pure_state(int d, std::mt19937_64& rng) {
  if (d < 1) throw std::invalid_argument("haar_pure_state: d must be >= 1");
  CVec v(d);
  for (int i = 0; i < d; ++i) {
    const double re = gaussian(rng);
    const double im = gaussian(rng);
    v(i) = Complex(re, im);
  }
  return v / v.norm();
}

CMat haar_unitary(int d, std::mt19937_64& rng) {
  if (d < 1) throw std::invalid_argument("haar_unitary: d must be >= 1");
  CMat g(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) g(i, j) = Complex(gaussian(rng), gaussian(rng));
  Eigen::HouseholderQR<CMat> qr(g);
  CMat q = qr.householderQ();
  const CMat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < d; ++j) {
    const Complex rjj = r(j, j);
    const double a = std::abs(rjj);
    q.col(j) *= (a > 0) ? rjj / a : Complex(1, 0);
  }
  return q;
}

DattaState datta_state(const CMat& v, double alpha, DattaCut cut) {
  if (v.rows() != 4 || v.cols() != 4)
    throw std::invalid_argument("datta_state: V must act on two qubits");
  if ((v.adjoint() * v - CMat::Identity(4, 4)).cwiseAbs().maxCoeff() > 1e-10)
    throw std::invalid_argument("datta_state: V is not unitary");
  if (alpha < 0.0 || alpha > 1.0)
    throw std::invalid_argument("datta_state: alpha must lie in [0,1]");

  CMat rho = CMat::Zero(8, 8);
  rho.topLeftCorner(4, 4) = CMat::Identity(4, 4);
  rho.bottomRightCorner(4, 4) = CMat::Identity(4, 4);
  rho.topRightCorner(4, 4) = alpha * v;
  rho.bottomLeftCorner(4, 4) = alpha * v.adjoint();
  rho /= 8.0;

  DattaState out;
  out.v = v;
  out.alpha = alpha;
  out.cut = cut;
  // the global order q1 (x) q2 (x) q3 already presents both cuts as
  // contiguous left|right splits, so only the recorded dimensions differ
  if (cut == DattaCut::Cut1_23)
    out.asBipartite = BipartiteOperator(rho, 2, 4);
  else
    out.asBipartite = BipartiteOperator(rho, 4, 2);
  return out;
}

CMat special_unitary_U() {
  CMat swap = CMat::Zero(4, 4);
  swap(0, 0) = swap(3, 3) = 1.0;
  swap(1, 2) = swap(2, 1) = 1.0;
  const CMat psym = 0.5 * (CMat::Identity(4, 4) + swap);
  return 2.0 * psym - CMat::Identity(4, 4);
}

CMat permute_qubit_order(const CMat& m, const std::vector<int>& perm) {
  const int k = static_cast<int>(perm.size());
  const int dim = 1 << k;
  if (m.rows() != dim || m.cols() != dim)
    throw std::invalid_argument("permute_qubit_order: dimension mismatch");
  // position i of the output holds original qubit perm[i]; qubit 0 is the
  // most significant bit
  std::vector<int> newIndex(dim);
  for (int x = 0; x < dim; ++x) {
    int y = 0;
    for (int i = 0; i < k; ++i) {
      const int bit = (x >> (k - 1 - perm[i])) & 1;
      y |= bit << (k - 1 - i);
    }
    newIndex[x] = y;
  }
  CMat out(dim, dim);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) out(newIndex[r], newIndex[c]) = m(r, c);
  return out;
}

namespace {
CVec bell_vector() {
  CVec phi = CVec::Zero(4);
  phi(0) = phi(3) = 1.0 / std::sqrt(2.0);
  return phi;
}
CVec singlet_vector() {
  CVec psi = CVec::Zero(4);
  psi(1) = 1.0 / std::sqrt(2.0);
  psi(2) = -1.0 / std::sqrt(2.0);
  return psi;
}
}  // namespace

BipartiteOperator bell_state() {
  const CVec phi = bell_vector();
  return BipartiteOperator(phi * phi.adjoint(), 2, 2);
}

BipartiteOperator isotropic_state(double p) {
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("isotropic_state: p in [0,1]");
  const CVec phi = bell_vector();
  return BipartiteOperator(p * (phi * phi.adjoint()) + (1.0 - p) / 4.0 * CMat::Identity(4, 4),
                           2, 2);
}

BipartiteOperator werner_state(double p) {
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("werner_state: p in [0,1]");
  const CVec psi = singlet_vector();
  return BipartiteOperator(p * (psi * psi.adjoint()) + (1.0 - p) / 4.0 * CMat::Identity(4, 4),
                           2, 2);
}

BipartiteOperator random_product_state(int dA, int dB, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const CVec a = haar_pure_state(dA, rng);
  const CVec b = haar_pure_state(dB, rng);
  const CVec ab = kron(CMat(a), CMat(b));
  return BipartiteOperator(ab * ab.adjoint(), dA, dB);
}

BipartiteOperator reference_state(const std::string& name, double param,
                                  std::uint64_t seed) {
  if (name == "bell") return bell_state();
  if (name == "isotropic") return isotropic_state(param);
  if (name == "werner") return werner_state(param);
  if (name == "product-random") return random_product_state(2, 2, seed);
  throw std::invalid_argument("reference_state: unknown name " + name);
}

std::vector<EnsembleTerm> qubit_estimation_two_design() {
  const double s = 1.0 / std::sqrt(2.0);
  std::vector<CVec> basis;
  CVec v(2);
  v << 1, 0;
  basis.push_back(v);
  v << 0, 1;
  basis.push_back(v);
  v << s, s;
  basis.push_back(v);
  v << s, -s;
  basis.push_back(v);
  v << s, Complex(0, 1) * s;
  basis.push_back(v);
  v << s, Complex(0, -1) * s;
  basis.push_back(v);
  std::vector<EnsembleTerm> out;
  for (const auto& psi : basis) out.push_back({1.0 / 6.0, psi, psi});
  return out;
}

}  // namespace sepkit
