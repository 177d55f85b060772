#include "sepkit/embed.hpp"

#include <cmath>
#include <stdexcept>

namespace sepkit {

int herm_component_count(int n) { return n * n; }

namespace {

// k -> (p, q, isImag)
void component_index(int n, int k, int& p, int& q, bool& imag) {
  const int nRe = n * (n + 1) / 2;
  if (k < nRe) {
    imag = false;
    int row = 0, rem = k;
    while (rem >= n - row) {
      rem -= n - row;
      ++row;
    }
    p = row;
    q = row + rem;
  } else {
    imag = true;
    int rem = k - nRe;
    int row = 0;
    while (rem >= n - 1 - row) {
      rem -= n - 1 - row;
      ++row;
    }
    p = row;
    q = row + 1 + rem;
  }
}

// triplets of E(h)/2 (upper triangle convention of SymCoeff); the
// antisymmetry of Im h makes the off-diagonal block self-consistent
std::vector<SymCoeff> embed_coeff(const CMat& h) {
  const int n = static_cast<int>(h.rows());
  std::vector<SymCoeff> out;
  for (int r = 0; r < n; ++r)
    for (int c = r; c < n; ++c) {
      const double re = 0.5 * h(r, c).real();
      if (re != 0.0) {
        out.push_back({r, c, re});
        out.push_back({n + r, n + c, re});
      }
    }
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      const double im = -0.5 * h(r, c).imag();
      if (im != 0.0) out.push_back({r, n + c, im});
    }
  return out;
}

}  // namespace

CMat herm_basis_element(int n, int k) {
  int p, q;
  bool imag;
  component_index(n, k, p, q, imag);
  CMat e = CMat::Zero(n, n);
  if (!imag) {
    if (p == q) {
      e(p, p) = 1.0;
    } else {
      e(p, q) = 0.5;
      e(q, p) = 0.5;
    }
  } else {
    e(p, q) = Complex(0, 0.5);
    e(q, p) = Complex(0, -0.5);
  }
  return e;
}

double herm_component(const CMat& h, int k) {
  int p, q;
  bool imag;
  component_index(static_cast<int>(h.rows()), k, p, q, imag);
  return imag ? h(p, q).imag() : h(p, q).real();
}

CMat herm_from_components(int n, const RVec& comps) {
  if (comps.size() != n * n)
    throw std::invalid_argument("herm_from_components: wrong component count");
  CMat h = CMat::Zero(n, n);
  for (int k = 0; k < n * n; ++k) {
    int p, q;
    bool imag;
    component_index(n, k, p, q, imag);
    if (!imag) {
      if (p == q)
        h(p, p) = comps(k);
      else {
        h(p, q) += comps(k);
        h(q, p) += comps(k);
      }
    } else {
      h(p, q) += Complex(0, comps(k));
      h(q, p) += Complex(0, -comps(k));
    }
  }
  return h;
}

HermitianVar HermitianProgramBuilder::add_hermitian_psd_variable(int n) {
  if (n < 1)
    throw std::invalid_argument("add_hermitian_psd_variable: n must be >= 1");
  return {prog.add_psd_block(2 * n), n};
}

int HermitianProgramBuilder::add_free_scalar() { return prog.add_free_block(1); }

void HermitianProgramBuilder::objective_add(const HermitianVar& v, const CMat& h) {
  if (h.rows() != v.n || h.cols() != v.n)
    throw std::invalid_argument("objective_add: coefficient dimension mismatch");
  for (const auto& e : embed_coeff(hermitize(h)))
    prog.objective_add(v.block, e.r, e.c, e.v);
}

void HermitianProgramBuilder::objective_add_free(int freeBlock, double w) {
  prog.objective_add(freeBlock, 0, 0, w);
}

int HermitianProgramBuilder::add_scalar_row(const std::vector<MatTerm>& terms,
                                            const std::vector<FreeTerm>& freeTerms,
                                            double rhs) {
  LinearRow row;
  row.rhs = rhs;
  for (const auto& t : terms) {
    if (t.coeff.rows() != t.var.n)
      throw std::invalid_argument("add_scalar_row: coefficient dimension mismatch");
    auto coeffs = embed_coeff(hermitize(t.coeff));
    if (coeffs.empty()) continue;
    row.terms.push_back({t.var.block, std::move(coeffs)});
  }
  for (const auto& t : freeTerms)
    if (t.coeff != 0.0) row.terms.push_back({t.block, {{0, 0, t.coeff}}});
  return prog.add_row(std::move(row));
}

std::vector<int> HermitianProgramBuilder::add_linear_operator_equality(
    const std::vector<OperatorTerm>& terms,
    const std::vector<FreeOperatorTerm>& freeTerms, const CMat& target) {
  const int n = static_cast<int>(target.rows());
  if (target.cols() != n)
    throw std::invalid_argument("add_linear_operator_equality: target must be square");
  std::vector<int> rows;
  rows.reserve(herm_component_count(n));
  for (int k = 0; k < herm_component_count(n); ++k) {
    const CMat ek = herm_basis_element(n, k);
    std::vector<MatTerm> mt;
    mt.reserve(terms.size());
    for (const auto& t : terms) mt.push_back({t.var, t.adjoint(ek)});
    std::vector<FreeTerm> ft;
    for (const auto& t : freeTerms) {
      if (t.coupling.rows() != n)
        throw std::invalid_argument(
            "add_linear_operator_equality: coupling dimension mismatch");
      ft.push_back({t.block, herm_component(t.coupling, k)});
    }
    rows.push_back(add_scalar_row(mt, ft, herm_component(target, k)));
  }
  return rows;
}

ExtractedHermitian extract_complex(const ConicSolution& sol, const HermitianVar& v) {
  if (v.block < 0 || v.block >= static_cast<int>(sol.primalBlocks.size()))
    throw std::invalid_argument("extract_complex: bad handle");
  const Eigen::MatrixXd& y = sol.primalBlocks[v.block];
  const int n = v.n;
  if (y.rows() != 2 * n || y.cols() != 2 * n)
    throw std::invalid_argument("extract_complex: block is not an embedded Hermitian");
  const Eigen::MatrixXd re = 0.5 * (y.topLeftCorner(n, n) + y.bottomRightCorner(n, n));
  const Eigen::MatrixXd im = 0.5 * (y.bottomLeftCorner(n, n) - y.topRightCorner(n, n));
  ExtractedHermitian out;
  out.value = hermitize(re.cast<Complex>() + Complex(0, 1) * im.cast<Complex>());
  out.residual = (y - real_embedding(out.value)).norm() / (1.0 + y.norm());
  return out;
}

double extract_free_scalar(const ConicSolution& sol, int freeBlock) {
  if (freeBlock < 0 || freeBlock >= static_cast<int>(sol.primalBlocks.size()))
    throw std::invalid_argument("extract_free_scalar: bad handle");
  return sol.primalBlocks[freeBlock](0, 0);
}

CMat assemble_dual_operator(const ConicSolution& sol, const std::vector<int>& rows,
                            int n) {
  CMat z = CMat::Zero(n, n);
  if (static_cast<int>(rows.size()) != herm_component_count(n))
    throw std::invalid_argument("assemble_dual_operator: wrong row-group size");
  for (int k = 0; k < herm_component_count(n); ++k)
    z += sol.dualEqualities(rows[k]) * herm_basis_element(n, k);
  return hermitize(z);
}

}  // namespace sepkit
