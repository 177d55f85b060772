#include "sepkit/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/LU>

namespace sepkit {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// <A, X> for a sparse symmetric coefficient list against a dense symmetric X
double sdot(const std::vector<SymCoeff>& a, const MatrixXd& x) {
  double acc = 0.0;
  for (const auto& e : a)
    acc += (e.r == e.c) ? e.v * x(e.r, e.r) : 2.0 * e.v * x(e.r, e.c);
  return acc;
}

void add_sym(MatrixXd& m, const std::vector<SymCoeff>& a, double scale) {
  for (const auto& e : a) {
    m(e.r, e.c) += scale * e.v;
    if (e.r != e.c) m(e.c, e.r) += scale * e.v;
  }
}

// W * A * W for sparse symmetric A, via rank updates on W's columns
MatrixXd conj_sparse(const MatrixXd& w, const std::vector<SymCoeff>& a) {
  MatrixXd k = MatrixXd::Zero(w.rows(), w.cols());
  for (const auto& e : a) {
    if (e.r == e.c) {
      k.noalias() += e.v * (w.col(e.r) * w.col(e.r).transpose());
    } else {
      k.noalias() += e.v * (w.col(e.r) * w.col(e.c).transpose());
      k.noalias() += e.v * (w.col(e.c) * w.col(e.r).transpose());
    }
  }
  return k;
}

struct CompiledRow {
  std::vector<std::pair<int, const std::vector<SymCoeff>*>> psd;  // (psdIdx, coeffs)
  std::vector<std::pair<int, double>> fre;                        // (freeIdx, value)
  double b = 0.0;
};

struct Compiled {
  std::vector<int> psdSize;                 // per psd block
  std::vector<int> blockToPsd;              // program block -> psd idx or -1
  std::vector<int> blockToFreeOffset;       // program block -> offset or -1
  int f = 0;
  std::vector<CompiledRow> rows;            // deduplicated
  std::vector<int> keptOriginal;            // kept row -> original index
  std::vector<std::vector<SymCoeff>> objPsd;
  VectorXd objFree;
  double normB = 0.0, normC = 0.0;
  int nu = 0;  // total cone degree
};

Compiled compile(const ConicProgram& prog) {
  Compiled cp;
  cp.blockToPsd.assign(prog.blocks.size(), -1);
  cp.blockToFreeOffset.assign(prog.blocks.size(), -1);
  for (size_t k = 0; k < prog.blocks.size(); ++k) {
    if (prog.blocks[k].kind == BlockKind::Psd) {
      cp.blockToPsd[k] = static_cast<int>(cp.psdSize.size());
      cp.psdSize.push_back(prog.blocks[k].n);
      cp.nu += prog.blocks[k].n;
    } else {
      cp.blockToFreeOffset[k] = cp.f;
      cp.f += prog.blocks[k].n;
    }
  }
  if (cp.psdSize.empty())
    throw std::invalid_argument("HsdIpmBackend: program needs at least one PSD block");

  const auto dups = duplicate_rows(prog);
  std::set<int> dropped(dups.begin(), dups.end());
  for (int i = 0; i < static_cast<int>(prog.equalities.size()); ++i) {
    if (dropped.count(i)) continue;
    CompiledRow row;
    row.b = prog.equalities[i].rhs;
    for (const auto& t : prog.equalities[i].terms) {
      if (cp.blockToPsd[t.block] >= 0) {
        row.psd.emplace_back(cp.blockToPsd[t.block], &t.coeffs);
      } else {
        const int off = cp.blockToFreeOffset[t.block];
        for (const auto& e : t.coeffs) row.fre.emplace_back(off + e.r, e.v);
      }
    }
    cp.rows.push_back(std::move(row));
    cp.keptOriginal.push_back(i);
  }

  cp.objPsd.assign(cp.psdSize.size(), {});
  cp.objFree = VectorXd::Zero(std::max(cp.f, 1));
  double nc2 = 0.0;
  for (const auto& t : prog.objective) {
    if (cp.blockToPsd[t.block] >= 0) {
      auto& dst = cp.objPsd[cp.blockToPsd[t.block]];
      dst.insert(dst.end(), t.coeffs.begin(), t.coeffs.end());
    } else {
      const int off = cp.blockToFreeOffset[t.block];
      for (const auto& e : t.coeffs) cp.objFree(off + e.r) += e.v;
    }
  }
  for (size_t k = 0; k < cp.objPsd.size(); ++k)
    for (const auto& e : cp.objPsd[k]) nc2 += (e.r == e.c ? 1.0 : 2.0) * e.v * e.v;
  nc2 += cp.objFree.squaredNorm();
  cp.normC = std::sqrt(nc2);
  double nb2 = 0.0;
  for (const auto& r : cp.rows) nb2 += r.b * r.b;
  cp.normB = std::sqrt(nb2);
  return cp;
}

struct NtScaling {
  MatrixXd w;        // NT point: W S W = X
  MatrixXd l;        // W = L L^T
  MatrixXd qv;       // eigenvectors of V = L^T S L
  VectorXd lv;       // eigenvalues of V
};

MatrixXd sym(const MatrixXd& a) { return 0.5 * (a + a.transpose()); }

NtScaling nt_scaling(const MatrixXd& x, const MatrixXd& s) {
  NtScaling nt;
  const int n = static_cast<int>(x.rows());
  Eigen::SelfAdjointEigenSolver<MatrixXd> esx(x);
  VectorXd lx = esx.eigenvalues();
  const double fx = std::max(lx.maxCoeff(), 1e-300) * 1e-15;
  for (int i = 0; i < n; ++i) lx(i) = std::max(lx(i), fx);
  const MatrixXd xh = esx.eigenvectors() * lx.cwiseSqrt().asDiagonal() *
                      esx.eigenvectors().transpose();
  Eigen::SelfAdjointEigenSolver<MatrixXd> esh(sym(xh * s * xh));
  VectorXd th = esh.eigenvalues();
  const double fh = std::max(th.maxCoeff(), 1e-300) * 1e-15;
  for (int i = 0; i < n; ++i) th(i) = std::max(th(i), fh);
  nt.w = sym(xh * esh.eigenvectors() * th.cwiseInverse().cwiseSqrt().asDiagonal() *
             esh.eigenvectors().transpose() * xh);

  Eigen::LLT<MatrixXd> llt(nt.w);
  if (llt.info() != Eigen::Success) {
    Eigen::SelfAdjointEigenSolver<MatrixXd> esw(nt.w);
    VectorXd lw = esw.eigenvalues();
    const double fw = std::max(lw.maxCoeff(), 1e-300) * 1e-14;
    for (int i = 0; i < n; ++i) lw(i) = std::max(lw(i), fw);
    nt.l = esw.eigenvectors() * lw.cwiseSqrt().asDiagonal() *
           esw.eigenvectors().transpose();
  } else {
    nt.l = llt.matrixL();
  }
  Eigen::SelfAdjointEigenSolver<MatrixXd> esv(sym(nt.l.transpose() * s * nt.l));
  nt.qv = esv.eigenvectors();
  nt.lv = esv.eigenvalues();
  return nt;
}

// solve (V U + U V)/2 = r in V's eigenbasis
MatrixXd lyap_solve(const NtScaling& nt, const MatrixXd& r) {
  MatrixXd rt = nt.qv.transpose() * r * nt.qv;
  const int n = static_cast<int>(rt.rows());
  const double floorv = std::max(nt.lv.maxCoeff(), 1e-300) * 1e-15;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      rt(i, j) *= 2.0 / std::max(nt.lv(i) + nt.lv(j), floorv);
  return nt.qv * rt * nt.qv.transpose();
}

// sup { a >= 0 : X + a dX psd }, X positive definite
double max_step(const MatrixXd& x, const MatrixXd& dx) {
  Eigen::LLT<MatrixXd> llt(x);
  MatrixXd b;
  if (llt.info() == Eigen::Success) {
    MatrixXd li = llt.matrixL().solve(MatrixXd::Identity(x.rows(), x.cols()));
    b = sym(li * dx * li.transpose());
  } else {
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(x);
    VectorXd l = es.eigenvalues();
    const double fl = std::max(l.maxCoeff(), 1e-300) * 1e-14;
    for (int i = 0; i < l.size(); ++i) l(i) = std::max(l(i), fl);
    MatrixXd xs = es.eigenvectors() * l.cwiseInverse().cwiseSqrt().asDiagonal() *
                  es.eigenvectors().transpose();
    b = sym(xs * dx * xs);
  }
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(b);
  const double lmin = es.eigenvalues().minCoeff();
  if (lmin >= 0.0) return std::numeric_limits<double>::infinity();
  return -1.0 / lmin;
}

struct Iterate {
  std::vector<MatrixXd> x, s;
  VectorXd xf;
  VectorXd y;
  double tau = 1.0, kappa = 1.0;
};

struct Residuals {
  VectorXd g1;                  // A(x) - b tau
  std::vector<MatrixXd> g2;     // A^T y + S - C tau
  VectorXd g2f;                 // A_f^T y - c_f tau
  double g3 = 0.0;              // -<c,x> + b^T y - kappa
  double cx = 0.0, by = 0.0;
};

Residuals residuals(const Compiled& cp, const Iterate& it) {
  Residuals rs;
  const int m = static_cast<int>(cp.rows.size());
  rs.g1 = VectorXd::Zero(m);
  for (int i = 0; i < m; ++i) {
    double v = -cp.rows[i].b * it.tau;
    for (const auto& [k, a] : cp.rows[i].psd) v += sdot(*a, it.x[k]);
    for (const auto& [j, w] : cp.rows[i].fre) v += w * it.xf(j);
    rs.g1(i) = v;
  }
  rs.g2.resize(cp.psdSize.size());
  for (size_t k = 0; k < cp.psdSize.size(); ++k) {
    MatrixXd g = it.s[k];
    add_sym(g, cp.objPsd[k], -it.tau);
    rs.g2[k] = g;
  }
  for (int i = 0; i < m; ++i)
    for (const auto& [k, a] : cp.rows[i].psd) add_sym(rs.g2[k], *a, it.y(i));
  rs.g2f = -cp.objFree.head(std::max(cp.f, 1)) * it.tau;
  if (cp.f == 0) rs.g2f = VectorXd::Zero(0);
  for (int i = 0; i < m; ++i)
    for (const auto& [j, w] : cp.rows[i].fre) rs.g2f(j) += w * it.y(i);

  double cx = cp.f > 0 ? cp.objFree.head(cp.f).dot(it.xf) : 0.0;
  for (size_t k = 0; k < cp.psdSize.size(); ++k) cx += sdot(cp.objPsd[k], it.x[k]);
  double by = 0.0;
  for (int i = 0; i < m; ++i) by += cp.rows[i].b * it.y(i);
  rs.cx = cx;
  rs.by = by;
  rs.g3 = -cx + by - it.kappa;
  return rs;
}

struct Direction {
  std::vector<MatrixXd> dx, ds;
  VectorXd dxf, dy;
  double dtau = 0.0, dkappa = 0.0;
};

}  // namespace

ConicSolution HsdIpmBackend::solve(const ConicProgram& prog, double tol) const {
  const Compiled cp = compile(prog);
  const int m = static_cast<int>(cp.rows.size());
  const int nb = static_cast<int>(cp.psdSize.size());
  const int f = cp.f;
  const int dim = m + f + 1;

  Iterate it;
  it.x.resize(nb);
  it.s.resize(nb);
  for (int k = 0; k < nb; ++k) {
    it.x[k] = MatrixXd::Identity(cp.psdSize[k], cp.psdSize[k]);
    it.s[k] = MatrixXd::Identity(cp.psdSize[k], cp.psdSize[k]);
  }
  it.xf = VectorXd::Zero(std::max(f, 1));
  it.y = VectorXd::Zero(m);

  auto mu_of = [&](const Iterate& z) {
    double acc = z.tau * z.kappa;
    for (int k = 0; k < nb; ++k) acc += z.x[k].cwiseProduct(z.s[k]).sum();
    return acc / (cp.nu + 1);
  };

  auto finalize = [&](SolveStatus status, const Iterate& z, const Residuals& rs,
                      int iters) {
    ConicSolution sol;
    sol.status = status;
    sol.iterations = iters;
    const double t = std::max(z.tau, 1e-300);
    sol.primalBlocks.resize(prog.blocks.size());
    sol.dualBlocks.resize(prog.blocks.size());
    for (size_t blk = 0; blk < prog.blocks.size(); ++blk) {
      if (cp.blockToPsd[blk] >= 0) {
        const int k = cp.blockToPsd[blk];
        sol.primalBlocks[blk] = z.x[k] / t;
        sol.dualBlocks[blk] = z.s[k] / t;
      } else {
        const int off = cp.blockToFreeOffset[blk];
        const int n = prog.blocks[blk].n;
        sol.primalBlocks[blk] = z.xf.segment(off, n) / t;
        sol.primalBlocks[blk].resize(n, 1);
        sol.dualBlocks[blk] = MatrixXd::Zero(n, 1);
      }
    }
    sol.dualEqualities = VectorXd::Zero(prog.equalities.size());
    for (int i = 0; i < m; ++i) sol.dualEqualities(cp.keptOriginal[i]) = z.y(i) / t;
    sol.objectiveValue = rs.cx / t;
    sol.primalResidual = rs.g1.norm() / t / (1.0 + cp.normB);
    double nd2 = rs.g2f.squaredNorm();
    for (int k = 0; k < nb; ++k) nd2 += rs.g2[k].squaredNorm();
    sol.dualResidual = std::sqrt(nd2) / t / (1.0 + cp.normC);
    const double pobj = rs.cx / t, dobj = rs.by / t;
    sol.gap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));
    return sol;
  };

  int tinySteps = 0;

  for (int iter = 0; iter <= opts_.maxIterations; ++iter) {
    const Residuals rs = residuals(cp, it);
    const double mu = mu_of(it);
    const double t = it.tau;

    const double pinf = rs.g1.norm() / t / (1.0 + cp.normB);
    double nd2 = rs.g2f.squaredNorm();
    for (int k = 0; k < nb; ++k) nd2 += rs.g2[k].squaredNorm();
    const double dinf = std::sqrt(nd2) / t / (1.0 + cp.normC);
    const double pobj = rs.cx / t, dobj = rs.by / t;
    const double gap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));
    const double compl_ = mu / (t * t) / (1.0 + std::abs(pobj) + std::abs(dobj));

    if (pinf <= tol && dinf <= tol && (gap <= tol || compl_ <= tol))
      return finalize(SolveStatus::Optimal, it, rs, iter);

    // Infeasibility/unboundedness certificates from the embedding: they can
    // only emerge once tau collapses relative to kappa.
    if (it.tau < 1e-6 * std::max(1.0, it.kappa) || mu < 1e-12) {
      if (rs.by > 0.0) {
        // Farkas: -A^T y must lie in the dual cone; s tracks c tau - A^T y
        // and tau ~ 0, so it suffices that A^T y + s ~ 0 on every block.
        double res2 = 0.0;
        for (int k = 0; k < nb; ++k) {
          MatrixXd atY = MatrixXd::Zero(cp.psdSize[k], cp.psdSize[k]);
          for (int i = 0; i < m; ++i)
            for (const auto& [kk, a] : cp.rows[i].psd)
              if (kk == k) add_sym(atY, *a, it.y(i));
          res2 += (atY + it.s[k]).squaredNorm();
        }
        VectorXd atyF = VectorXd::Zero(std::max(f, 1));
        for (int i = 0; i < m; ++i)
          for (const auto& [j, w] : cp.rows[i].fre) atyF(j) += w * it.y(i);
        if (f > 0) res2 += atyF.head(f).squaredNorm();
        if (std::sqrt(res2) <= 1e-7 * rs.by * (1.0 + cp.normC)) {
          Iterate cert = it;
          cert.tau = rs.by;  // finalize rescales: y/(b.y), s/(b.y)
          ConicSolution sol = finalize(SolveStatus::Infeasible, cert, rs, iter);
          sol.objectiveValue = std::numeric_limits<double>::quiet_NaN();
          return sol;
        }
      }
      if (rs.cx < 0.0) {
        VectorXd ax(m);
        for (int i = 0; i < m; ++i) ax(i) = rs.g1(i) + cp.rows[i].b * it.tau;
        if (ax.norm() <= 1e-7 * (-rs.cx) * (1.0 + cp.normB)) {
          Iterate cert = it;
          cert.tau = -rs.cx;  // ray with <c, x> = -1
          ConicSolution sol = finalize(SolveStatus::Unbounded, cert, rs, iter);
          sol.objectiveValue = std::numeric_limits<double>::quiet_NaN();
          return sol;
        }
      }
    }
    if (iter == opts_.maxIterations || tinySteps >= 3)
      return finalize(SolveStatus::NumericalLimit, it, rs, iter);

    // NT scalings and Schur complement
    std::vector<NtScaling> nt(nb);
    for (int k = 0; k < nb; ++k) nt[k] = nt_scaling(it.x[k], it.s[k]);

    MatrixXd kkt = MatrixXd::Zero(dim, dim);
    VectorXd u = VectorXd::Zero(m);
    double wq = 0.0;
    std::vector<MatrixXd> wcw(nb);  // W C W per block
    for (int k = 0; k < nb; ++k) {
      wcw[k] = conj_sparse(nt[k].w, cp.objPsd[k]);
      wq += sdot(cp.objPsd[k], wcw[k]);
    }
    // rows touching each psd block
    std::vector<std::vector<std::pair<int, const std::vector<SymCoeff>*>>> touch(nb);
    for (int i = 0; i < m; ++i)
      for (const auto& [k, a] : cp.rows[i].psd) touch[k].emplace_back(i, a);
    for (int k = 0; k < nb; ++k) {
      for (const auto& [j, aj] : touch[k]) {
        const MatrixXd kj = conj_sparse(nt[k].w, *aj);
        for (const auto& [i, ai] : touch[k]) {
          if (i > j) continue;
          const double v = sdot(*ai, kj);
          kkt(i, j) += v;
          if (i != j) kkt(j, i) += v;
        }
        u(j) += sdot(cp.objPsd[k], kj);
      }
    }
    for (int i = 0; i < m; ++i) {
      for (const auto& [j, w] : cp.rows[i].fre) {
        kkt(i, m + j) = w;
        kkt(m + j, i) = w;
      }
      kkt(i, dim - 1) = -(cp.rows[i].b + u(i));
      kkt(dim - 1, i) = cp.rows[i].b - u(i);
    }
    for (int j = 0; j < f; ++j) {
      kkt(m + j, dim - 1) = -cp.objFree(j);
      kkt(dim - 1, m + j) = -cp.objFree(j);
      kkt(m + j, m + j) = -1e-12;  // saddle regularization
    }
    kkt(dim - 1, dim - 1) = wq + it.kappa / it.tau;

    Eigen::PartialPivLU<MatrixXd> lu(kkt);
    auto kkt_solve = [&](const VectorXd& rhs) {
      VectorXd sol = lu.solve(rhs);
      VectorXd resid = rhs - kkt * sol;
      sol += lu.solve(resid);  // one refinement step
      resid = rhs - kkt * sol;
      if (resid.norm() > 1e-7 * (1.0 + rhs.norm())) {
        Eigen::FullPivLU<MatrixXd> flu(kkt);
        sol = flu.solve(rhs);
      }
      return sol;
    };

    auto build_direction = [&](const std::vector<MatrixXd>& rc, double rtk) {
      Direction d;
      std::vector<MatrixXd> p(nb);
      for (int k = 0; k < nb; ++k)
        p[k] = rc[k] + sym(nt[k].w * rs.g2[k] * nt[k].w);
      VectorXd rhs = VectorXd::Zero(dim);
      for (int i = 0; i < m; ++i) {
        double v = -rs.g1(i);
        for (const auto& [k, a] : cp.rows[i].psd) v -= sdot(*a, p[k]);
        rhs(i) = v;
      }
      for (int j = 0; j < f; ++j) rhs(m + j) = -rs.g2f(j);
      double r3 = -rs.g3 + rtk / it.tau;
      for (int k = 0; k < nb; ++k) r3 += sdot(cp.objPsd[k], p[k]);
      rhs(dim - 1) = r3;

      const VectorXd sol = kkt_solve(rhs);
      d.dy = sol.head(m);
      d.dxf = f > 0 ? VectorXd(sol.segment(m, f)) : VectorXd::Zero(1);
      d.dtau = sol(dim - 1);
      d.dkappa = (rtk - it.kappa * d.dtau) / it.tau;
      d.dx.resize(nb);
      d.ds.resize(nb);
      for (int k = 0; k < nb; ++k) {
        MatrixXd dsk = -rs.g2[k];
        add_sym(dsk, cp.objPsd[k], d.dtau);
        for (const auto& [i, a] : touch[k]) add_sym(dsk, *a, -d.dy(i));
        d.ds[k] = sym(dsk);
        d.dx[k] = sym(rc[k] - nt[k].w * d.ds[k] * nt[k].w);
      }
      return d;
    };

    auto step_bound = [&](const Direction& d) {
      double a = std::numeric_limits<double>::infinity();
      for (int k = 0; k < nb; ++k) {
        a = std::min(a, max_step(it.x[k], d.dx[k]));
        a = std::min(a, max_step(it.s[k], d.ds[k]));
      }
      if (d.dtau < 0.0) a = std::min(a, -it.tau / d.dtau);
      if (d.dkappa < 0.0) a = std::min(a, -it.kappa / d.dkappa);
      return a;
    };

    // predictor
    std::vector<MatrixXd> rcAff(nb);
    for (int k = 0; k < nb; ++k) rcAff[k] = -it.x[k];
    const Direction dAff = build_direction(rcAff, -it.tau * it.kappa);
    const double aAff = std::min(1.0, opts_.stepFraction * step_bound(dAff));

    double muAff = (it.tau + aAff * dAff.dtau) * (it.kappa + aAff * dAff.dkappa);
    for (int k = 0; k < nb; ++k)
      muAff += (it.x[k] + aAff * dAff.dx[k])
                   .cwiseProduct(it.s[k] + aAff * dAff.ds[k])
                   .sum();
    muAff /= (cp.nu + 1);
    double sigma = std::pow(std::max(muAff, 0.0) / mu, 3.0);
    sigma = std::clamp(sigma, 1e-8, 1.0 - 1e-8);

    // corrector
    std::vector<MatrixXd> rc(nb);
    for (int k = 0; k < nb; ++k) {
      const MatrixXd li = nt[k].l.triangularView<Eigen::Lower>().solve(
          MatrixXd::Identity(cp.psdSize[k], cp.psdSize[k]));
      const MatrixXd dxh = sym(li * dAff.dx[k] * li.transpose());
      const MatrixXd dsh = sym(nt[k].l.transpose() * dAff.ds[k] * nt[k].l);
      MatrixXd r = sigma * mu * MatrixXd::Identity(cp.psdSize[k], cp.psdSize[k]) -
                   sym(dxh * dsh);
      rc[k] = -it.x[k] + sym(nt[k].l * lyap_solve(nt[k], r) * nt[k].l.transpose());
    }
    const double rtk = sigma * mu - it.tau * it.kappa - aAff * aAff * dAff.dtau * dAff.dkappa;
    Direction d = build_direction(rc, rtk);

    double alpha = std::min(1.0, opts_.stepFraction * step_bound(d));
    if (!(alpha > 0.0) || !std::isfinite(alpha)) alpha = 0.0;
    if (alpha <= 1e-8)
      ++tinySteps;
    else
      tinySteps = 0;

    for (int k = 0; k < nb; ++k) {
      it.x[k] = sym(it.x[k] + alpha * d.dx[k]);
      it.s[k] = sym(it.s[k] + alpha * d.ds[k]);
    }
    if (f > 0) it.xf.head(f) += alpha * d.dxf.head(f);
    it.y += alpha * d.dy;
    it.tau += alpha * d.dtau;
    it.kappa += alpha * d.dkappa;
  }

  const Residuals rs = residuals(cp, it);
  return finalize(SolveStatus::NumericalLimit, it, rs, opts_.maxIterations);
}

const SolverBackend& default_backend() {
  static const HsdIpmBackend backend;
  return backend;
}

}  // namespace sepkit
