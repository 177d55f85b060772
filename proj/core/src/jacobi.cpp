#include "sepkit/jacobi.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

namespace sepkit {

std::vector<double> jacobi_roots(int n, double alpha, double beta) {
  if (n < 1) throw std::invalid_argument("jacobi_roots: degree must be >= 1");
  if (alpha <= -1.0 || beta <= -1.0)
    throw std::invalid_argument("jacobi_roots: parameters must exceed -1");

  // Golub-Welsch: roots are the eigenvalues of the symmetric tridiagonal
  // matrix built from the monic three-term recurrence coefficients.
  Eigen::VectorXd diag(n), sub(std::max(n - 1, 1));
  const double s = alpha + beta;
  diag(0) = (beta - alpha) / (s + 2.0);
  for (int k = 1; k < n; ++k) {
    const double t = 2.0 * k + s;
    diag(k) = (beta * beta - alpha * alpha) / (t * (t + 2.0));
    const double bk = 4.0 * k * (k + alpha) * (k + beta) * (k + s) /
                      (t * t * (t + 1.0) * (t - 1.0));
    sub(k - 1) = std::sqrt(bk);
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub.head(std::max(n - 1, 0)),
                            Eigen::EigenvaluesOnly);
  std::vector<double> roots(es.eigenvalues().data(), es.eigenvalues().data() + n);
  return roots;  // ascending
}

double jacobi_eval(int n, double alpha, double beta, double x) {
  if (n == 0) return 1.0;
  double pm1 = 1.0;
  double p = 0.5 * (alpha + beta + 2.0) * x + 0.5 * (alpha - beta);
  for (int k = 2; k <= n; ++k) {
    const double a = 2.0 * k + alpha + beta;
    const double c1 = 2.0 * k * (k + alpha + beta) * (a - 2.0);
    const double c2 = (a - 1.0) * (a * (a - 2.0) * x + alpha * alpha - beta * beta);
    const double c3 = 2.0 * (k + alpha - 1.0) * (k + beta - 1.0) * a;
    const double next = (c2 * p - c3 * pm1) / c1;
    pm1 = p;
    p = next;
  }
  return p;
}

EpsilonResult epsilon_n(int d, int N) {
  if (d < 2) throw std::invalid_argument("epsilon_n: d must be >= 2");
  if (N < 1) throw std::invalid_argument("epsilon_n: N must be >= 1");
  EpsilonResult r;
  r.d = d;
  r.N = N;
  r.degree = N / 2 + 1;
  r.alpha = d - 2;
  r.beta = N % 2;
  const auto roots = jacobi_roots(r.degree, r.alpha, r.beta);
  r.largestRoot = roots.back();  // min over roots of (1 - x)
  r.epsilon = d / (2.0 * (d - 1)) * (1.0 - r.largestRoot);
  return r;
}

namespace {

double bessel_j_series(int nu, double x) {
  // Power series; adequate for x <~ 25, which covers first zeros up to
  // nu ~ 20. Terms alternate, so stop once they stop contributing.
  const double half = 0.5 * x;
  double term = 1.0;
  for (int k = 1; k <= nu; ++k) term *= half / k;  // (x/2)^nu / nu!
  double sum = term;
  for (int k = 1; k < 200; ++k) {
    term *= -(half * half) / (k * (k + nu));
    sum += term;
    if (std::abs(term) < 1e-18 * (1.0 + std::abs(sum)) && k > 4) break;
  }
  return sum;
}

}  // namespace

double bessel_first_zero(int nu) {
  if (nu < 0) throw std::invalid_argument("bessel_first_zero: nu must be >= 0");
  // J_nu is positive just right of 0; scan for the first sign change.
  double lo = nu == 0 ? 0.5 : static_cast<double>(nu);
  double flo = bessel_j_series(nu, lo);
  double hi = lo;
  for (int i = 0; i < 400; ++i) {
    hi += 0.25;
    const double fhi = bessel_j_series(nu, hi);
    if (flo > 0.0 && fhi <= 0.0) break;
    lo = hi;
    flo = fhi;
  }
  double fhi = bessel_j_series(nu, hi);
  if (!(flo > 0.0 && fhi <= 0.0))
    throw std::runtime_error("bessel_first_zero: bracketing failed");
  for (int i = 0; i < 200 && (hi - lo) > 1e-13; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = bessel_j_series(nu, mid);
    if (fm > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace sepkit
