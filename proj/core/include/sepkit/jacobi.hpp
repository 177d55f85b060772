#pragma once

#include <vector>

namespace sepkit {

// Perturbation strength of the inner PPT sets, computed from the largest
// root of the Jacobi polynomial P_{floor(N/2)+1}^{(d-2, N mod 2)}:
//   epsilon = d/(2(d-1)) * (1 - largestRoot).
struct EpsilonResult {
  int d = 0;
  int N = 0;
  double epsilon = 0.0;
  double largestRoot = 0.0;
  int degree = 0;  // floor(N/2) + 1
  int alpha = 0;   // d - 2
  int beta = 0;    // N mod 2
};

// All n roots of P_n^{(alpha,beta)}, ascending, strictly inside (-1,1).
// Computed as eigenvalues of the symmetric tridiagonal recurrence matrix.
std::vector<double> jacobi_roots(int n, double alpha, double beta);

// Three-term-recurrence evaluation of P_n^{(alpha,beta)}(x).
double jacobi_eval(int n, double alpha, double beta, double x);

EpsilonResult epsilon_n(int d, int N);

// First positive zero of the Bessel function J_nu, nu >= 0 integer,
// via series evaluation and bisection on a bracketing interval.
double bessel_first_zero(int nu);

}  // namespace sepkit
