#pragma once

#include <random>

#include "sepkit/linalg.hpp"
#include "sepkit/states.hpp"

namespace sepkit::test {

inline CMat random_hermitian(int n, std::mt19937_64& rng, double scale = 1.0) {
  CMat g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = Complex(gaussian(rng), gaussian(rng));
  return scale * hermitize(g);
}

inline CMat random_psd(int n, std::mt19937_64& rng) {
  CMat g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = Complex(gaussian(rng), gaussian(rng));
  return g * g.adjoint();
}

inline CMat random_density(int n, std::mt19937_64& rng) {
  CMat p = random_psd(n, rng);
  return p / p.trace().real();
}

inline double max_abs(const CMat& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace sepkit::test
