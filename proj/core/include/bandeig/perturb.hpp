#pragma once

#include <random>
#include <vector>

#include "bandeig/dense_hermitian.hpp"
#include "bandeig/scalar.hpp"

namespace bandeig {

/// Synthesizes a correlated matrix sequence: each step multiplies every
/// nonzero entry of the upper triangle of A by (1 + tau * eta), eta uniform in
/// [0, 1], and mirrors to keep the matrix Hermitian. Step 0 is A itself.
template <class S>
std::vector<DenseHermitian<S>> perturb_sequence(const DenseHermitian<S>& A, double tau,
                                                Index steps, std::uint64_t seed) {
  if (tau < 0) throw std::invalid_argument("perturb_sequence: tau >= 0 required");
  std::vector<DenseHermitian<S>> out;
  out.reserve(steps);
  if (steps <= 0) return out;
  out.push_back(A);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> eta(0.0, 1.0);
  const Index n = A.n();
  for (Index step = 1; step < steps; ++step) {
    MatrixX<S> M = A.matrix();
    for (Index j = 0; j < n; ++j)
      for (Index i = 0; i <= j; ++i) {
        if (M(i, j) == S(0)) continue;
        const double f = 1.0 + tau * eta(rng);
        M(i, j) *= f;
        if (i != j) M(j, i) = scalar_traits<S>::conj(M(i, j));
      }
    out.emplace_back(std::move(M), /*check=*/false);
  }
  return out;
}

}  // namespace bandeig
