#pragma once

#include <random>
#include <vector>

#include "bandeig/banded_hermitian.hpp"
#include "bandeig/dense_hermitian.hpp"
#include "bandeig/scalar.hpp"

namespace testutil {

using bandeig::BandedHermitian;
using bandeig::Complex;
using bandeig::DenseHermitian;
using bandeig::Index;
using bandeig::MatrixX;
using bandeig::VectorX;

template <class S>
DenseHermitian<S> random_hermitian(Index n, std::uint64_t seed, double diag_spread = 0.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist(0.0, 1.0);
  MatrixX<S> M(n, n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = j + 1; i < n; ++i) {
      if constexpr (bandeig::is_complex_v<S>)
        M(i, j) = S(dist(rng), dist(rng));
      else
        M(i, j) = dist(rng);
    }
    M(j, j) = S(diag_spread * static_cast<double>(j) + dist(rng));
  }
  return DenseHermitian<S>::from_lower(M);
}

template <class S>
BandedHermitian<S> random_banded(Index n, Index n_bw, std::uint64_t seed,
                                 double diag_spread = 0.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist(0.0, 1.0);
  BandedHermitian<S> D(n, n_bw);
  for (Index j = 0; j < n; ++j) {
    D.band(0, j) = S(diag_spread * static_cast<double>(j) + dist(rng));
    for (Index d = 1; d <= n_bw && j + d < n; ++d) {
      if constexpr (bandeig::is_complex_v<S>)
        D.band(d, j) = S(dist(rng), dist(rng));
      else
        D.band(d, j) = dist(rng);
    }
  }
  return D;
}

template <class S>
BandedHermitian<S> diag_banded(const std::vector<double>& values) {
  BandedHermitian<S> D(static_cast<Index>(values.size()), 1);
  for (size_t i = 0; i < values.size(); ++i) D.band(0, static_cast<Index>(i)) = S(values[i]);
  return D;
}

inline std::vector<double> ascending(const VectorX<double>& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

}  // namespace testutil
