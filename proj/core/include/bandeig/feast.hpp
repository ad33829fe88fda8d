#pragma once

#include <cmath>
#include <optional>
#include <random>
#include <vector>

#include <Eigen/QR>

#include "bandeig/band_lu.hpp"
#include "bandeig/banded_hermitian.hpp"
#include "bandeig/contour.hpp"
#include "bandeig/eigen_pairs.hpp"
#include "bandeig/jacobi.hpp"
#include "bandeig/parallel.hpp"
#include "bandeig/scalar.hpp"

namespace bandeig {

inline Index oversized_subspace(Index m_i) {
  return std::max<Index>(static_cast<Index>(std::ceil(1.3 * static_cast<double>(m_i))), m_i + 10);
}

template <class S>
struct SliceSolveConfig {
  Index m_i = 0;          // expected eigenvalue count in the slice
  Index m0 = -1;          // subspace size; -1 selects max(ceil(1.3 m_i), m_i + 10)
  double tol = 1e-11;     // residual tolerance, relative to ||D||_F
  Index max_iter = 30;
  std::optional<MatrixX<S>> X0;  // warm-start block; short blocks are padded
  std::uint64_t seed = 12345;
  bool include_upper = true;  // closed upper endpoint; driver opens it for interior slices
};

template <class S>
struct SliceResult {
  EigenPairs<S> pairs;   // eigenpairs inside [a, b]
  Index iterations = 0;  // filter applications used
  bool converged = false;
  Index m_found = 0;
  double max_residual = 0;  // over reported pairs, 2-norm
};

namespace detail {

/// Applies the rational filter sum_j [w_j (z_j I - D)^{-1} + conj-fold] to X.
/// For real symmetric D the fold collapses to 2 Re of the upper-half solves;
/// for complex Hermitian D it needs the adjoint solves of the same factors.
template <class S>
MatrixX<S> filter_apply(const std::vector<ShiftedBandFactor>& factors,
                        const ContourQuadrature& q, const MatrixX<S>& X) {
  const size_t k = factors.size();
  std::vector<MatrixX<Complex>> parts(k);
  parallel_for(
      k,
      [&](size_t j) {
        MatrixX<Complex> rhs = X.template cast<Complex>();
        MatrixX<Complex> Y = factors[j].solve(rhs) * q.weights[j];
        if constexpr (is_complex_v<S>)
          Y += factors[j].solve(rhs, /*adjoint=*/true) * std::conj(q.weights[j]);
        parts[j] = std::move(Y);
      },
      /*max_workers=*/16);
  MatrixX<Complex> acc = MatrixX<Complex>::Zero(X.rows(), X.cols());
  for (const auto& p : parts) acc += p;  // fixed order keeps results deterministic
  if constexpr (is_complex_v<S>)
    return acc;
  else
    return 2.0 * acc.real();
}

template <class S>
void pad_with_random(MatrixX<S>& X, Index from_col, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist(0.0, 1.0);
  for (Index j = from_col; j < X.cols(); ++j)
    for (Index i = 0; i < X.rows(); ++i) {
      if constexpr (is_complex_v<S>)
        X(i, j) = S(dist(rng), dist(rng));
      else
        X(i, j) = dist(rng);
    }
}

}  // namespace detail

/// Contour-integral subspace iteration for one spectral slice of D. Each pass
/// filters the block through the quadrature, orthonormalizes, and extracts
/// Ritz pairs from the reduced problem; Ritz values outside [a, b] are kept in
/// the iterate but dropped from the result.
template <class S>
SliceResult<S> feast_slice(const BandedHermitian<S>& D, const ContourQuadrature& q,
                           const SliceSolveConfig<S>& cfg) {
  const Index n = D.n();
  Index m0 = cfg.m0 > 0 ? cfg.m0 : oversized_subspace(cfg.m_i);
  m0 = std::min(m0, n);
  if (cfg.X0 && cfg.X0->cols() > m0)
    throw std::invalid_argument("feast_slice: warm-start block wider than m0");

  const double dnorm = D.frobenius_norm();
  const double rank_tol = std::sqrt(std::numeric_limits<double>::epsilon());

  MatrixX<S> X(n, m0);
  Index given = 0;
  if (cfg.X0) {
    if (cfg.X0->rows() != n) throw std::invalid_argument("feast_slice: warm-start row mismatch");
    given = cfg.X0->cols();
    X.leftCols(given) = *cfg.X0;
  }
  detail::pad_with_random(X, given, cfg.seed);

  std::vector<ShiftedBandFactor> factors;
  factors.reserve(q.nodes.size());
  for (const auto& z : q.nodes) factors.emplace_back(D, z);

  SliceResult<S> result;
  VectorX<double> ritz_values;

  for (Index iter = 1; iter <= cfg.max_iter; ++iter) {
    result.iterations = iter;
    MatrixX<S> Q = detail::filter_apply(factors, q, X);

    // orthonormalize; rank collapse shrinks the active block
    Eigen::ColPivHouseholderQR<MatrixX<S>> qr(Q);
    const double r00 = std::abs(qr.matrixR()(0, 0));
    Index rank = 0;
    for (Index j = 0; j < Q.cols(); ++j)
      if (std::abs(qr.matrixR()(j, j)) > rank_tol * r00) ++rank;
    rank = std::max<Index>(rank, 1);
    MatrixX<S> Qorth = qr.householderQ() * MatrixX<S>::Identity(n, rank);

    MatrixX<S> Aq = Qorth.adjoint() * D.apply(Qorth);
    Aq = ((Aq + Aq.adjoint().eval()) * S(0.5)).eval();
    EigenPairs<S> reduced = reduced_hermitian_eig<S>(Aq);

    X = Qorth * reduced.vectors;
    ritz_values = reduced.values;

    // Ritz values inside the slice, split by residual. The oversized block can
    // carry spurious directions whose Rayleigh quotients land inside the slice
    // but never converge; only converged pairs are ever reported, and the pass
    // ends once the expected count has converged. A genuine deficit is caught
    // later by the count validation and rerun with a larger block.
    std::vector<Index> inside, good;
    for (Index j = 0; j < ritz_values.size(); ++j) {
      const double v = ritz_values(j);
      if (v >= q.a && (cfg.include_upper ? v <= q.b : v < q.b)) inside.push_back(j);
    }
    double max_good_res = 0;
    if (!inside.empty()) {
      MatrixX<S> DX = D.apply(X);
      for (Index j : inside) {
        const double r = (DX.col(j) - ritz_values(j) * X.col(j)).norm();
        if (r <= cfg.tol * dnorm) {
          good.push_back(j);
          max_good_res = std::max(max_good_res, r);
        }
      }
    }

    result.m_found = static_cast<Index>(good.size());
    result.max_residual = max_good_res;
    // an empty first pass with expected eigenvalues gets one more filter pass
    const bool suspicious_empty = inside.empty() && cfg.m_i > 0 && iter == 1;
    const bool all_converged = good.size() == inside.size();
    const bool enough = cfg.m_i > 0 && static_cast<Index>(good.size()) >= cfg.m_i;
    if (!suspicious_empty && (all_converged || enough)) {
      result.converged = true;
      result.pairs.values.resize(good.size());
      result.pairs.vectors.resize(n, good.size());
      for (size_t t = 0; t < good.size(); ++t) {
        result.pairs.values(t) = ritz_values(good[t]);
        result.pairs.vectors.col(t) = X.col(good[t]) / X.col(good[t]).norm();
      }
      return result;
    }
  }

  // max_iter reached: hand back the converged pairs, flagged unconverged
  std::vector<Index> good;
  MatrixX<S> DX = D.apply(X);
  for (Index j = 0; j < ritz_values.size(); ++j) {
    const double v = ritz_values(j);
    if (!(v >= q.a && (cfg.include_upper ? v <= q.b : v < q.b))) continue;
    const double r = (DX.col(j) - ritz_values(j) * X.col(j)).norm();
    if (r <= cfg.tol * dnorm) {
      good.push_back(j);
      result.max_residual = std::max(result.max_residual, r);
    }
  }
  result.m_found = static_cast<Index>(good.size());
  result.pairs.values.resize(good.size());
  result.pairs.vectors.resize(D.n(), good.size());
  for (size_t t = 0; t < good.size(); ++t) {
    result.pairs.values(t) = ritz_values(good[t]);
    result.pairs.vectors.col(t) = X.col(good[t]) / X.col(good[t]).norm();
  }
  return result;
}

}  // namespace bandeig
