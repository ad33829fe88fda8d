#pragma once

#include <vector>

#include "bandeig/banded_hermitian.hpp"
#include "bandeig/dense_hermitian.hpp"
#include "bandeig/eigen_pairs.hpp"
#include "bandeig/scalar.hpp"

namespace bandeig {

/// Orth = ||X^H X - I||_max / n, where n is the row dimension of X.
template <class S>
double orthogonality(const MatrixX<S>& X, Index n) {
  if (X.rows() != n) throw std::invalid_argument("orthogonality: X must have n rows");
  MatrixX<S> G = X.adjoint() * X;
  G.diagonal().array() -= S(1);
  return G.template lpNorm<Eigen::Infinity>() / static_cast<double>(n);
}

struct AccuracyReport {
  double orth = 0;           // ||X^H X - I||_max / n
  double max_residual = 0;   // max_i ||A x_i - lambda_i x_i||_2 / ||A||_F
  double max_residual_raw = 0;
  std::vector<double> per_pair_residuals;  // 2-norms, unnormalized
};

template <class S, class Op>
AccuracyReport accuracy_report_impl(const Op& apply, double fro_norm,
                                    const EigenPairs<S>& pairs, Index n) {
  AccuracyReport rep;
  rep.orth = orthogonality<S>(pairs.vectors, n);
  MatrixX<S> R = apply(pairs.vectors);
  for (Index j = 0; j < pairs.count(); ++j) {
    const double r = (R.col(j) - pairs.values(j) * pairs.vectors.col(j)).norm();
    rep.per_pair_residuals.push_back(r);
    rep.max_residual_raw = std::max(rep.max_residual_raw, r);
  }
  rep.max_residual = fro_norm > 0 ? rep.max_residual_raw / fro_norm : 0.0;
  return rep;
}

template <class S>
AccuracyReport accuracy_report(const DenseHermitian<S>& A, const EigenPairs<S>& pairs) {
  return accuracy_report_impl<S>(
      [&](const MatrixX<S>& X) { return (A.matrix() * X).eval(); },
      A.frobenius_norm(), pairs, A.n());
}

template <class S>
AccuracyReport accuracy_report(const BandedHermitian<S>& D, const EigenPairs<S>& pairs) {
  return accuracy_report_impl<S>(
      [&](const MatrixX<S>& X) { return D.apply(X); },
      D.frobenius_norm(), pairs, D.n());
}

}  // namespace bandeig
