#pragma once

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "bandeig/eigen_pairs.hpp"
#include "bandeig/scalar.hpp"

namespace bandeig {

/// Full eigendecomposition of a small dense Hermitian matrix by cyclic Jacobi
/// rotations. Values come back ascending, vectors as matching columns.
template <class S>
EigenPairs<S> reduced_hermitian_eig(MatrixX<S> A) {
  const Index m = A.rows();
  if (A.cols() != m) throw std::invalid_argument("reduced_hermitian_eig: square input required");
  MatrixX<S> V = MatrixX<S>::Identity(m, m);

  auto offdiag_norm = [&]() {
    double s = 0;
    for (Index q = 0; q < m; ++q)
      for (Index p = q + 1; p < m; ++p) s += std::norm(A(p, q));
    return std::sqrt(2.0 * s);
  };

  const double scale = std::max(1.0, A.norm());
  const double tol = 1e-15 * scale;
  const int max_sweeps = 40;

  for (int sweep = 0; sweep < max_sweeps && offdiag_norm() > tol; ++sweep) {
    for (Index q = 1; q < m; ++q) {
      for (Index p = 0; p < q; ++p) {
        const S apq = A(p, q);
        const double r = std::abs(apq);
        if (r <= 1e-18 * scale) continue;
        const double app = scalar_traits<S>::real(A(p, p));
        const double aqq = scalar_traits<S>::real(A(q, q));
        const S phase = apq / S(r);  // a_pq = phase * r

        const double tau = (aqq - app) / (2.0 * r);
        const double t = (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;

        // J restricted to (p,q): [[phase*c, phase*s], [-s, c]], A <- J^H A J
        const S jpp = phase * S(c), jpq = phase * S(s);
        const S jqp = S(-s), jqq = S(c);
        for (Index i = 0; i < m; ++i) {
          const S aip = A(i, p), aiq = A(i, q);
          A(i, p) = aip * jpp + aiq * jqp;
          A(i, q) = aip * jpq + aiq * jqq;
        }
        for (Index j = 0; j < m; ++j) {
          const S apj = A(p, j), aqj = A(q, j);
          A(p, j) = scalar_traits<S>::conj(jpp) * apj + scalar_traits<S>::conj(jqp) * aqj;
          A(q, j) = scalar_traits<S>::conj(jpq) * apj + scalar_traits<S>::conj(jqq) * aqj;
        }
        A(p, q) = S(0);
        A(q, p) = S(0);
        for (Index i = 0; i < m; ++i) {
          const S vip = V(i, p), viq = V(i, q);
          V(i, p) = vip * jpp + viq * jqp;
          V(i, q) = vip * jpq + viq * jqq;
        }
      }
    }
  }

  std::vector<Index> order(m);
  std::iota(order.begin(), order.end(), Index(0));
  std::sort(order.begin(), order.end(), [&](Index a, Index b) {
    return scalar_traits<S>::real(A(a, a)) < scalar_traits<S>::real(A(b, b));
  });

  EigenPairs<S> out;
  out.values.resize(m);
  out.vectors.resize(m, m);
  for (Index i = 0; i < m; ++i) {
    out.values(i) = scalar_traits<S>::real(A(order[i], order[i]));
    out.vectors.col(i) = V.col(order[i]);
  }
  return out;
}

}  // namespace bandeig
