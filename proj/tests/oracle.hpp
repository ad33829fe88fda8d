// Independent dense Hermitian eigensolver used as the reference for the main
// library. Deliberately written as a separate implementation (phase-split 2x2
// diagonalization, atan2 angle) so the two code paths share no logic.
#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "bandeig/scalar.hpp"

namespace oracle {

using bandeig::Complex;
using bandeig::Index;
using bandeig::MatrixX;
using bandeig::VectorX;

template <class S>
struct EigResult {
  VectorX<double> values;  // ascending
  MatrixX<S> vectors;      // unit columns
};

/// Cyclic two-sided Jacobi. Each (p, q) pair is diagonalized exactly: the
/// off-diagonal phase is split off first, then a real rotation with
/// theta = atan2(2|a_pq|, a_pp - a_qq) / 2 zeroes the coupling.
template <class S>
EigResult<S> jacobi_eig(MatrixX<S> A) {
  const Index n = A.rows();
  MatrixX<S> V = MatrixX<S>::Identity(n, n);
  const double scale = std::max(1.0, A.norm());

  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0.0;
    for (Index q = 0; q < n; ++q)
      for (Index p = 0; p < q; ++p) off += std::norm(A(p, q));
    if (std::sqrt(off) <= 1e-14 * scale) break;

    for (Index q = 1; q < n; ++q) {
      for (Index p = 0; p < q; ++p) {
        const double mag = std::abs(A(p, q));
        if (mag <= 1e-18 * scale) continue;
        const S phase = A(p, q) / S(mag);  // e^{i arg}
        const double app = bandeig::scalar_traits<S>::real(A(p, p));
        const double aqq = bandeig::scalar_traits<S>::real(A(q, q));
        const double theta = 0.5 * std::atan2(2.0 * mag, app - aqq);
        const double c = std::cos(theta), s = std::sin(theta);
        // unitary J restricted to (p, q):
        //   [  c            -s        ]
        //   [  conj(phase)s  conj(phase)c ]
        const S jp_q = S(-s);
        const S jq_p = bandeig::scalar_traits<S>::conj(phase) * S(s);
        const S jq_q = bandeig::scalar_traits<S>::conj(phase) * S(c);

        for (Index i = 0; i < n; ++i) {  // columns: A <- A J, V <- V J
          const S aip = A(i, p), aiq = A(i, q);
          A(i, p) = aip * S(c) + aiq * jq_p;
          A(i, q) = aip * jp_q + aiq * jq_q;
          const S vip = V(i, p), viq = V(i, q);
          V(i, p) = vip * S(c) + viq * jq_p;
          V(i, q) = vip * jp_q + viq * jq_q;
        }
        for (Index i = 0; i < n; ++i) {  // rows: A <- J^H A
          const S api = A(p, i), aqi = A(q, i);
          A(p, i) = S(c) * api + bandeig::scalar_traits<S>::conj(jq_p) * aqi;
          A(q, i) = bandeig::scalar_traits<S>::conj(jp_q) * api +
                    bandeig::scalar_traits<S>::conj(jq_q) * aqi;
        }
      }
    }
  }

  EigResult<S> out;
  std::vector<Index> order(n);
  std::iota(order.begin(), order.end(), Index{0});
  std::sort(order.begin(), order.end(), [&](Index a, Index b) {
    return bandeig::scalar_traits<S>::real(A(a, a)) < bandeig::scalar_traits<S>::real(A(b, b));
  });
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Index t = 0; t < n; ++t) {
    out.values(t) = bandeig::scalar_traits<S>::real(A(order[t], order[t]));
    out.vectors.col(t) = V.col(order[t]) / V.col(order[t]).norm();
  }
  return out;
}

}  // namespace oracle
