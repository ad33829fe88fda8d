#pragma once

#include <cmath>

#include "bandeig/banded_hermitian.hpp"
#include "bandeig/scalar.hpp"

namespace bandeig {

/// Eigenvalue sign counts of D - s I by Sylvester's law of inertia.
struct Inertia {
  Index n_neg = 0, n_zero = 0, n_pos = 0;
  double shift = 0;

  Index total() const { return n_neg + n_zero + n_pos; }
};

/// Count-only banded LDL^H of D - s I: the band is processed column by column
/// with 1x1 pivots and only the active window is kept, so no L is stored.
/// Pivots with |pivot| <= eps * ||D||_F are reported in n_zero; the caller may
/// perturb s and retry.
template <class S>
Inertia inertia(const BandedHermitian<S>& D, double s) {
  const Index n = D.n();
  const Index bw = D.semibandwidth();
  const double zero_tol = std::numeric_limits<double>::epsilon() * D.frobenius_norm();

  // working copy of the lower band of D - s I
  MatrixX<S> B = D.bands();
  for (Index i = 0; i < n; ++i) B(0, i) -= S(s);

  Inertia res;
  res.shift = s;
  for (Index j = 0; j < n; ++j) {
    const double d = scalar_traits<S>::real(B(0, j));
    if (std::abs(d) <= zero_tol) {
      ++res.n_zero;
      continue;  // deflate: near-singular pivot, flagged for the caller
    }
    if (d < 0)
      ++res.n_neg;
    else
      ++res.n_pos;
    const Index w = std::min(bw, n - 1 - j);
    for (Index k = 1; k <= w; ++k) {
      const S ljk = B(k, j);  // (D - sI)(j+k, j)
      if (ljk == S(0)) continue;
      for (Index i = k; i <= w; ++i)
        B(i - k, j + k) -= B(i, j) * scalar_traits<S>::conj(ljk) / S(d);
    }
  }
  return res;
}

/// Retry wrapper: when the factorization hits near-zero pivots, nudge the
/// shift by sqrt(eps) * ||D||_F once and refactor.
template <class S>
Inertia inertia_robust(const BandedHermitian<S>& D, double s) {
  Inertia res = inertia(D, s);
  if (res.n_zero > 0) {
    const double nudge =
        std::sqrt(std::numeric_limits<double>::epsilon()) * std::max(1.0, D.frobenius_norm());
    res = inertia(D, s + nudge);
    res.shift = s + nudge;
  }
  return res;
}

}  // namespace bandeig
