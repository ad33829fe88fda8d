#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "bandeig/dense_hermitian.hpp"
#include "bandeig/scalar.hpp"

namespace bandeig {

/// Compact band storage of a Hermitian matrix: the n_bw+1 diagonals of the
/// lower triangle. bands(d, i) holds D(i+d, i) for 0 <= d <= n_bw,
/// 0 <= i < n - d. Entries outside the band have no storage.
template <class S>
class BandedHermitian {
 public:
  BandedHermitian(Index n, Index n_bw)
      : n_(n), n_bw_(n_bw), bands_(MatrixX<S>::Zero(n_bw + 1, n)) {
    if (n < 1) throw std::invalid_argument("BandedHermitian: n >= 1 required");
    if (n_bw < 1 || n_bw >= n)
      throw std::invalid_argument("BandedHermitian: require 1 <= n_bw < n");
  }

  Index n() const { return n_; }
  Index semibandwidth() const { return n_bw_; }

  /// D(i+d, i), 0 <= d <= n_bw.
  S& band(Index d, Index i) { return bands_(d, i); }
  S band(Index d, Index i) const { return bands_(d, i); }
  const MatrixX<S>& bands() const { return bands_; }

  /// Arbitrary entry D(i, j); zero outside the band.
  S at(Index i, Index j) const {
    if (i < j) return scalar_traits<S>::conj(at(j, i));
    const Index d = i - j;
    if (d > n_bw_) return S(0);
    return bands_(d, j);
  }

  /// Extract the in-band lower triangle of a dense Hermitian matrix. Throws
  /// when entries outside the requested band are nonzero.
  static BandedHermitian from_dense(const DenseHermitian<S>& A, Index n_bw,
                                    double drop_tol = 0.0) {
    BandedHermitian D(A.n(), n_bw);
    const auto& M = A.matrix();
    for (Index j = 0; j < A.n(); ++j) {
      for (Index i = j; i < A.n(); ++i) {
        if (i - j <= n_bw) {
          D.band(i - j, j) = M(i, j);
        } else if (std::abs(M(i, j)) > drop_tol) {
          throw std::invalid_argument("BandedHermitian::from_dense: entry outside band");
        }
      }
    }
    return D;
  }

  DenseHermitian<S> to_dense() const {
    MatrixX<S> M = MatrixX<S>::Zero(n_, n_);
    for (Index j = 0; j < n_; ++j)
      for (Index d = 0; d <= n_bw_ && j + d < n_; ++d) {
        M(j + d, j) = bands_(d, j);
        M(j, j + d) = scalar_traits<S>::conj(bands_(d, j));
      }
    return DenseHermitian<S>(std::move(M), /*check=*/false);
  }

  double frobenius_norm() const {
    double diag2 = 0, off2 = 0;
    for (Index i = 0; i < n_; ++i) diag2 += std::norm(bands_(0, i));
    for (Index d = 1; d <= n_bw_; ++d)
      for (Index i = 0; i < n_ - d; ++i) off2 += std::norm(bands_(d, i));
    return std::sqrt(diag2 + 2.0 * off2);
  }

  /// Gershgorin interval containing the whole spectrum.
  std::pair<double, double> gershgorin_bounds() const {
    double lo = std::numeric_limits<double>::max();
    double hi = std::numeric_limits<double>::lowest();
    for (Index i = 0; i < n_; ++i) {
      double radius = 0;
      for (Index d = 1; d <= n_bw_; ++d) {
        if (i + d < n_) radius += std::abs(bands_(d, i));       // below diagonal
        if (i >= d) radius += std::abs(bands_(d, i - d));        // above diagonal
      }
      const double c = scalar_traits<S>::real(bands_(0, i));
      lo = std::min(lo, c - radius);
      hi = std::max(hi, c + radius);
    }
    return {lo, hi};
  }

  /// Y = D * X using band storage only.
  MatrixX<S> apply(const MatrixX<S>& X) const {
    if (X.rows() != n_) throw std::invalid_argument("BandedHermitian::apply: dimension mismatch");
    MatrixX<S> Y = MatrixX<S>::Zero(n_, X.cols());
    for (Index j = 0; j < n_; ++j) {
      Y.row(j) += bands_(0, j) * X.row(j);
      for (Index d = 1; d <= n_bw_ && j + d < n_; ++d) {
        const S v = bands_(d, j);
        Y.row(j + d) += v * X.row(j);
        Y.row(j) += scalar_traits<S>::conj(v) * X.row(j + d);
      }
    }
    return Y;
  }

 private:
  Index n_, n_bw_;
  MatrixX<S> bands_;
};

}  // namespace bandeig
