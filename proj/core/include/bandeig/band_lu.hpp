#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "bandeig/banded_hermitian.hpp"
#include "bandeig/scalar.hpp"

namespace bandeig {

/// Raised when a quadrature node sits numerically on an eigenvalue of D.
struct SingularShiftError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// PLU factorization of (z I - D) in banded storage with partial pivoting.
/// D has semibandwidth n_bw; fill-in grows the factored band to 2*n_bw
/// superdiagonals. Solves both (zI-D) X = B and its conjugate transpose.
class ShiftedBandFactor {
 public:
  template <class S>
  ShiftedBandFactor(const BandedHermitian<S>& D, Complex z)
      : n_(D.n()), kl_(D.semibandwidth()), ku_(D.semibandwidth()), z_(z) {
    const Index rows = 2 * kl_ + ku_ + 1;
    ab_ = MatrixX<Complex>::Zero(rows, n_);
    auto entry = [&](Index i, Index j) -> Complex& { return ab_(kl_ + ku_ + i - j, j); };
    for (Index j = 0; j < n_; ++j) {
      for (Index i = std::max<Index>(0, j - ku_); i <= std::min(n_ - 1, j + kl_); ++i) {
        Complex m = -Complex(D.at(i, j));
        if (i == j) m += z;
        entry(i, j) = m;
      }
    }
    factorize();
  }

  Index n() const { return n_; }
  Complex shift() const { return z_; }

  /// Returns (zI - D)^{-1} B, or its conjugate-transpose solve when adjoint.
  MatrixX<Complex> solve(MatrixX<Complex> B, bool adjoint = false) const {
    if (B.rows() != n_) throw std::invalid_argument("ShiftedBandFactor::solve: dimension mismatch");
    auto e = [&](Index i, Index j) -> Complex { return ab_(kl_ + ku_ + i - j, j); };
    const Index ub = ku_ + kl_;  // bandwidth of U
    if (!adjoint) {
      // P, L forward
      for (Index j = 0; j < n_; ++j) {
        if (ipiv_[j] != j) B.row(j).swap(B.row(ipiv_[j]));
        const Index lm = std::min(kl_, n_ - 1 - j);
        for (Index i = 1; i <= lm; ++i) B.row(j + i) -= e(j + i, j) * B.row(j);
      }
      // U backward
      for (Index j = n_ - 1; j >= 0; --j) {
        B.row(j) /= e(j, j);
        for (Index i = std::max<Index>(0, j - ub); i < j; ++i)
          B.row(i) -= e(i, j) * B.row(j);
      }
    } else {
      // U^H forward
      for (Index j = 0; j < n_; ++j) {
        for (Index i = std::max<Index>(0, j - ub); i < j; ++i)
          B.row(j) -= std::conj(e(i, j)) * B.row(i);
        B.row(j) /= std::conj(e(j, j));
      }
      // L^H backward, then the interchanges in reverse
      for (Index j = n_ - 2; j >= 0; --j) {
        const Index lm = std::min(kl_, n_ - 1 - j);
        for (Index i = 1; i <= lm; ++i) B.row(j) -= std::conj(e(j + i, j)) * B.row(j + i);
        if (ipiv_[j] != j) B.row(j).swap(B.row(ipiv_[j]));
      }
    }
    return B;
  }

 private:
  void factorize() {
    ipiv_.resize(n_);
    auto e = [&](Index i, Index j) -> Complex& { return ab_(kl_ + ku_ + i - j, j); };
    const Index ub = ku_ + kl_;
    for (Index j = 0; j < n_; ++j) {
      // pivot in column j among rows j..j+kl
      const Index lm = std::min(kl_, n_ - 1 - j);
      Index p = j;
      double best = std::abs(e(j, j));
      for (Index i = 1; i <= lm; ++i) {
        const double v = std::abs(e(j + i, j));
        if (v > best) { best = v; p = j + i; }
      }
      ipiv_[j] = p;
      if (best == 0.0)
        throw SingularShiftError("shifted band factor: exact zero pivot column (shift on an eigenvalue?)");
      if (p != j) {
        const Index cmax = std::min(n_ - 1, j + ub);
        for (Index c = j; c <= cmax; ++c) std::swap(e(j, c), e(p, c));
      }
      const Complex piv = e(j, j);
      for (Index i = 1; i <= lm; ++i) e(j + i, j) /= piv;
      const Index cmax = std::min(n_ - 1, j + ub);
      for (Index c = j + 1; c <= cmax; ++c) {
        const Complex u = e(j, c);
        if (u != Complex(0))
          for (Index i = 1; i <= lm; ++i) e(j + i, c) -= e(j + i, j) * u;
      }
    }
  }

  Index n_, kl_, ku_;
  Complex z_;
  MatrixX<Complex> ab_;
  std::vector<Index> ipiv_;
};

/// Convenience wrappers matching the factor/solve split.
template <class S>
ShiftedBandFactor band_lu_factor(const BandedHermitian<S>& D, Complex z) {
  return ShiftedBandFactor(D, z);
}

inline MatrixX<Complex> band_solve(const ShiftedBandFactor& F, const MatrixX<Complex>& B,
                                   bool adjoint = false) {
  return F.solve(B, adjoint);
}

}  // namespace bandeig
