#pragma once

#include <stdexcept>
#include <utility>

#include "bandeig/scalar.hpp"

namespace bandeig {

/// Full-storage Hermitian (or real symmetric) matrix. Construction enforces
/// A(i,j) == conj(A(j,i)) exactly: the upper triangle is mirrored from the
/// lower one and the diagonal imaginary part is dropped.
template <class S>
class DenseHermitian {
 public:
  using Scalar = S;

  explicit DenseHermitian(MatrixX<S> data, bool check = true)
      : data_(std::move(data)) {
    if (data_.rows() != data_.cols() || data_.rows() < 1)
      throw std::invalid_argument("DenseHermitian: matrix must be square, n >= 1");
    if (check) {
      const double tol = 1e-12 * (1.0 + data_.template lpNorm<Eigen::Infinity>());
      if ((data_ - data_.adjoint().eval()).template lpNorm<Eigen::Infinity>() > tol)
        throw std::invalid_argument("DenseHermitian: input is not Hermitian");
    }
    // mirror so the invariant holds to 0 ulp
    for (Index j = 0; j < data_.cols(); ++j) {
      if constexpr (is_complex_v<S>) data_(j, j) = S(scalar_traits<S>::real(data_(j, j)), 0);
      for (Index i = j + 1; i < data_.rows(); ++i)
        data_(j, i) = scalar_traits<S>::conj(data_(i, j));
    }
  }

  /// Build from the lower triangle only; upper entries of `lower` are ignored.
  static DenseHermitian from_lower(const MatrixX<S>& lower) {
    MatrixX<S> full = lower;
    return DenseHermitian(std::move(full), /*check=*/false);
  }

  Index n() const { return data_.rows(); }
  static constexpr bool is_real() { return !is_complex_v<S>; }
  const MatrixX<S>& matrix() const { return data_; }

  double frobenius_norm() const { return data_.norm(); }

 private:
  MatrixX<S> data_;
};

}  // namespace bandeig
