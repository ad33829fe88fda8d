#pragma once

#include <complex>
#include <type_traits>

#include <Eigen/Core>

namespace bandeig {

using Complex = std::complex<double>;

template <class S>
struct scalar_traits {
  static constexpr bool is_complex = false;
  using real_type = S;
  static S conj(S x) { return x; }
  static double real(S x) { return x; }
  static double imag(S) { return 0.0; }
};

template <class R>
struct scalar_traits<std::complex<R>> {
  static constexpr bool is_complex = true;
  using real_type = R;
  static std::complex<R> conj(std::complex<R> x) { return std::conj(x); }
  static R real(std::complex<R> x) { return x.real(); }
  static R imag(std::complex<R> x) { return x.imag(); }
};

template <class S>
inline constexpr bool is_complex_v = scalar_traits<S>::is_complex;

template <class S>
using MatrixX = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;
template <class S>
using VectorX = Eigen::Matrix<S, Eigen::Dynamic, 1>;

using Index = Eigen::Index;

}  // namespace bandeig
