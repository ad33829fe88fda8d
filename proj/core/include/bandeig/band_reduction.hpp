#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "bandeig/banded_hermitian.hpp"
#include "bandeig/dense_hermitian.hpp"
#include "bandeig/eigen_pairs.hpp"
#include "bandeig/scalar.hpp"

namespace bandeig {

/// One block Householder panel in compact WY form: the reflectors act on rows
/// [offset, n) and Q = I - V T V^H equals the product of the panel's
/// elementary reflectors.
template <class S>
struct ReflectorPanel {
  Index offset;   // first row the panel touches
  MatrixX<S> V;   // (n - offset) x nt, unit lower trapezoidal
  MatrixX<S> T;   // nt x nt, upper triangular
};

/// Aggregated unitary transform U from the band reduction, D = U A U^H.
template <class S>
class BandReductionTransform {
 public:
  BandReductionTransform(Index n, Index n_bw) : n_(n), n_bw_(n_bw) {}

  Index n() const { return n_; }
  Index semibandwidth() const { return n_bw_; }
  const std::vector<ReflectorPanel<S>>& panels() const { return panels_; }
  void add_panel(ReflectorPanel<S> p) { panels_.push_back(std::move(p)); }

  /// C <- Q_p C restricted to the panel's row range.
  void apply_panel(const ReflectorPanel<S>& p, MatrixX<S>& C, bool adjoint) const {
    auto rows = C.middleRows(p.offset, n_ - p.offset);
    MatrixX<S> W = p.V.adjoint() * rows;             // nt x m
    if (adjoint)
      rows -= p.V * (p.T.adjoint() * W).eval();
    else
      rows -= p.V * (p.T * W).eval();
  }

  /// X = U^H Xhat (applies panel reflectors in reverse order).
  MatrixX<S> backtransform_block(MatrixX<S> X) const {
    if (X.rows() != n_)
      throw std::invalid_argument("backtransform: row dimension mismatch");
    for (auto it = panels_.rbegin(); it != panels_.rend(); ++it)
      apply_panel(*it, X, /*adjoint=*/false);
    return X;
  }

  /// Materialize U itself (U = Q_m^H ... Q_1^H).
  MatrixX<S> materialize() const {
    MatrixX<S> U = MatrixX<S>::Identity(n_, n_);
    for (const auto& p : panels_) apply_panel(p, U, /*adjoint=*/true);
    return U;
  }

 private:
  Index n_, n_bw_;
  std::vector<ReflectorPanel<S>> panels_;
};

namespace detail {

/// Complex-safe Householder reflector: H^H x = beta e1 with
/// H = I - tau v v^H, v(0) = 1. Returns tau = 0 when x is already e1-shaped.
template <class S>
S make_reflector(VectorX<S>& x, double& beta_out) {
  const Index m = x.size();
  const S alpha = x(0);
  double xnorm = m > 1 ? x.tail(m - 1).norm() : 0.0;
  if (xnorm == 0.0 && scalar_traits<S>::imag(alpha) == 0.0) {
    beta_out = scalar_traits<S>::real(alpha);
    return S(0);
  }
  const double anorm = std::sqrt(std::norm(alpha) + xnorm * xnorm);
  const double beta = scalar_traits<S>::real(alpha) >= 0 ? -anorm : anorm;
  S tau;
  if constexpr (is_complex_v<S>)
    tau = S((beta - alpha.real()) / beta, -alpha.imag() / beta);
  else
    tau = (beta - alpha) / beta;
  const S scale = S(1) / (alpha - S(beta));
  x.tail(m - 1) *= scale;
  x(0) = S(1);
  beta_out = beta;
  return tau;
}

}  // namespace detail

/// Reduce a dense Hermitian matrix to banded form, D = U A U^H, using blocked
/// Householder QR panels of width n_bw below the band. Panels that are already
/// zero below the band are skipped, so a matrix that is already banded yields
/// an identity transform with zero panels.
template <class S>
std::pair<BandedHermitian<S>, BandReductionTransform<S>> band_reduce(
    const DenseHermitian<S>& A, Index n_bw) {
  const Index n = A.n();
  if (n_bw < 1 || n_bw >= n)
    throw std::invalid_argument("band_reduce: require 1 <= n_bw < n");

  MatrixX<S> W = A.matrix();
  BandReductionTransform<S> transform(n, n_bw);
  const Index b = n_bw;  // panel width equals the target semibandwidth

  for (Index k = 0; k + b < n; k += b) {
    const Index off = k + b;
    const Index m = n - off;          // rows touched by this panel
    const Index w = std::min(b, n - k);
    const Index nt = std::min(m, w);  // reflector count

    // skip panels with nothing below the band
    bool already_banded = true;
    for (Index j = 0; j < w && already_banded; ++j)
      for (Index i = j + 1; i < m; ++i)
        if (W(off + i, k + j) != S(0)) { already_banded = false; break; }
    if (already_banded) continue;

    // Householder QR of the sub-band panel W(off:n, k:k+w)
    MatrixX<S> P = W.block(off, k, m, w);
    MatrixX<S> V = MatrixX<S>::Zero(m, nt);
    VectorX<S> taus(nt);
    for (Index t = 0; t < nt; ++t) {
      VectorX<S> x = P.col(t).tail(m - t);
      double beta;
      taus(t) = detail::make_reflector(x, beta);
      V.col(t).tail(m - t) = x;
      P(t, t) = S(beta);
      P.col(t).tail(m - t - 1).setZero();
      if (taus(t) != S(0) && t + 1 < w) {
        auto C = P.block(t, t + 1, m - t, w - t - 1);
        VectorX<S> vh = x;
        MatrixX<S> proj = vh.adjoint() * C;
        C -= scalar_traits<S>::conj(taus(t)) * vh * proj;
      }
    }

    // T factor of the compact WY form (forward, columnwise)
    MatrixX<S> T = MatrixX<S>::Zero(nt, nt);
    for (Index t = 0; t < nt; ++t) {
      T(t, t) = taus(t);
      if (t > 0) {
        VectorX<S> z = V.leftCols(t).adjoint() * V.col(t);
        T.col(t).head(t) = -taus(t) * (T.topLeftCorner(t, t) * z);
      }
    }

    // panel columns now hold R; mirror into the upper triangle
    W.block(off, k, m, w) = P;
    W.block(k, off, w, m) = P.adjoint();

    // trailing two-sided update: B <- Q^H B Q, Q = I - V T V^H
    {
      auto B = W.block(off, off, m, m);
      MatrixX<S> Z = V.adjoint() * B;                     // nt x m
      MatrixX<S> upd = V * (T.adjoint() * Z).eval();      // V T^H V^H B
      B -= upd;
      MatrixX<S> Z2 = B * V;                              // m x nt
      B -= (Z2 * T).eval() * V.adjoint();
      B = (B + B.adjoint().eval()) * S(0.5);              // keep Hermitian
    }

    transform.add_panel(ReflectorPanel<S>{off, std::move(V), std::move(T)});
  }

  // harvest the band; roundoff outside the band is dropped
  BandedHermitian<S> D(n, n_bw);
  for (Index j = 0; j < n; ++j) {
    if constexpr (is_complex_v<S>)
      D.band(0, j) = S(scalar_traits<S>::real(W(j, j)), 0);
    else
      D.band(0, j) = W(j, j);
    for (Index d = 1; d <= n_bw && j + d < n; ++d) D.band(d, j) = W(j + d, j);
  }
  return {std::move(D), std::move(transform)};
}

/// X = U^H Xhat, mapping eigenvectors of D back to eigenvectors of A.
template <class S>
EigenPairs<S> backtransform(const BandReductionTransform<S>& T, const EigenPairs<S>& xhat) {
  EigenPairs<S> out;
  out.values = xhat.values;
  out.vectors = T.backtransform_block(xhat.vectors);
  return out;
}

}  // namespace bandeig
