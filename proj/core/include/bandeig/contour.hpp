#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "bandeig/scalar.hpp"

namespace bandeig {

namespace detail {

/// Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration on P_k.
inline void gauss_legendre(int k, std::vector<double>& x, std::vector<double>& w) {
  x.assign(k, 0.0);
  w.assign(k, 0.0);
  for (int i = 0; i < (k + 1) / 2; ++i) {
    double t = std::cos(M_PI * (i + 0.75) / (k + 0.5));
    double pp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < k; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * t * p1 - j * p2) / (j + 1.0);
      }
      pp = k * (t * p0 - p1) / (t * t - 1.0);
      const double dt = p0 / pp;
      t -= dt;
      if (std::abs(dt) < 1e-15) break;
    }
    x[i] = -t;
    x[k - 1 - i] = t;
    w[i] = w[k - 1 - i] = 2.0 / ((1.0 - t * t) * pp * pp);
  }
}

}  // namespace detail

/// Quadrature of the spectral projector for the interval [a, b]: a circle
/// centered at (a+b)/2 with radius (b-a)/2, discretized by Gauss-Legendre.
/// Only the n_e/2 upper-half nodes are stored; the lower half is folded in by
/// conjugation, so the filter is f(x) = sum_j 2 Re(w_j / (z_j - x)).
struct ContourQuadrature {
  double a = 0, b = 0;
  Index n_e = 0;                 // total node count on the full circle
  std::vector<Complex> nodes;    // upper-half nodes, Im z > 0
  std::vector<Complex> weights;

  double filter_value(double x) const {
    double f = 0;
    for (size_t j = 0; j < nodes.size(); ++j)
      f += 2.0 * (weights[j] / (nodes[j] - x)).real();
    return f;
  }

  double min_imag() const {
    double m = std::numeric_limits<double>::max();
    for (const auto& z : nodes) m = std::min(m, z.imag());
    return m;
  }
};

inline ContourQuadrature make_contour(double a, double b, Index n_e) {
  if (a >= b) throw std::invalid_argument("make_contour: require a < b");
  if (n_e < 2 || n_e % 2 != 0) throw std::invalid_argument("make_contour: n_e must be even, >= 2");
  ContourQuadrature q;
  q.a = a;
  q.b = b;
  q.n_e = n_e;
  const double c = 0.5 * (a + b), r = 0.5 * (b - a);
  std::vector<double> gx, gw;
  detail::gauss_legendre(static_cast<int>(n_e / 2), gx, gw);
  for (size_t j = 0; j < gx.size(); ++j) {
    const double theta = 0.5 * M_PI * (1.0 - gx[j]);  // (0, pi)
    const Complex e(std::cos(theta), std::sin(theta));
    q.nodes.push_back(c + r * e);
    q.weights.push_back(0.25 * r * gw[j] * e);
  }
  return q;
}

}  // namespace bandeig
