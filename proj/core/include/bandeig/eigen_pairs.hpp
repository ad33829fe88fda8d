#pragma once

#include <stdexcept>
#include <utility>
#include <vector>

#include "bandeig/scalar.hpp"

namespace bandeig {

/// A set of eigenpairs: ascending real eigenvalues and the matching columns
/// of the eigenvector matrix.
template <class S>
struct EigenPairs {
  VectorX<double> values;  // ascending
  MatrixX<S> vectors;      // n x count

  Index count() const { return values.size(); }

  void check_invariants() const {
    if (vectors.cols() != values.size())
      throw std::invalid_argument("EigenPairs: value/vector count mismatch");
    for (Index i = 1; i < values.size(); ++i)
      if (values(i) < values(i - 1))
        throw std::invalid_argument("EigenPairs: values not nondecreasing");
    for (Index j = 0; j < vectors.cols(); ++j)
      if (std::abs(vectors.col(j).norm() - 1.0) > 1e-12)
        throw std::invalid_argument("EigenPairs: vector not unit norm");
  }

  /// Stable merge of ascending pair sets.
  static EigenPairs merge(const std::vector<EigenPairs>& parts) {
    Index n = 0, total = 0;
    for (const auto& p : parts) {
      total += p.count();
      if (p.count() > 0) n = p.vectors.rows();
    }
    EigenPairs out;
    out.values.resize(total);
    out.vectors.resize(n, total);
    std::vector<std::pair<double, std::pair<size_t, Index>>> order;
    order.reserve(total);
    for (size_t s = 0; s < parts.size(); ++s)
      for (Index i = 0; i < parts[s].count(); ++i)
        order.push_back({parts[s].values(i), {s, i}});
    std::stable_sort(order.begin(), order.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    for (Index i = 0; i < total; ++i) {
      const auto [s, j] = order[i].second;
      out.values(i) = parts[s].values(j);
      out.vectors.col(i) = parts[s].vectors.col(j);
    }
    return out;
  }

  EigenPairs head(Index k) const {
    EigenPairs out;
    out.values = values.head(k);
    out.vectors = vectors.leftCols(k);
    return out;
  }
};

}  // namespace bandeig
