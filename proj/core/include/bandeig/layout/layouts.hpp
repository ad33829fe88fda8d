#pragma once

#include <numeric>
#include <stdexcept>
#include <vector>

#include "bandeig/layout/grid.hpp"
#include "bandeig/scalar.hpp"

namespace bandeig {

/// 2D block-cyclic distribution: block (I, J) of an n_rows x n_cols matrix
/// lives on grid rank (I mod p, J mod q). Local tiles are stored as one dense
/// column-major matrix per rank in the usual packed local indexing.
template <class S>
struct BlockCyclicLayout {
  Index n_rows = 0, n_cols = 0;
  Index m_b = 1, n_b = 1;
  ProcessGrid grid;
  std::vector<MatrixX<S>> local;  // one per rank

  BlockCyclicLayout() = default;
  BlockCyclicLayout(Index rows, Index cols, Index mb, Index nb, ProcessGrid g)
      : n_rows(rows), n_cols(cols), m_b(mb), n_b(nb), grid(g) {
    if (mb < 1 || nb < 1) throw std::invalid_argument("BlockCyclicLayout: block sizes >= 1");
    local.resize(grid.ranks());
    for (Index r = 0; r < grid.ranks(); ++r)
      local[r] = MatrixX<S>::Zero(local_rows(grid.row_of(r)), local_cols(grid.col_of(r)));
  }

  Index local_rows(Index grid_row) const { return numroc(n_rows, m_b, grid_row, grid.p); }
  Index local_cols(Index grid_col) const { return numroc(n_cols, n_b, grid_col, grid.q); }

  Index owner_row(Index i) const { return (i / m_b) % grid.p; }
  Index owner_col(Index j) const { return (j / n_b) % grid.q; }
  Index owner(Index i, Index j) const { return grid.rank_at(owner_row(i), owner_col(j)); }
  Index local_row(Index i) const { return (i / (m_b * grid.p)) * m_b + i % m_b; }
  Index local_col(Index j) const { return (j / (n_b * grid.q)) * n_b + j % n_b; }

  /// Inverse maps (local index on a given grid row/col back to global).
  Index global_row(Index grid_row, Index lr) const {
    return (lr / m_b) * (m_b * grid.p) + grid_row * m_b + lr % m_b;
  }
  Index global_col(Index grid_col, Index lc) const {
    return (lc / n_b) * (n_b * grid.q) + grid_col * n_b + lc % n_b;
  }

  S& at_global(Index i, Index j) { return local[owner(i, j)](local_row(i), local_col(j)); }
  S at_global(Index i, Index j) const { return local[owner(i, j)](local_row(i), local_col(j)); }

  /// Serial scatter/gather; reference paths for tests and setup, no messages.
  static BlockCyclicLayout scatter(const MatrixX<S>& M, Index mb, Index nb, ProcessGrid g) {
    BlockCyclicLayout out(M.rows(), M.cols(), mb, nb, g);
    for (Index j = 0; j < M.cols(); ++j)
      for (Index i = 0; i < M.rows(); ++i) out.at_global(i, j) = M(i, j);
    return out;
  }
  MatrixX<S> gather() const {
    MatrixX<S> M(n_rows, n_cols);
    for (Index j = 0; j < n_cols; ++j)
      for (Index i = 0; i < n_rows; ++i) M(i, j) = at_global(i, j);
    return M;
  }
};

/// Irregular 1D block distribution of full-height columns: rank i holds
/// counts[i] consecutive columns. Every rank knows the whole count vector.
template <class S>
struct Irregular1DLayout {
  Index n_rows = 0;
  std::vector<Index> counts;   // one per rank
  std::vector<Index> offsets;  // prefix sums, size ranks + 1
  std::vector<MatrixX<S>> local;

  Irregular1DLayout() = default;
  Irregular1DLayout(Index rows, std::vector<Index> counts_) : n_rows(rows), counts(std::move(counts_)) {
    offsets.assign(counts.size() + 1, 0);
    for (size_t i = 0; i < counts.size(); ++i) {
      if (counts[i] < 0) throw std::invalid_argument("Irregular1DLayout: negative count");
      offsets[i + 1] = offsets[i] + counts[i];
    }
    local.resize(counts.size());
    for (size_t i = 0; i < counts.size(); ++i)
      local[i] = MatrixX<S>::Zero(n_rows, counts[i]);
  }

  Index ranks() const { return static_cast<Index>(counts.size()); }
  Index nev() const { return offsets.back(); }

  /// Owning rank of a global column (counts with zero entries are skipped).
  Index owner(Index j) const {
    const auto it = std::upper_bound(offsets.begin(), offsets.end(), j);
    return static_cast<Index>(it - offsets.begin()) - 1;
  }

  static Irregular1DLayout scatter(const MatrixX<S>& M, std::vector<Index> counts_) {
    Irregular1DLayout out(M.rows(), std::move(counts_));
    if (out.nev() != M.cols()) throw std::invalid_argument("Irregular1DLayout: count sum mismatch");
    for (Index r = 0; r < out.ranks(); ++r)
      out.local[r] = M.middleCols(out.offsets[r], out.counts[r]);
    return out;
  }
  MatrixX<S> gather() const {
    MatrixX<S> M(n_rows, nev());
    for (Index r = 0; r < ranks(); ++r)
      if (counts[r] > 0) M.middleCols(offsets[r], counts[r]) = local[r];
    return M;
  }
};

}  // namespace bandeig
