#pragma once

#include <stdexcept>
#include <vector>

#include "bandeig/scalar.hpp"

namespace bandeig {

/// Simulated p x q process grid. Rank r sits at grid position
/// (r / q, r % q); ranks sharing a grid row form a row group (the
/// mpi_comm_rows analog), ranks sharing a grid column a column group.
struct ProcessGrid {
  Index p = 1, q = 1;

  ProcessGrid() = default;
  ProcessGrid(Index p_, Index q_) : p(p_), q(q_) {
    if (p < 1 || q < 1) throw std::invalid_argument("ProcessGrid: p, q >= 1 required");
  }

  Index ranks() const { return p * q; }
  Index row_of(Index r) const { return r / q; }
  Index col_of(Index r) const { return r % q; }
  Index rank_at(Index row, Index col) const { return row * q + col; }

  std::vector<Index> row_group(Index row) const {
    std::vector<Index> g;
    for (Index c = 0; c < q; ++c) g.push_back(rank_at(row, c));
    return g;
  }
  std::vector<Index> col_group(Index col) const {
    std::vector<Index> g;
    for (Index r = 0; r < p; ++r) g.push_back(rank_at(r, col));
    return g;
  }

  bool same_row(Index a, Index b) const { return row_of(a) == row_of(b); }
  bool same_col(Index a, Index b) const { return col_of(a) == col_of(b); }
};

/// ScaLAPACK numroc: local extent of a block-cyclically distributed dimension.
inline Index numroc(Index n, Index nb, Index iproc, Index nprocs) {
  const Index nblocks = n / nb;
  Index base = (nblocks / nprocs) * nb;
  const Index rem = nblocks % nprocs;
  if (iproc < rem)
    base += nb;
  else if (iproc == rem)
    base += n % nb;
  return base;
}

/// Round-robin pairing schedule realizing all-to-all exchange in a group of
/// size m: 2*ceil(m/2) - 1 rounds, every unordered pair meets exactly once.
inline std::vector<std::vector<std::pair<Index, Index>>> caterpillar_rounds(Index m) {
  std::vector<std::vector<std::pair<Index, Index>>> rounds;
  if (m < 2) return rounds;
  const Index slots = m % 2 == 0 ? m : m + 1;  // odd sizes get a bye slot
  std::vector<Index> ring(slots);
  for (Index i = 0; i < slots; ++i) ring[i] = i;
  for (Index r = 0; r < slots - 1; ++r) {
    std::vector<std::pair<Index, Index>> round;
    for (Index i = 0; i < slots / 2; ++i) {
      const Index a = ring[i], b = ring[slots - 1 - i];
      if (a < m && b < m) round.push_back({std::min(a, b), std::max(a, b)});
    }
    rounds.push_back(std::move(round));
    // rotate all but the first slot
    Index last = ring[slots - 1];
    for (Index i = slots - 1; i > 1; --i) ring[i] = ring[i - 1];
    ring[1] = last;
  }
  return rounds;
}

}  // namespace bandeig
