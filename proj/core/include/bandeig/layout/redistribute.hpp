#pragma once

#include <tuple>
#include <vector>

#include "bandeig/banded_hermitian.hpp"
#include "bandeig/layout/harness.hpp"
#include "bandeig/layout/layouts.hpp"
#include "bandeig/scalar.hpp"

namespace bandeig {

namespace detail {

/// A partial column in flight: the rows a single grid row owns of one global
/// column, packed ascending in global row order.
template <class S>
struct ColumnPiece {
  Index global_col;
  VectorX<S> rows;
};

template <class S>
std::uint64_t piece_bytes(const std::vector<ColumnPiece<S>>& pieces) {
  std::uint64_t b = 0;
  for (const auto& p : pieces) b += p.rows.size() * sizeof(S);
  return b;
}

}  // namespace detail

/// Two-step gather of a block-cyclically distributed banded matrix into a
/// replicated compact band: all-to-all within each column group, then within
/// each row group. Every rank ends up with the identical BandedHermitian.
template <class S>
std::pair<std::vector<BandedHermitian<S>>, TrafficReport> gather_band_to_compact(
    const BlockCyclicLayout<S>& dist, Index n_bw) {
  using Entry = std::tuple<Index, Index, S>;  // (diagonal d, column j, value)
  const ProcessGrid& g = dist.grid;
  const Index n = dist.n_rows;
  if (dist.n_cols != n) throw std::invalid_argument("gather_band_to_compact: square matrix required");

  // local in-band lower-triangle entries per rank
  std::vector<std::vector<Entry>> collected(g.ranks());
  for (Index r = 0; r < g.ranks(); ++r) {
    const Index gr = g.row_of(r), gc = g.col_of(r);
    const auto& L = dist.local[r];
    for (Index lc = 0; lc < L.cols(); ++lc) {
      const Index j = dist.global_col(gc, lc);
      for (Index lr = 0; lr < L.rows(); ++lr) {
        const Index i = dist.global_row(gr, lr);
        if (i >= j && i - j <= n_bw) collected[r].push_back({i - j, j, L(lr, lc)});
      }
    }
  }

  TrafficReport traffic;
  auto broadcast_within = [&](GroupScope scope, const char* name) {
    PhaseExchange<std::vector<Entry>> phase(g, scope, name);
    for (Index r = 0; r < g.ranks(); ++r) {
      const auto peers = scope == GroupScope::column ? g.col_group(g.col_of(r))
                                                     : g.row_group(g.row_of(r));
      for (Index peer : peers)
        if (peer != r)
          phase.send(r, peer, collected[r], collected[r].size() * sizeof(S));
    }
    std::vector<std::vector<Entry>> incoming(g.ranks());
    phase.deliver([&](Index dst, Index, std::vector<Entry>& payload) {
      auto& inbox = incoming[dst];
      inbox.insert(inbox.end(), payload.begin(), payload.end());
    });
    for (Index r = 0; r < g.ranks(); ++r)
      collected[r].insert(collected[r].end(), incoming[r].begin(), incoming[r].end());
    traffic.phases.push_back(phase.phase());
  };

  broadcast_within(GroupScope::column, "column-allgather");
  broadcast_within(GroupScope::row, "row-allgather");

  std::vector<BandedHermitian<S>> out;
  out.reserve(g.ranks());
  for (Index r = 0; r < g.ranks(); ++r) {
    BandedHermitian<S> D(n, n_bw);
    for (const auto& [d, j, v] : collected[r]) D.band(d, j) = v;
    out.push_back(std::move(D));
  }
  return {std::move(out), std::move(traffic)};
}

/// Irregular 1D block columns -> 2D block-cyclic (two phases): first the rows
/// of every local column are scattered across the owning column group in
/// block-cyclic row order (all-to-all in the column groups), then whole
/// partial columns move to their target grid column via pairwise rounds in
/// the row groups. Payload segments are ordered by ascending target rank,
/// then ascending global index.
template <class S>
std::pair<BlockCyclicLayout<S>, TrafficReport> redistribute_1d_to_2d(
    const Irregular1DLayout<S>& X, Index m_b, Index n_b, const ProcessGrid& g) {
  using Piece = detail::ColumnPiece<S>;
  if (X.ranks() != g.ranks())
    throw std::invalid_argument("redistribute_1d_to_2d: rank count mismatch");
  const Index n = X.n_rows;
  BlockCyclicLayout<S> out(n, X.nev(), m_b, n_b, g);
  TrafficReport traffic;

  // per-rank staging: pieces whose rows match my grid row, keyed nowhere --
  // kept in arrival order (deterministic via the harness)
  std::vector<std::vector<Piece>> staged(g.ranks());

  // Phase 1: split each local column by target grid row, exchange in columns
  {
    PhaseExchange<std::vector<Piece>> phase(g, GroupScope::column, "column-alltoall");
    for (Index r = 0; r < g.ranks(); ++r) {
      if (X.counts[r] == 0) continue;
      const Index my_col = g.col_of(r);
      for (Index rho = 0; rho < g.p; ++rho) {
        const Index rows_rho = numroc(n, m_b, rho, g.p);
        if (rows_rho == 0) continue;
        std::vector<Piece> seg;
        seg.reserve(X.counts[r]);
        for (Index lc = 0; lc < X.counts[r]; ++lc) {
          Piece piece;
          piece.global_col = X.offsets[r] + lc;
          piece.rows.resize(rows_rho);
          for (Index lr = 0; lr < rows_rho; ++lr)
            piece.rows(lr) = X.local[r](out.global_row(rho, lr), lc);
          seg.push_back(std::move(piece));
        }
        const Index target = g.rank_at(rho, my_col);
        if (target == r) {
          for (auto& piece : seg) staged[r].push_back(std::move(piece));
        } else {
          const std::uint64_t bytes = detail::piece_bytes(seg);
          phase.send(r, target, std::move(seg), bytes);
        }
      }
    }
    phase.deliver([&](Index dst, Index, std::vector<Piece>& payload) {
      for (auto& piece : payload) staged[dst].push_back(std::move(piece));
    });
    traffic.phases.push_back(phase.phase());
  }

  // Phase 2: group staged columns by target grid column, pairwise rounds in rows
  {
    PhaseExchange<std::vector<Piece>> phase(g, GroupScope::row, "row-caterpillar");
    std::vector<std::vector<Piece>> landed(g.ranks());
    std::vector<std::vector<std::vector<Piece>>> outbound(
        g.ranks(), std::vector<std::vector<Piece>>(g.q));
    for (Index r = 0; r < g.ranks(); ++r) {
      for (auto& piece : staged[r]) {
        const Index tc = out.owner_col(piece.global_col);
        if (tc == g.col_of(r))
          landed[r].push_back(std::move(piece));
        else
          outbound[r][tc].push_back(std::move(piece));
      }
    }
    for (const auto& round : caterpillar_rounds(g.q)) {
      for (Index row = 0; row < g.p; ++row) {
        for (const auto& [ca, cb] : round) {
          const Index ra = g.rank_at(row, ca), rb = g.rank_at(row, cb);
          if (!outbound[ra][cb].empty()) {
            const std::uint64_t bytes = detail::piece_bytes(outbound[ra][cb]);
            phase.send(ra, rb, std::move(outbound[ra][cb]), bytes);
            outbound[ra][cb].clear();
          }
          if (!outbound[rb][ca].empty()) {
            const std::uint64_t bytes = detail::piece_bytes(outbound[rb][ca]);
            phase.send(rb, ra, std::move(outbound[rb][ca]), bytes);
            outbound[rb][ca].clear();
          }
        }
      }
    }
    phase.deliver([&](Index dst, Index, std::vector<Piece>& payload) {
      for (auto& piece : payload) landed[dst].push_back(std::move(piece));
    });
    for (Index r = 0; r < g.ranks(); ++r) {
      for (const auto& piece : landed[r]) {
        const Index lc = out.local_col(piece.global_col);
        for (Index lr = 0; lr < piece.rows.size(); ++lr)
          out.local[r](lr, lc) = piece.rows(lr);
      }
    }
    traffic.phases.push_back(phase.phase());
  }

  return {std::move(out), std::move(traffic)};
}

/// Reverse of redistribute_1d_to_2d: rows groups first (columns travel to the
/// grid column owning their 1D target rank), then the column groups gather
/// the row pieces onto the target rank itself.
template <class S>
std::pair<Irregular1DLayout<S>, TrafficReport> redistribute_2d_to_1d(
    const BlockCyclicLayout<S>& X, const std::vector<Index>& counts) {
  using Piece = detail::ColumnPiece<S>;
  const ProcessGrid& g = X.grid;
  Irregular1DLayout<S> out(X.n_rows, counts);
  if (out.ranks() != g.ranks())
    throw std::invalid_argument("redistribute_2d_to_1d: rank count mismatch");
  if (out.nev() != X.n_cols)
    throw std::invalid_argument("redistribute_2d_to_1d: count sum mismatch");
  TrafficReport traffic;

  std::vector<std::vector<Piece>> staged(g.ranks());

  // Phase 1: within row groups, send each local column piece toward the grid
  // column of its 1D owner (pairwise rounds)
  {
    PhaseExchange<std::vector<Piece>> phase(g, GroupScope::row, "row-caterpillar");
    std::vector<std::vector<std::vector<Piece>>> outbound(
        g.ranks(), std::vector<std::vector<Piece>>(g.q));
    for (Index r = 0; r < g.ranks(); ++r) {
      const Index gc = g.col_of(r);
      const auto& L = X.local[r];
      for (Index lc = 0; lc < L.cols(); ++lc) {
        Piece piece;
        piece.global_col = X.global_col(gc, lc);
        piece.rows = L.col(lc);
        const Index tc = g.col_of(out.owner(piece.global_col));
        if (tc == gc)
          staged[r].push_back(std::move(piece));
        else
          outbound[r][tc].push_back(std::move(piece));
      }
    }
    for (const auto& round : caterpillar_rounds(g.q)) {
      for (Index row = 0; row < g.p; ++row) {
        for (const auto& [ca, cb] : round) {
          const Index ra = g.rank_at(row, ca), rb = g.rank_at(row, cb);
          if (!outbound[ra][cb].empty()) {
            const std::uint64_t bytes = detail::piece_bytes(outbound[ra][cb]);
            phase.send(ra, rb, std::move(outbound[ra][cb]), bytes);
            outbound[ra][cb].clear();
          }
          if (!outbound[rb][ca].empty()) {
            const std::uint64_t bytes = detail::piece_bytes(outbound[rb][ca]);
            phase.send(rb, ra, std::move(outbound[rb][ca]), bytes);
            outbound[rb][ca].clear();
          }
        }
      }
    }
    phase.deliver([&](Index dst, Index, std::vector<Piece>& payload) {
      for (auto& piece : payload) staged[dst].push_back(std::move(piece));
    });
    traffic.phases.push_back(phase.phase());
  }

  // Phase 2: within column groups, gather the row pieces onto the 1D owner
  {
    PhaseExchange<std::vector<Piece>> phase(g, GroupScope::column, "column-gather");
    std::vector<std::vector<std::pair<Index, Piece>>> landed(g.ranks());  // (src grid row, piece)
    for (Index r = 0; r < g.ranks(); ++r) {
      std::vector<std::vector<Piece>> outbound(g.p);
      for (auto& piece : staged[r]) {
        const Index t = out.owner(piece.global_col);
        if (t == r)
          landed[r].push_back({g.row_of(r), std::move(piece)});
        else
          outbound[g.row_of(t)].push_back(std::move(piece));
      }
      for (Index rho = 0; rho < g.p; ++rho) {
        if (outbound[rho].empty()) continue;
        const Index target = g.rank_at(rho, g.col_of(r));
        const std::uint64_t bytes = detail::piece_bytes(outbound[rho]);
        phase.send(r, target, std::move(outbound[rho]), bytes);
      }
    }
    phase.deliver([&](Index dst, Index src, std::vector<Piece>& payload) {
      for (auto& piece : payload) landed[dst].push_back({g.row_of(src), std::move(piece)});
    });
    for (Index r = 0; r < g.ranks(); ++r) {
      for (const auto& [src_row, piece] : landed[r]) {
        const Index lc = piece.global_col - out.offsets[r];
        for (Index lr = 0; lr < piece.rows.size(); ++lr)
          out.local[r](X.global_row(src_row, lr), lc) = piece.rows(lr);
      }
    }
    traffic.phases.push_back(phase.phase());
  }

  return {std::move(out), std::move(traffic)};
}

/// Gather-to-root-then-scatter reference; used by tests and the benchmark CLI.
template <class S>
std::pair<BlockCyclicLayout<S>, TrafficReport> naive_redistribute_oracle(
    const Irregular1DLayout<S>& X, Index m_b, Index n_b, const ProcessGrid& g) {
  TrafficReport traffic;
  TrafficPhase gather_phase{"naive-gather"}, scatter_phase{"naive-scatter"};
  std::uint64_t root_sent = 0;

  for (Index r = 1; r < g.ranks(); ++r) {
    const std::uint64_t b = static_cast<std::uint64_t>(X.local[r].size()) * sizeof(S);
    if (b == 0) continue;
    gather_phase.messages += 1;
    gather_phase.bytes += b;
    gather_phase.max_rank_bytes = std::max(gather_phase.max_rank_bytes, b);
  }

  MatrixX<S> full = X.gather();
  BlockCyclicLayout<S> out = BlockCyclicLayout<S>::scatter(full, m_b, n_b, g);

  for (Index r = 1; r < g.ranks(); ++r) {
    const std::uint64_t b = static_cast<std::uint64_t>(out.local[r].size()) * sizeof(S);
    if (b == 0) continue;
    scatter_phase.messages += 1;
    scatter_phase.bytes += b;
    root_sent += b;
  }
  scatter_phase.max_rank_bytes = root_sent;

  traffic.phases.push_back(gather_phase);
  traffic.phases.push_back(scatter_phase);
  return {std::move(out), std::move(traffic)};
}

}  // namespace bandeig
