#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bandeig/layout/grid.hpp"
#include "bandeig/scalar.hpp"

namespace bandeig {

enum class GroupScope { column, row, global };

struct TrafficPhase {
  std::string name;
  Index messages = 0;
  std::uint64_t bytes = 0;
  std::uint64_t max_rank_bytes = 0;  // largest per-rank sent byte count
};

struct TrafficReport {
  std::vector<TrafficPhase> phases;

  std::uint64_t total_bytes() const {
    std::uint64_t t = 0;
    for (const auto& p : phases) t += p.bytes;
    return t;
  }
  Index total_messages() const {
    Index t = 0;
    for (const auto& p : phases) t += p.messages;
    return t;
  }
};

/// Deterministic in-process exchange of one communication phase. Ranks first
/// emit typed messages, then process their inbox sorted by source rank, so
/// results do not depend on host scheduling. Messages crossing the phase's
/// group scope (column groups / row groups) are rejected.
template <class Payload>
class PhaseExchange {
 public:
  struct Message {
    Index src, dst;
    std::uint64_t bytes;
    Payload payload;
  };

  PhaseExchange(const ProcessGrid& grid, GroupScope scope, std::string name)
      : grid_(grid), scope_(scope) {
    phase_.name = std::move(name);
    sent_per_rank_.assign(grid.ranks(), 0);
    received_per_rank_.assign(grid.ranks(), 0);
  }

  void send(Index src, Index dst, Payload payload, std::uint64_t bytes) {
    if (src == dst) throw std::logic_error("PhaseExchange: self-sends are local copies, not messages");
    if (scope_ == GroupScope::column && !grid_.same_col(src, dst))
      throw std::logic_error("PhaseExchange: message leaves its column group");
    if (scope_ == GroupScope::row && !grid_.same_row(src, dst))
      throw std::logic_error("PhaseExchange: message leaves its row group");
    phase_.messages += 1;
    phase_.bytes += bytes;
    sent_per_rank_[src] += bytes;
    received_per_rank_[dst] += bytes;
    messages_.push_back(Message{src, dst, bytes, std::move(payload)});
  }

  /// Delivers every message, ordered by (destination, source).
  void deliver(const std::function<void(Index dst, Index src, Payload&)>& recv) {
    std::stable_sort(messages_.begin(), messages_.end(), [](const Message& a, const Message& b) {
      return a.dst != b.dst ? a.dst < b.dst : a.src < b.src;
    });
    for (auto& m : messages_) recv(m.dst, m.src, m.payload);
    for (const auto b : sent_per_rank_)
      phase_.max_rank_bytes = std::max(phase_.max_rank_bytes, b);
  }

  const TrafficPhase& phase() const { return phase_; }
  std::uint64_t sent_by(Index rank) const { return sent_per_rank_[rank]; }
  std::uint64_t received_by(Index rank) const { return received_per_rank_[rank]; }

 private:
  const ProcessGrid& grid_;
  GroupScope scope_;
  TrafficPhase phase_;
  std::vector<Message> messages_;
  std::vector<std::uint64_t> sent_per_rank_, received_per_rank_;
};

}  // namespace bandeig
