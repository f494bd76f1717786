#ifndef PSKETCH_PRIORITY_TABLE_HPP
#define PSKETCH_PRIORITY_TABLE_HPP

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "psketch/flow.hpp"

namespace psketch {

struct PriorityEntry {
  uint64_t packet_count = 0;
  uint64_t retrans_count = 0;
  std::optional<TcpTrackState> tcp;
  bool initialized = false;
};

enum class RegisterResult { Success, AlreadyPresent, AtCapacity };

/// Exact per-flow tracking for operator-designated flows. Keys must be
/// registered before traffic arrives for lossless counting; they are never
/// evicted implicitly.
class PriorityTable {
 public:
  explicit PriorityTable(size_t capacity = 1024) : capacity_(capacity) {}

  RegisterResult register_flow(const FlowKey& key) {
    if (entries_.contains(key)) return RegisterResult::AlreadyPresent;
    if (entries_.size() >= capacity_) return RegisterResult::AtCapacity;
    entries_.emplace(key, PriorityEntry{});
    return RegisterResult::Success;
  }

  bool deregister_flow(const FlowKey& key) { return entries_.erase(key) > 0; }

  bool contains(const FlowKey& key) const { return entries_.contains(key); }
  size_t size() const { return entries_.size(); }
  size_t capacity() const { return capacity_; }

  /// Returns true on Hit (key registered), false on Miss (state untouched).
  bool process(const PacketRecord& p, uint64_t threshold_ns,
               bool literal_update = false) {
    auto it = entries_.find(p.key);
    if (it == entries_.end()) return false;
    PriorityEntry& e = it->second;
    e.packet_count += 1;
    if (p.key.protocol == kProtoTcp) {
      if (!e.initialized) {
        e.tcp = TcpTrackState{next_expected_seq(p), p.ts_ns};
      } else if (track_tcp_packet(*e.tcp, p, threshold_ns, literal_update)) {
        e.retrans_count += 1;
      }
    }
    e.initialized = true;
    return true;
  }

  const PriorityEntry* find(const FlowKey& key) const {
    auto it = entries_.find(key);
    return it == entries_.end() ? nullptr : &it->second;
  }

  std::vector<std::pair<FlowKey, PriorityEntry>> snapshot() const {
    std::vector<std::pair<FlowKey, PriorityEntry>> out(entries_.begin(),
                                                       entries_.end());
    return out;
  }

 private:
  std::unordered_map<FlowKey, PriorityEntry, KeyHash> entries_;
  size_t capacity_;
};

}  // namespace psketch

#endif  // PSKETCH_PRIORITY_TABLE_HPP
