#ifndef PSKETCH_HEAVY_TABLE_HPP
#define PSKETCH_HEAVY_TABLE_HPP

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "psketch/flow.hpp"

namespace psketch {

struct HeavyEntry {
  bool occupied = false;
  FlowKey key;
  uint64_t packet_count = 0;
  uint64_t retrans_count = 0;
  std::optional<TcpTrackState> tcp;
  uint64_t negative_count = 0;
  bool kick_flag = false;
};

struct EvictedFlow {
  FlowKey key;
  uint64_t packet_count = 0;
  uint64_t retrans_count = 0;
};

struct HeavyOutcome {
  enum class Kind { Matched, Installed, Forwarded, Evicted };
  Kind kind;
  std::optional<EvictedFlow> evicted;  // set iff kind == Evicted
};

/// Fixed-size hash-indexed table of candidate elephant flows with
/// negative-vote eviction. Exactly one slot is touched per packet.
class HeavyTable {
 public:
  HeavyTable(size_t size, uint32_t seed) : slots_(size), seed_(seed) {}

  size_t size() const { return slots_.size(); }
  uint32_t seed() const { return seed_; }

  HeavyOutcome process(const PacketRecord& p, uint64_t vote_threshold,
                       uint64_t retrans_threshold_ns, bool literal_update = false,
                       bool reset_votes_on_match = false) {
    HeavyEntry& slot = slots_[table_index(p.key, seed_, slots_.size())];
    if (!slot.occupied) {
      install(slot, p, /*kick=*/false);
      return {HeavyOutcome::Kind::Installed, std::nullopt};
    }
    if (slot.key == p.key) {
      slot.packet_count += 1;
      if (p.key.protocol == kProtoTcp &&
          track_tcp_packet(*slot.tcp, p, retrans_threshold_ns, literal_update)) {
        slot.retrans_count += 1;
      }
      if (reset_votes_on_match) slot.negative_count = 0;
      return {HeavyOutcome::Kind::Matched, std::nullopt};
    }
    slot.negative_count += 1;
    if (slot.negative_count * vote_threshold >= slot.packet_count) {
      EvictedFlow old{slot.key, slot.packet_count, slot.retrans_count};
      install(slot, p, /*kick=*/true);
      return {HeavyOutcome::Kind::Evicted, old};
    }
    return {HeavyOutcome::Kind::Forwarded, std::nullopt};
  }

  /// Occupant of the slot the key hashes to, if it actually holds this key.
  const HeavyEntry* find(const FlowKey& key) const {
    const HeavyEntry& slot = slots_[table_index(key, seed_, slots_.size())];
    return slot.occupied && slot.key == key ? &slot : nullptr;
  }

  std::vector<std::pair<size_t, HeavyEntry>> snapshot() const {
    std::vector<std::pair<size_t, HeavyEntry>> out;
    for (size_t i = 0; i < slots_.size(); ++i) {
      if (slots_[i].occupied) out.emplace_back(i, slots_[i]);
    }
    return out;
  }

  const std::vector<HeavyEntry>& slots() const { return slots_; }

 private:
  static void install(HeavyEntry& slot, const PacketRecord& p, bool kick) {
    slot.occupied = true;
    slot.key = p.key;
    slot.packet_count = 1;
    slot.retrans_count = 0;
    slot.negative_count = 0;
    slot.kick_flag = kick;
    if (p.key.protocol == kProtoTcp) {
      slot.tcp = TcpTrackState{next_expected_seq(p), p.ts_ns};
    } else {
      slot.tcp.reset();
    }
  }

  std::vector<HeavyEntry> slots_;
  uint32_t seed_;
};

}  // namespace psketch

#endif  // PSKETCH_HEAVY_TABLE_HPP
