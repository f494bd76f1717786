// Deliberately naive straight-line interpreter of the per-packet processing
// rules, kept independent of the library implementation. Used only as a
// reference for end-state equivalence checks.
#ifndef PSKETCH_TESTS_REFERENCE_ALG_HPP
#define PSKETCH_TESTS_REFERENCE_ALG_HPP

#include <cstdint>
#include <map>
#include <vector>

#include "psketch/flow.hpp"
#include "psketch/pipeline.hpp"

namespace psketch_reference {

struct NaivePriorityEntry {
  uint64_t pkt_cnt = 0;
  uint64_t retrans_cnt = 0;
  bool init = false;
  uint32_t exp_seq = 0;
  uint64_t ts = 0;
};

struct NaiveHeavySlot {
  bool occupied = false;
  psketch::FlowKey key;
  uint64_t pkt_cnt = 0;
  uint64_t retrans_cnt = 0;
  uint32_t exp_seq = 0;
  uint64_t ts = 0;
  uint64_t neg_cnt = 0;
  bool kick = false;
};

struct NaiveCmsCell {
  uint64_t pkt_cnt = 0;
  uint64_t retrans_cnt = 0;
};

struct NaiveState {
  std::map<std::array<uint8_t, 13>, NaivePriorityEntry> priority;
  std::vector<NaiveHeavySlot> heavy;
  std::vector<bool> lc;
  std::vector<std::vector<NaiveCmsCell>> cms;  // [3][w]

  explicit NaiveState(const psketch::PipelineConfig& cfg)
      : heavy(cfg.heavy_table_size),
        lc(cfg.lc_size, false),
        cms(3, std::vector<NaiveCmsCell>(cfg.cms_width)) {}
};

inline uint32_t hash_of(const psketch::FlowKey& k, uint32_t seed) {
  return psketch::jenkins_hash(psketch::encode_key(k), seed);
}

inline uint32_t seq_next(const psketch::PacketRecord& p) {
  uint32_t n = p.seq + p.payload_len;
  if (p.tcp_flags & psketch::tcp_flags::kSyn) n += 1;
  if (p.tcp_flags & psketch::tcp_flags::kFin) n += 1;
  return n;
}

// seq update + retransmission test shared by both tables, spelled out.
template <typename Entry>
inline void naive_tcp_step(Entry& e, const psketch::PacketRecord& p,
                           const psketch::PipelineConfig& cfg) {
  bool smaller = static_cast<int32_t>(p.seq - e.exp_seq) < 0;
  bool late = p.ts_ns >= e.ts && p.ts_ns - e.ts >= cfg.retrans_threshold_ns;
  if (smaller && late) {
    e.retrans_cnt += 1;
    if (cfg.alg1_literal_update) {
      e.exp_seq = seq_next(p);
    } else if (static_cast<int32_t>(e.exp_seq - seq_next(p)) < 0) {
      e.exp_seq = seq_next(p);
    }
  } else {
    e.exp_seq = seq_next(p);
  }
  e.ts = p.ts_ns;
}

inline void naive_process(NaiveState& st, const psketch::PacketRecord& p,
                          const psketch::PipelineConfig& cfg) {
  // --- priority table ---
  auto enc = psketch::encode_key(p.key);
  auto it = st.priority.find(enc);
  if (it != st.priority.end()) {
    NaivePriorityEntry& e = it->second;
    e.pkt_cnt += 1;
    if (p.key.protocol == psketch::kProtoTcp) {
      if (!e.init) {
        e.exp_seq = seq_next(p);
        e.ts = p.ts_ns;
      } else {
        naive_tcp_step(e, p, cfg);
      }
    }
    e.init = true;
    return;
  }

  // --- heavy flow table ---
  size_t h = hash_of(p.key, cfg.seed_heavy) % st.heavy.size();
  NaiveHeavySlot& slot = st.heavy[h];
  bool forwarded = false;
  bool evicted = false;
  psketch::FlowKey old_key;
  uint64_t old_pkt = 0, old_retrans = 0;

  if (!slot.occupied) {
    slot.occupied = true;
    slot.key = p.key;
    slot.pkt_cnt = 1;
    slot.retrans_cnt = 0;
    slot.neg_cnt = 0;
    slot.kick = false;
    if (p.key.protocol == psketch::kProtoTcp) {
      slot.exp_seq = seq_next(p);
      slot.ts = p.ts_ns;
    } else {
      slot.exp_seq = 0;
      slot.ts = 0;
    }
  } else if (slot.key == p.key) {
    slot.pkt_cnt += 1;
    if (p.key.protocol == psketch::kProtoTcp) naive_tcp_step(slot, p, cfg);
    if (cfg.reset_votes_on_match) slot.neg_cnt = 0;
  } else {
    slot.neg_cnt += 1;
    if (slot.neg_cnt * cfg.vote_threshold >= slot.pkt_cnt) {
      evicted = true;
      old_key = slot.key;
      old_pkt = slot.pkt_cnt;
      old_retrans = slot.retrans_cnt;
      slot.key = p.key;
      slot.pkt_cnt = 1;
      slot.retrans_cnt = 0;
      slot.neg_cnt = 0;
      slot.kick = true;
      if (p.key.protocol == psketch::kProtoTcp) {
        slot.exp_seq = seq_next(p);
        slot.ts = p.ts_ns;
      } else {
        slot.exp_seq = 0;
        slot.ts = 0;
      }
    } else {
      forwarded = true;
    }
  }

  // --- sketch path (linear counter + CMS) ---
  if (!cfg.alg1_literal_routing && !forwarded && !evicted) return;

  st.lc[hash_of(p.key, cfg.seed_lc) % st.lc.size()] = true;
  for (int i = 0; i < 3; ++i) {
    if (evicted) {
      const psketch::FlowKey& ik = cfg.alg1_literal_cms ? p.key : old_key;
      NaiveCmsCell& cell = st.cms[i][hash_of(ik, cfg.seed_cms[i]) % st.cms[i].size()];
      cell.pkt_cnt += old_pkt;
      cell.retrans_cnt += old_retrans;
    } else {
      st.cms[i][hash_of(p.key, cfg.seed_cms[i]) % st.cms[i].size()].pkt_cnt += 1;
    }
  }
}

}  // namespace psketch_reference

#endif  // PSKETCH_TESTS_REFERENCE_ALG_HPP
