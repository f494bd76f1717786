#include "psketch/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>

namespace psketch {

namespace {

constexpr uint32_t kPayloadBytes = 1000;
constexpr uint64_t kStepNs = 1000;

class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t next() { return engine_(); }

  // Bounded draw; modulo bias is irrelevant at these ranges.
  uint64_t below(uint64_t n) { return engine_() % n; }

  double unit() { return (engine_() >> 11) * (1.0 / 9007199254740992.0); }

 private:
  std::mt19937_64 engine_;
};

std::vector<uint64_t> zipf_budgets(uint64_t flow_count, uint64_t total_packets,
                                   double alpha, Rng&) {
  std::vector<double> weights(flow_count);
  double sum = 0.0;
  for (uint64_t r = 0; r < flow_count; ++r) {
    weights[r] = std::pow(static_cast<double>(r + 1), -alpha);
    sum += weights[r];
  }
  // Every flow gets one packet; the remainder is split by largest-remainder
  // apportionment so budgets sum exactly to total_packets.
  std::vector<uint64_t> budgets(flow_count, 1);
  uint64_t remainder = total_packets - flow_count;
  std::vector<std::pair<double, uint64_t>> fractional;
  uint64_t assigned = 0;
  for (uint64_t r = 0; r < flow_count; ++r) {
    double share = remainder * weights[r] / sum;
    uint64_t whole = static_cast<uint64_t>(share);
    budgets[r] += whole;
    assigned += whole;
    fractional.emplace_back(share - static_cast<double>(whole), r);
  }
  std::stable_sort(fractional.begin(), fractional.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (uint64_t i = 0; i < remainder - assigned; ++i) {
    budgets[fractional[i % flow_count].second] += 1;
  }
  return budgets;
}

}  // namespace

SynthResult generate(const SynthConfig& cfg) {
  if (cfg.flow_count < 1) throw std::invalid_argument("flow_count must be >= 1");
  if (cfg.total_packets < cfg.flow_count) {
    throw std::invalid_argument("total_packets must be >= flow_count");
  }
  if (cfg.retrans_rate < 0.0 || cfg.retrans_rate >= 1.0) {
    throw std::invalid_argument("retrans_rate must be in [0, 1)");
  }
  if (cfg.tcp_fraction < 0.0 || cfg.tcp_fraction > 1.0) {
    throw std::invalid_argument("tcp_fraction must be in [0, 1]");
  }

  SynthResult result;
  if (cfg.retrans_rate > 0.0 && cfg.retrans_gap_ns <= cfg.retrans_threshold_hint_ns) {
    result.warnings.push_back(
        "retrans_gap_ns <= retransmission threshold; injected duplicates may "
        "not be detectable");
  }

  Rng rng(cfg.rng_seed);

  struct FlowState {
    FlowKey key;
    uint32_t next_seq = 0;
    std::optional<PacketRecord> pending_dup;
  };
  std::vector<FlowState> flows(cfg.flow_count);
  std::set<std::array<uint8_t, 13>> used;
  for (FlowState& f : flows) {
    do {
      f.key.src_ip = 0x0A000000u | static_cast<uint32_t>(rng.below(1u << 24));
      f.key.dst_ip = 0xC0A80000u | static_cast<uint32_t>(rng.below(1u << 16));
      f.key.src_port = static_cast<uint16_t>(1024 + rng.below(64512));
      f.key.dst_port = static_cast<uint16_t>(1024 + rng.below(64512));
      f.key.protocol = rng.unit() < cfg.tcp_fraction ? kProtoTcp : kProtoUdp;
    } while (!used.insert(encode_key(f.key)).second);
    f.next_seq = static_cast<uint32_t>(rng.next());
  }

  std::vector<uint64_t> budgets =
      zipf_budgets(cfg.flow_count, cfg.total_packets, cfg.zipf_alpha, rng);

  std::vector<uint32_t> deck;
  deck.reserve(cfg.total_packets);
  for (uint64_t f = 0; f < cfg.flow_count; ++f) {
    deck.insert(deck.end(), budgets[f], static_cast<uint32_t>(f));
  }
  for (size_t i = deck.size(); i > 1; --i) {
    std::swap(deck[i - 1], deck[rng.below(i)]);
  }

  result.trace.packets.reserve(deck.size());
  std::vector<uint64_t> retrans_counts(cfg.flow_count, 0);
  uint64_t clock_ns = 0;
  for (uint32_t fi : deck) {
    FlowState& f = flows[fi];
    PacketRecord p;
    if (f.pending_dup) {
      p = *f.pending_dup;
      clock_ns = std::max(clock_ns + kStepNs, p.ts_ns + cfg.retrans_gap_ns);
      p.ts_ns = clock_ns;
      retrans_counts[fi] += 1;
      f.pending_dup.reset();
    } else {
      clock_ns += kStepNs;
      p.key = f.key;
      p.ts_ns = clock_ns;
      p.payload_len = kPayloadBytes;
      if (f.key.protocol == kProtoTcp) {
        p.seq = f.next_seq;
        f.next_seq += kPayloadBytes;
        if (cfg.retrans_rate > 0.0 && rng.unit() < cfg.retrans_rate) {
          f.pending_dup = p;
        }
      }
    }
    result.trace.packets.push_back(p);
  }

  for (uint64_t f = 0; f < cfg.flow_count; ++f) {
    result.truth.per_flow[flows[f].key] = FlowTruth{budgets[f], retrans_counts[f]};
  }
  result.truth.distinct_flows = cfg.flow_count;
  return result;
}

}  // namespace psketch
