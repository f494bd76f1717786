#ifndef PSKETCH_FLOW_HPP
#define PSKETCH_FLOW_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>

namespace psketch {

namespace tcp_flags {
constexpr uint8_t kSyn = 0x01;
constexpr uint8_t kFin = 0x02;
constexpr uint8_t kRst = 0x04;
constexpr uint8_t kAck = 0x08;
}  // namespace tcp_flags

constexpr uint8_t kProtoTcp = 6;
constexpr uint8_t kProtoUdp = 17;

/// Canonical 5-tuple identifying a transport flow. IPs and ports are kept in
/// host order; the wire encoding is big-endian.
struct FlowKey {
  uint32_t src_ip = 0;
  uint32_t dst_ip = 0;
  uint16_t src_port = 0;
  uint16_t dst_port = 0;
  uint8_t protocol = 0;

  friend bool operator==(const FlowKey&, const FlowKey&) = default;
};

/// 13-byte big-endian encoding: src_ip, dst_ip, src_port, dst_port, protocol.
inline std::array<uint8_t, 13> encode_key(const FlowKey& key) {
  std::array<uint8_t, 13> out{};
  auto put32 = [&](size_t at, uint32_t v) {
    out[at] = static_cast<uint8_t>(v >> 24);
    out[at + 1] = static_cast<uint8_t>(v >> 16);
    out[at + 2] = static_cast<uint8_t>(v >> 8);
    out[at + 3] = static_cast<uint8_t>(v);
  };
  put32(0, key.src_ip);
  put32(4, key.dst_ip);
  out[8] = static_cast<uint8_t>(key.src_port >> 8);
  out[9] = static_cast<uint8_t>(key.src_port);
  out[10] = static_cast<uint8_t>(key.dst_port >> 8);
  out[11] = static_cast<uint8_t>(key.dst_port);
  out[12] = key.protocol;
  return out;
}

inline bool key_encoding_less(const FlowKey& a, const FlowKey& b) {
  return encode_key(a) < encode_key(b);
}

/// Jenkins one-at-a-time with the seed as the initial accumulator.
inline uint32_t jenkins_hash(std::span<const uint8_t> data, uint32_t seed) {
  uint32_t h = seed;
  for (uint8_t byte : data) {
    h += byte;
    h += h << 10;
    h ^= h >> 6;
  }
  h += h << 3;
  h ^= h >> 11;
  h += h << 15;
  return h;
}

inline size_t table_index(const FlowKey& key, uint32_t seed, size_t size) {
  auto bytes = encode_key(key);
  return jenkins_hash(bytes, seed) % size;
}

struct KeyHash {
  size_t operator()(const FlowKey& key) const {
    return table_index(key, 0x7f4a7c15u, ~size_t{0});
  }
};

/// Normalized per-packet event. seq/tcp_flags are meaningful only for TCP.
struct PacketRecord {
  FlowKey key;
  uint64_t ts_ns = 0;
  uint32_t seq = 0;
  uint32_t payload_len = 0;
  uint8_t tcp_flags = 0;
};

struct TcpTrackState {
  uint32_t expected_seq = 0;
  uint64_t last_ts_ns = 0;
};

/// Serial-number comparison: true iff a precedes b in sequence space.
inline bool seq_before(uint32_t a, uint32_t b) {
  return static_cast<int32_t>(a - b) < 0;
}

inline uint32_t seq_max(uint32_t a, uint32_t b) { return seq_before(a, b) ? b : a; }

inline uint32_t next_expected_seq(const PacketRecord& p) {
  if (p.key.protocol != kProtoTcp) {
    throw std::logic_error("next_expected_seq called on non-TCP packet");
  }
  uint32_t step = p.payload_len;
  if (p.tcp_flags & tcp_flags::kSyn) step += 1;
  if (p.tcp_flags & tcp_flags::kFin) step += 1;
  return p.seq + step;
}

inline bool check_retransmission(const TcpTrackState& state, const PacketRecord& p,
                                 uint64_t threshold_ns) {
  if (!seq_before(p.seq, state.expected_seq)) return false;
  if (p.ts_ns < state.last_ts_ns) return false;
  return p.ts_ns - state.last_ts_ns >= threshold_ns;
}

/// Shared TCP bookkeeping for the priority and heavy tables: counts a
/// retransmission when detected, otherwise advances the expected sequence.
/// With literal_update the expected sequence is rewritten unconditionally.
/// Returns true when the packet was counted as a retransmission.
inline bool track_tcp_packet(TcpTrackState& state, const PacketRecord& p,
                             uint64_t threshold_ns, bool literal_update) {
  const bool retrans = check_retransmission(state, p, threshold_ns);
  if (!retrans || literal_update) {
    state.expected_seq = next_expected_seq(p);
  } else {
    state.expected_seq = seq_max(state.expected_seq, next_expected_seq(p));
  }
  state.last_ts_ns = p.ts_ns;
  return retrans;
}

}  // namespace psketch

#endif  // PSKETCH_FLOW_HPP
