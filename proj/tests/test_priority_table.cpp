#include <random>

#include "doctest.h"
#include "psketch/priority_table.hpp"

using namespace psketch;

namespace {

FlowKey tcp_key(uint32_t n) { return FlowKey{0x0A000000u + n, 0x0B000000u, 10, 20, kProtoTcp}; }
FlowKey udp_key(uint32_t n) { return FlowKey{0x0A000000u + n, 0x0B000000u, 10, 20, kProtoUdp}; }

PacketRecord tcp_packet(const FlowKey& key, uint32_t seq, uint32_t len, uint64_t ts) {
  PacketRecord p;
  p.key = key;
  p.seq = seq;
  p.payload_len = len;
  p.ts_ns = ts;
  return p;
}

constexpr uint64_t kThresholdNs = 3'000'000;

}  // namespace

TEST_CASE("register semantics") {
  PriorityTable table(2);
  FlowKey k1 = tcp_key(1);

  CHECK(table.register_flow(k1) == RegisterResult::Success);
  const PriorityEntry* e = table.find(k1);
  REQUIRE(e != nullptr);
  CHECK(e->packet_count == 0);
  CHECK(e->retrans_count == 0);
  CHECK_FALSE(e->initialized);

  table.process(tcp_packet(k1, 0, 100, 1000), kThresholdNs);
  CHECK(table.register_flow(k1) == RegisterResult::AlreadyPresent);
  CHECK(table.find(k1)->packet_count == 1);  // no reset

  CHECK(table.register_flow(tcp_key(2)) == RegisterResult::Success);
  CHECK(table.register_flow(tcp_key(3)) == RegisterResult::AtCapacity);
}

TEST_CASE("miss leaves the table untouched") {
  PriorityTable table;
  table.register_flow(tcp_key(1));
  table.process(tcp_packet(tcp_key(1), 0, 100, 1000), kThresholdNs);
  auto before = table.snapshot();

  CHECK_FALSE(table.process(tcp_packet(tcp_key(99), 0, 100, 2000), kThresholdNs));

  auto after = table.snapshot();
  REQUIRE(before.size() == after.size());
  for (size_t i = 0; i < before.size(); ++i) {
    CHECK(before[i].first == after[i].first);
    CHECK(before[i].second.packet_count == after[i].second.packet_count);
    CHECK(before[i].second.retrans_count == after[i].second.retrans_count);
  }
}

TEST_CASE("in-order TCP flow") {
  PriorityTable table;
  FlowKey k = tcp_key(1);
  table.register_flow(k);
  table.process(tcp_packet(k, 0, 100, 1'000'000), kThresholdNs);
  table.process(tcp_packet(k, 100, 100, 2'000'000), kThresholdNs);
  table.process(tcp_packet(k, 200, 100, 3'000'000), kThresholdNs);

  const PriorityEntry* e = table.find(k);
  CHECK(e->packet_count == 3);
  CHECK(e->retrans_count == 0);
  CHECK(e->tcp->expected_seq == 300);
}

TEST_CASE("late duplicate counts as retransmission without regressing the sequence") {
  PriorityTable table;
  FlowKey k = tcp_key(1);
  table.register_flow(k);
  table.process(tcp_packet(k, 0, 100, 1'000'000), kThresholdNs);
  table.process(tcp_packet(k, 100, 100, 2'000'000), kThresholdNs);
  table.process(tcp_packet(k, 200, 100, 3'000'000), kThresholdNs);
  // duplicate of seq=100 arriving 5 ms after the last accepted packet
  table.process(tcp_packet(k, 100, 100, 8'000'000), kThresholdNs);

  const PriorityEntry* e = table.find(k);
  CHECK(e->packet_count == 4);
  CHECK(e->retrans_count == 1);
  CHECK(e->tcp->expected_seq == 300);
}

TEST_CASE("UDP entries never count retransmissions") {
  PriorityTable table;
  FlowKey k = udp_key(1);
  table.register_flow(k);
  std::mt19937_64 rng(1);
  for (int i = 0; i < 500; ++i) {
    PacketRecord p;
    p.key = k;
    p.ts_ns = i * 1000;
    p.payload_len = static_cast<uint32_t>(rng() % 1500);
    table.process(p, kThresholdNs);
  }
  const PriorityEntry* e = table.find(k);
  CHECK(e->packet_count == 500);
  CHECK(e->retrans_count == 0);
  CHECK_FALSE(e->tcp.has_value());
}

TEST_CASE("snapshot is a consistent read-only copy") {
  PriorityTable table;
  CHECK(table.snapshot().empty());
  for (uint32_t i = 0; i < 10; ++i) table.register_flow(tcp_key(i));
  CHECK(table.snapshot().size() == 10);

  auto a = table.snapshot();
  auto b = table.snapshot();
  REQUIRE(a.size() == b.size());
  for (size_t i = 0; i < a.size(); ++i) CHECK(a[i].first == b[i].first);
}

TEST_CASE("retrans_count never exceeds packet_count under random traffic") {
  PriorityTable table;
  FlowKey k = tcp_key(1);
  table.register_flow(k);
  std::mt19937_64 rng(9);
  uint64_t ts = 0;
  for (int i = 0; i < 5000; ++i) {
    ts += rng() % 10'000'000;
    table.process(tcp_packet(k, static_cast<uint32_t>(rng()), rng() % 1500, ts),
                  kThresholdNs);
    const PriorityEntry* e = table.find(k);
    CHECK(e->retrans_count <= e->packet_count);
  }
}
