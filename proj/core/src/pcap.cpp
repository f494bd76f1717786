#include "psketch/pcap.hpp"

#include <cstring>
#include <fstream>
#include <stdexcept>

namespace psketch {

namespace {

constexpr uint32_t kMagicUsec = 0xa1b2c3d4;
constexpr uint32_t kMagicNsec = 0xa1b23c4d;
constexpr uint32_t kMagicUsecSwapped = 0xd4c3b2a1;
constexpr uint32_t kMagicNsecSwapped = 0x4d3cb2a1;

constexpr uint16_t kEtherTypeIpv4 = 0x0800;
constexpr uint16_t kEtherTypeVlan = 0x8100;

uint32_t bswap32(uint32_t v) { return __builtin_bswap32(v); }

uint32_t load_u32le(const uint8_t* p) {
  uint32_t v;
  std::memcpy(&v, p, 4);
  return v;  // little-endian host
}

uint16_t load_u16be(const uint8_t* p) {
  return static_cast<uint16_t>(p[0] << 8 | p[1]);
}

uint32_t load_u32be(const uint8_t* p) {
  return static_cast<uint32_t>(p[0]) << 24 | static_cast<uint32_t>(p[1]) << 16 |
         static_cast<uint32_t>(p[2]) << 8 | p[3];
}

// Decodes one captured frame; returns false when it is not IPv4 TCP/UDP.
bool decode_frame(const uint8_t* data, size_t len, uint64_t ts_ns,
                  PacketRecord& out) {
  if (len < 14) return false;
  size_t off = 12;
  uint16_t ether_type = load_u16be(data + off);
  off += 2;
  if (ether_type == kEtherTypeVlan) {
    if (len < off + 4) return false;
    ether_type = load_u16be(data + off + 2);
    off += 4;
  }
  if (ether_type != kEtherTypeIpv4) return false;
  if (len < off + 20) return false;

  const uint8_t* ip = data + off;
  if ((ip[0] >> 4) != 4) return false;
  size_t ihl = (ip[0] & 0x0f) * 4;
  if (ihl < 20 || len < off + ihl) return false;
  uint16_t total_len = load_u16be(ip + 2);
  uint8_t protocol = ip[9];
  if (protocol != kProtoTcp && protocol != kProtoUdp) return false;
  if (total_len < ihl) return false;

  out = PacketRecord{};
  out.ts_ns = ts_ns;
  out.key.src_ip = load_u32be(ip + 12);
  out.key.dst_ip = load_u32be(ip + 16);
  out.key.protocol = protocol;

  const uint8_t* l4 = ip + ihl;
  size_t l4_avail = len - off - ihl;
  if (protocol == kProtoTcp) {
    if (l4_avail < 20) return false;
    out.key.src_port = load_u16be(l4);
    out.key.dst_port = load_u16be(l4 + 2);
    out.seq = load_u32be(l4 + 4);
    size_t data_off = (l4[12] >> 4) * 4;
    if (data_off < 20 || total_len < ihl + data_off) return false;
    out.payload_len = static_cast<uint32_t>(total_len - ihl - data_off);
    uint8_t wire_flags = l4[13];
    if (wire_flags & 0x02) out.tcp_flags |= tcp_flags::kSyn;
    if (wire_flags & 0x01) out.tcp_flags |= tcp_flags::kFin;
    if (wire_flags & 0x04) out.tcp_flags |= tcp_flags::kRst;
    if (wire_flags & 0x10) out.tcp_flags |= tcp_flags::kAck;
  } else {
    if (l4_avail < 8) return false;
    out.key.src_port = load_u16be(l4);
    out.key.dst_port = load_u16be(l4 + 2);
    out.payload_len = static_cast<uint32_t>(total_len - ihl - 8);
  }
  return true;
}

void put_u16be(std::vector<uint8_t>& buf, uint16_t v) {
  buf.push_back(static_cast<uint8_t>(v >> 8));
  buf.push_back(static_cast<uint8_t>(v));
}

void put_u32be(std::vector<uint8_t>& buf, uint32_t v) {
  buf.push_back(static_cast<uint8_t>(v >> 24));
  buf.push_back(static_cast<uint8_t>(v >> 16));
  buf.push_back(static_cast<uint8_t>(v >> 8));
  buf.push_back(static_cast<uint8_t>(v));
}

void put_u32le(std::vector<uint8_t>& buf, uint32_t v) {
  buf.push_back(static_cast<uint8_t>(v));
  buf.push_back(static_cast<uint8_t>(v >> 8));
  buf.push_back(static_cast<uint8_t>(v >> 16));
  buf.push_back(static_cast<uint8_t>(v >> 24));
}

}  // namespace

TraceSource read_pcap(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open pcap file: " + path);
  std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                             std::istreambuf_iterator<char>());
  if (bytes.size() < 24) {
    throw std::runtime_error("malformed pcap global header: " + path);
  }

  uint32_t magic = load_u32le(bytes.data());
  bool swapped = false;
  bool nanosecond = false;
  switch (magic) {
    case kMagicUsec: break;
    case kMagicNsec: nanosecond = true; break;
    case kMagicUsecSwapped: swapped = true; break;
    case kMagicNsecSwapped: swapped = true; nanosecond = true; break;
    default:
      throw std::runtime_error("unrecognized pcap magic: " + path);
  }
  auto field32 = [&](size_t at) {
    uint32_t v = load_u32le(bytes.data() + at);
    return swapped ? bswap32(v) : v;
  };
  uint32_t link_type = field32(20);
  if (link_type != 1) {
    throw std::runtime_error("unsupported pcap link type (expected Ethernet)");
  }

  TraceSource trace;
  size_t off = 24;
  while (off < bytes.size()) {
    if (off + 16 > bytes.size()) {
      trace.truncated_at = off;
      break;
    }
    uint32_t ts_sec = field32(off);
    uint32_t ts_frac = field32(off + 4);
    uint32_t incl_len = field32(off + 8);
    off += 16;
    if (off + incl_len > bytes.size()) {
      trace.truncated_at = off - 16;
      break;
    }
    uint64_t ts_ns = static_cast<uint64_t>(ts_sec) * 1'000'000'000ull +
                     (nanosecond ? ts_frac : static_cast<uint64_t>(ts_frac) * 1000ull);
    PacketRecord record;
    if (decode_frame(bytes.data() + off, incl_len, ts_ns, record)) {
      trace.packets.push_back(record);
    } else {
      trace.skipped += 1;
    }
    off += incl_len;
  }
  return trace;
}

void write_pcap(const std::string& path, const std::vector<PacketRecord>& packets) {
  std::vector<uint8_t> buf;
  put_u32le(buf, kMagicNsec);
  buf.push_back(2); buf.push_back(0);     // version major 2 (LE)
  buf.push_back(4); buf.push_back(0);     // version minor 4 (LE)
  put_u32le(buf, 0);                      // thiszone
  put_u32le(buf, 0);                      // sigfigs
  put_u32le(buf, 65535);                  // snaplen
  put_u32le(buf, 1);                      // link type: Ethernet

  for (const PacketRecord& p : packets) {
    const bool tcp = p.key.protocol == kProtoTcp;
    const size_t l4_len = tcp ? 20 : 8;
    const size_t frame_len = 14 + 20 + l4_len + p.payload_len;

    put_u32le(buf, static_cast<uint32_t>(p.ts_ns / 1'000'000'000ull));
    put_u32le(buf, static_cast<uint32_t>(p.ts_ns % 1'000'000'000ull));
    put_u32le(buf, static_cast<uint32_t>(frame_len));
    put_u32le(buf, static_cast<uint32_t>(frame_len));

    buf.insert(buf.end(), 12, 0);  // zero MACs
    put_u16be(buf, kEtherTypeIpv4);

    buf.push_back(0x45);  // version 4, ihl 5
    buf.push_back(0);     // tos
    put_u16be(buf, static_cast<uint16_t>(20 + l4_len + p.payload_len));
    put_u16be(buf, 0);    // id
    put_u16be(buf, 0);    // flags/frag
    buf.push_back(64);    // ttl
    buf.push_back(p.key.protocol);
    put_u16be(buf, 0);    // checksum (not validated on read)
    put_u32be(buf, p.key.src_ip);
    put_u32be(buf, p.key.dst_ip);

    if (tcp) {
      put_u16be(buf, p.key.src_port);
      put_u16be(buf, p.key.dst_port);
      put_u32be(buf, p.seq);
      put_u32be(buf, 0);  // ack
      buf.push_back(0x50);  // data offset 5
      uint8_t wire_flags = 0;
      if (p.tcp_flags & tcp_flags::kSyn) wire_flags |= 0x02;
      if (p.tcp_flags & tcp_flags::kFin) wire_flags |= 0x01;
      if (p.tcp_flags & tcp_flags::kRst) wire_flags |= 0x04;
      if (p.tcp_flags & tcp_flags::kAck) wire_flags |= 0x10;
      buf.push_back(wire_flags);
      put_u16be(buf, 65535);  // window
      put_u16be(buf, 0);      // checksum
      put_u16be(buf, 0);      // urgent
    } else {
      put_u16be(buf, p.key.src_port);
      put_u16be(buf, p.key.dst_port);
      put_u16be(buf, static_cast<uint16_t>(8 + p.payload_len));
      put_u16be(buf, 0);  // checksum
    }
    buf.insert(buf.end(), p.payload_len, 0);
  }

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open pcap file for writing: " + path);
  out.write(reinterpret_cast<const char*>(buf.data()),
            static_cast<std::streamsize>(buf.size()));
  if (!out) throw std::runtime_error("short write to pcap file: " + path);
}

}  // namespace psketch
