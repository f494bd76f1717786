#ifndef PSKETCH_PCAP_HPP
#define PSKETCH_PCAP_HPP

#include <string>

#include "psketch/trace.hpp"

namespace psketch {

/// Reads a classic pcap capture (microsecond or nanosecond magic, either
/// byte order) and decodes Ethernet II IPv4 TCP/UDP frames, tolerating one
/// 802.1Q VLAN tag. Throws std::runtime_error on a malformed global header;
/// a truncated trailing record stops the stream and sets truncated_at.
TraceSource read_pcap(const std::string& path);

/// Writes records as a nanosecond-resolution classic pcap with synthetic
/// Ethernet/IPv4/TCP|UDP headers and zero-filled payloads, so that
/// read_pcap(write_pcap(t)) reproduces the identical record stream.
void write_pcap(const std::string& path, const std::vector<PacketRecord>& packets);

}  // namespace psketch

#endif  // PSKETCH_PCAP_HPP
