#ifndef PSKETCH_TRACE_HPP
#define PSKETCH_TRACE_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "psketch/flow.hpp"

namespace psketch {

/// Ordered packet stream plus ingestion bookkeeping. Frames that are not
/// IPv4 TCP/UDP are counted in skipped rather than emitted.
struct TraceSource {
  std::vector<PacketRecord> packets;
  uint64_t skipped = 0;
  /// Byte offset of a truncated trailing record, when the capture was cut
  /// short. Packets before the truncation point are still usable.
  std::optional<uint64_t> truncated_at;
};

}  // namespace psketch

#endif  // PSKETCH_TRACE_HPP
