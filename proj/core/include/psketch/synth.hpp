#ifndef PSKETCH_SYNTH_HPP
#define PSKETCH_SYNTH_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "psketch/evaluation.hpp"
#include "psketch/trace.hpp"

namespace psketch {

struct SynthConfig {
  uint64_t flow_count = 100;
  uint64_t total_packets = 10000;
  double zipf_alpha = 1.0;
  double tcp_fraction = 1.0;
  double retrans_rate = 0.0;       // probability per eligible TCP data segment
  uint64_t retrans_gap_ns = 5'000'000;
  uint64_t retrans_threshold_hint_ns = 3'000'000;  // used only for the gap warning
  uint64_t rng_seed = 42;
};

struct SynthResult {
  TraceSource trace;
  GroundTruth truth;
  std::vector<std::string> warnings;
};

/// Deterministic synthetic workload: per-flow packet budgets follow a
/// Zipf(alpha) rank distribution normalized to total_packets, flows are
/// interleaved by a seeded shuffle with strictly increasing timestamps, and
/// TCP flows emit fixed 1000-byte in-order segments. With probability
/// retrans_rate a data segment's duplicate replaces the flow's next slot at
/// least retrans_gap_ns later. Exact ground truth is emitted alongside.
SynthResult generate(const SynthConfig& cfg);

}  // namespace psketch

#endif  // PSKETCH_SYNTH_HPP
