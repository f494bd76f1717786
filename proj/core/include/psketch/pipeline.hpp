#ifndef PSKETCH_PIPELINE_HPP
#define PSKETCH_PIPELINE_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "psketch/cms.hpp"
#include "psketch/flow.hpp"
#include "psketch/heavy_table.hpp"
#include "psketch/linear_counter.hpp"
#include "psketch/priority_table.hpp"

namespace psketch {

struct PipelineConfig {
  size_t heavy_table_size = 4096;
  uint64_t vote_threshold = 8;
  uint64_t retrans_threshold_ns = 3'000'000;  // 3 ms
  size_t lc_size = 65536;
  size_t cms_width = 500;
  size_t cms_depth = 3;  // fixed
  uint32_t seed_heavy = 17;
  uint32_t seed_lc = 29;
  std::array<uint32_t, 3> seed_cms = {101, 211, 307};
  size_t priority_capacity = 1024;

  // Compatibility switches restoring the literal pseudocode behaviors.
  bool alg1_literal_update = false;
  bool alg1_literal_cms = false;
  bool alg1_literal_routing = false;
  bool reset_votes_on_match = false;

  // Throws std::invalid_argument on bad sizes or duplicate seeds.
  void validate() const;
};

enum class FlowSource { Priority, Heavy, HeavyPlusCms };

struct FlowReport {
  FlowKey key;
  uint64_t packet_count = 0;
  uint64_t retrans_count = 0;
  bool kick_flag = false;
  FlowSource source = FlowSource::Heavy;
};

struct PipelineStats {
  uint64_t packets_processed = 0;
  uint64_t priority_hits = 0;
  uint64_t heavy_matched = 0;
  uint64_t heavy_installed = 0;
  uint64_t forwarded = 0;
  uint64_t evictions = 0;
  uint64_t non_ip_skipped = 0;
};

struct CardinalityEstimate {
  double sketch_path = 0.0;
  double combined = 0.0;
  bool saturated = false;
};

/// Single-owner state machine wiring the priority table, heavy table, linear
/// counter and CMS together. Default routing follows the arithmetic-consistent
/// path: only collision/eviction traffic reaches the sketch stages; the
/// alg1_literal_* flags restore the pseudocode's fall-through behavior.
class Pipeline {
 public:
  explicit Pipeline(PipelineConfig cfg);

  void process_packet(const PacketRecord& p);

  std::optional<FlowReport> reconstruct_flow(const FlowKey& key) const;
  std::vector<FlowReport> top_k(size_t k) const;
  CardinalityEstimate cardinality_estimate() const;

  const PipelineConfig& config() const { return cfg_; }
  const PipelineStats& stats() const { return stats_; }
  PriorityTable& priority() { return priority_; }
  const PriorityTable& priority() const { return priority_; }
  const HeavyTable& heavy() const { return heavy_; }
  const LinearCounter& linear_counter() const { return lc_; }
  const CmsSketch& cms() const { return cms_; }

 private:
  PipelineConfig cfg_;
  PriorityTable priority_;
  HeavyTable heavy_;
  LinearCounter lc_;
  CmsSketch cms_;
  PipelineStats stats_;
};

}  // namespace psketch

#endif  // PSKETCH_PIPELINE_HPP
