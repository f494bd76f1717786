#include "psketch/pipeline.hpp"

#include <algorithm>
#include <stdexcept>

namespace psketch {

void PipelineConfig::validate() const {
  if (heavy_table_size < 1 || lc_size < 1 || cms_width < 1 || vote_threshold < 1) {
    throw std::invalid_argument("all table sizes and thresholds must be >= 1");
  }
  if (cms_depth != 3) {
    throw std::invalid_argument("cms_depth is fixed at 3");
  }
  std::array<uint32_t, 5> seeds = {seed_heavy, seed_lc, seed_cms[0], seed_cms[1],
                                   seed_cms[2]};
  for (size_t i = 0; i < seeds.size(); ++i) {
    for (size_t j = i + 1; j < seeds.size(); ++j) {
      if (seeds[i] == seeds[j]) {
        throw std::invalid_argument("hash seeds must be pairwise distinct");
      }
    }
  }
}

Pipeline::Pipeline(PipelineConfig cfg)
    : cfg_((cfg.validate(), cfg)),
      priority_(cfg.priority_capacity),
      heavy_(cfg.heavy_table_size, cfg.seed_heavy),
      lc_(cfg.lc_size, cfg.seed_lc),
      cms_(cfg.cms_width, cfg.seed_cms) {}

void Pipeline::process_packet(const PacketRecord& p) {
  stats_.packets_processed += 1;
  if (priority_.process(p, cfg_.retrans_threshold_ns, cfg_.alg1_literal_update)) {
    stats_.priority_hits += 1;
    return;
  }

  HeavyOutcome outcome =
      heavy_.process(p, cfg_.vote_threshold, cfg_.retrans_threshold_ns,
                     cfg_.alg1_literal_update, cfg_.reset_votes_on_match);
  switch (outcome.kind) {
    case HeavyOutcome::Kind::Matched:
      stats_.heavy_matched += 1;
      break;
    case HeavyOutcome::Kind::Installed:
      stats_.heavy_installed += 1;
      break;
    case HeavyOutcome::Kind::Forwarded:
      stats_.forwarded += 1;
      break;
    case HeavyOutcome::Kind::Evicted:
      stats_.evictions += 1;
      break;
  }

  const bool sketch_path = outcome.kind == HeavyOutcome::Kind::Forwarded ||
                           outcome.kind == HeavyOutcome::Kind::Evicted;
  if (!cfg_.alg1_literal_routing && !sketch_path) return;

  lc_.record(p.key);
  if (outcome.kind == HeavyOutcome::Kind::Evicted) {
    const EvictedFlow& old = *outcome.evicted;
    const FlowKey& index_key = cfg_.alg1_literal_cms ? p.key : old.key;
    cms_.absorb_evicted(index_key, old.packet_count, old.retrans_count);
  } else {
    cms_.update_packet(p.key);
  }
}

std::optional<FlowReport> Pipeline::reconstruct_flow(const FlowKey& key) const {
  if (const PriorityEntry* e = priority_.find(key)) {
    return FlowReport{key, e->packet_count, e->retrans_count, false,
                      FlowSource::Priority};
  }
  const HeavyEntry* slot = heavy_.find(key);
  if (!slot) return std::nullopt;
  FlowReport report{key, slot->packet_count, slot->retrans_count, slot->kick_flag,
                    slot->kick_flag ? FlowSource::HeavyPlusCms : FlowSource::Heavy};
  if (slot->kick_flag) {
    CmsEstimate est = cms_.query(key);
    report.packet_count += est.packet_count;
    report.retrans_count += est.retrans_count;
  }
  return report;
}

std::vector<FlowReport> Pipeline::top_k(size_t k) const {
  std::vector<FlowReport> reports;
  for (const HeavyEntry& slot : heavy_.slots()) {
    if (!slot.occupied || priority_.contains(slot.key)) continue;
    if (auto r = reconstruct_flow(slot.key)) reports.push_back(*r);
  }
  std::sort(reports.begin(), reports.end(),
            [](const FlowReport& a, const FlowReport& b) {
              if (a.packet_count != b.packet_count) {
                return a.packet_count > b.packet_count;
              }
              return key_encoding_less(a.key, b.key);
            });
  if (reports.size() > k) reports.resize(k);
  return reports;
}

CardinalityEstimate Pipeline::cardinality_estimate() const {
  CardinalityEstimate est;
  est.saturated = lc_.saturated();
  est.sketch_path = lc_.estimate();
  double extra = 0.0;
  for (const HeavyEntry& slot : heavy_.slots()) {
    if (slot.occupied && !slot.kick_flag) extra += 1.0;
  }
  for (const auto& [key, entry] : priority_.snapshot()) {
    if (entry.packet_count > 0) extra += 1.0;
  }
  est.combined = est.sketch_path + extra;
  return est;
}

}  // namespace psketch
