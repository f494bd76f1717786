#ifndef PSKETCH_CMS_HPP
#define PSKETCH_CMS_HPP

#include <algorithm>
#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "psketch/flow.hpp"

namespace psketch {

struct CmsCell {
  uint64_t packet_count = 0;
  uint64_t retrans_count = 0;
};

struct CmsEstimate {
  uint64_t packet_count = 0;
  uint64_t retrans_count = 0;
};

/// Three-layer Count-Min sketch keyed by flow 5-tuple. Each cell carries both
/// a packet and a retransmission counter; queries take the per-field minimum
/// across layers, so estimates never undercount.
class CmsSketch {
 public:
  static constexpr size_t kDepth = 3;

  CmsSketch(size_t width, std::array<uint32_t, kDepth> seeds)
      : width_(width), seeds_(seeds) {
    if (seeds_[0] == seeds_[1] || seeds_[0] == seeds_[2] || seeds_[1] == seeds_[2]) {
      throw std::invalid_argument("CMS layer seeds must be pairwise distinct");
    }
    for (auto& layer : layers_) layer.assign(width_, CmsCell{});
  }

  size_t width() const { return width_; }
  const std::array<uint32_t, kDepth>& seeds() const { return seeds_; }

  void update_packet(const FlowKey& key) {
    for (size_t i = 0; i < kDepth; ++i) {
      layers_[i][table_index(key, seeds_[i], width_)].packet_count += 1;
    }
  }

  void absorb_evicted(const FlowKey& old_key, uint64_t packet_count,
                      uint64_t retrans_count) {
    for (size_t i = 0; i < kDepth; ++i) {
      CmsCell& cell = layers_[i][table_index(old_key, seeds_[i], width_)];
      cell.packet_count += packet_count;
      cell.retrans_count += retrans_count;
    }
  }

  CmsEstimate query(const FlowKey& key) const {
    CmsEstimate est{UINT64_MAX, UINT64_MAX};
    for (size_t i = 0; i < kDepth; ++i) {
      const CmsCell& cell = layers_[i][table_index(key, seeds_[i], width_)];
      est.packet_count = std::min(est.packet_count, cell.packet_count);
      est.retrans_count = std::min(est.retrans_count, cell.retrans_count);
    }
    return est;
  }

  const CmsCell& cell(size_t layer, size_t index) const {
    return layers_[layer][index];
  }

 private:
  size_t width_;
  std::array<uint32_t, kDepth> seeds_;
  std::array<std::vector<CmsCell>, kDepth> layers_;
};

}  // namespace psketch

#endif  // PSKETCH_CMS_HPP
