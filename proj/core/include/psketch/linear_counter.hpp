#ifndef PSKETCH_LINEAR_COUNTER_HPP
#define PSKETCH_LINEAR_COUNTER_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "psketch/flow.hpp"

namespace psketch {

/// Bitmap cardinality estimator: n-hat = -m * ln(V/m) with V the number of
/// zero cells. A full bitmap is reported as saturated rather than returning
/// infinity silently.
class LinearCounter {
 public:
  LinearCounter(size_t cells, uint32_t seed)
      : bits_(cells, false), zero_cells_(cells), seed_(seed) {}

  size_t cells() const { return bits_.size(); }
  size_t zero_cells() const { return zero_cells_; }
  bool saturated() const { return zero_cells_ == 0; }

  void record(const FlowKey& key) {
    size_t i = table_index(key, seed_, bits_.size());
    if (!bits_[i]) {
      bits_[i] = true;
      --zero_cells_;
    }
  }

  /// +infinity when saturated; callers should check saturated() first.
  double estimate() const {
    if (zero_cells_ == 0) return std::numeric_limits<double>::infinity();
    double m = static_cast<double>(bits_.size());
    return -m * std::log(static_cast<double>(zero_cells_) / m);
  }

  const std::vector<bool>& bits() const { return bits_; }

 private:
  std::vector<bool> bits_;
  size_t zero_cells_;
  uint32_t seed_;
};

}  // namespace psketch

#endif  // PSKETCH_LINEAR_COUNTER_HPP
