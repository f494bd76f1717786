#ifndef PSKETCH_EVALUATION_HPP
#define PSKETCH_EVALUATION_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "psketch/flow.hpp"
#include "psketch/pipeline.hpp"
#include "psketch/trace.hpp"

namespace psketch {

struct FlowTruth {
  uint64_t packet_count = 0;
  uint64_t retrans_count = 0;
};

struct GroundTruth {
  std::unordered_map<FlowKey, FlowTruth, KeyHash> per_flow;
  uint64_t distinct_flows = 0;
};

/// Exact offline pass over a trace. Retransmission truth is threshold-free:
/// a TCP packet counts when its whole sequence range already lies at or below
/// the highest next-expected sequence seen for the flow.
GroundTruth oracle(const TraceSource& trace);

/// Accuracy metrics against ground truth. Fields are empty when their
/// denominator set is empty (e.g. no flow has true retransmissions).
struct MetricsReport {
  std::optional<double> topk_detection_accuracy;
  std::optional<double> topk_packet_recall;
  std::optional<double> topk_retrans_recall;
  std::optional<double> priority_packet_recall;
  std::optional<double> priority_retrans_recall;
  std::optional<double> cardinality_error;
  double throughput_pps = 0.0;
};

MetricsReport compute_metrics(
    const std::vector<FlowReport>& topk,
    const std::vector<std::pair<FlowKey, PriorityEntry>>& priority_snapshot,
    double combined_cardinality, const GroundTruth& truth, size_t k);

/// Ground-truth sidecar: one flow per line,
/// `src_ip,dst_ip,src_port,dst_port,proto,packet_count,retrans_count`.
void write_truth_sidecar(const std::string& path, const GroundTruth& truth);
GroundTruth read_truth_sidecar(const std::string& path);

}  // namespace psketch

#endif  // PSKETCH_EVALUATION_HPP
