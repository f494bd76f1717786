#include "psketch/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "psketch/config.hpp"

namespace psketch {

GroundTruth oracle(const TraceSource& trace) {
  GroundTruth truth;
  struct SeqState {
    bool seen = false;
    uint32_t max_next = 0;
  };
  std::unordered_map<FlowKey, SeqState, KeyHash> seq_state;

  for (const PacketRecord& p : trace.packets) {
    FlowTruth& ft = truth.per_flow[p.key];
    ft.packet_count += 1;
    if (p.key.protocol != kProtoTcp) continue;

    uint32_t step = p.payload_len;
    if (p.tcp_flags & tcp_flags::kSyn) step += 1;
    if (p.tcp_flags & tcp_flags::kFin) step += 1;
    uint32_t end = p.seq + step;

    SeqState& st = seq_state[p.key];
    if (st.seen && step > 0 && !seq_before(st.max_next, end)) {
      ft.retrans_count += 1;
    }
    st.max_next = st.seen ? seq_max(st.max_next, end) : end;
    st.seen = true;
  }
  truth.distinct_flows = truth.per_flow.size();
  return truth;
}

namespace {

double per_flow_recall(uint64_t est, uint64_t truth) {
  return static_cast<double>(std::min(est, truth)) / static_cast<double>(truth);
}

}  // namespace

MetricsReport compute_metrics(
    const std::vector<FlowReport>& topk,
    const std::vector<std::pair<FlowKey, PriorityEntry>>& priority_snapshot,
    double combined_cardinality, const GroundTruth& truth, size_t k) {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  MetricsReport m;

  // True top-k: largest by true packet count, ties by canonical key bytes.
  std::vector<std::pair<FlowKey, FlowTruth>> flows(truth.per_flow.begin(),
                                                   truth.per_flow.end());
  std::sort(flows.begin(), flows.end(), [](const auto& a, const auto& b) {
    if (a.second.packet_count != b.second.packet_count) {
      return a.second.packet_count > b.second.packet_count;
    }
    return key_encoding_less(a.first, b.first);
  });
  std::unordered_map<FlowKey, FlowTruth, KeyHash> true_topk;
  for (size_t i = 0; i < flows.size() && i < k; ++i) {
    true_topk.emplace(flows[i]);
  }

  size_t hits = 0;
  double packet_recall_sum = 0.0;
  double retrans_recall_sum = 0.0;
  size_t retrans_flows = 0;
  for (const FlowReport& r : topk) {
    auto it = true_topk.find(r.key);
    if (it == true_topk.end()) continue;
    hits += 1;
    packet_recall_sum += per_flow_recall(r.packet_count, it->second.packet_count);
    if (it->second.retrans_count > 0) {
      retrans_recall_sum +=
          per_flow_recall(r.retrans_count, it->second.retrans_count);
      retrans_flows += 1;
    }
  }
  m.topk_detection_accuracy = static_cast<double>(hits) / static_cast<double>(k);
  if (hits > 0) m.topk_packet_recall = packet_recall_sum / hits;
  if (retrans_flows > 0) m.topk_retrans_recall = retrans_recall_sum / retrans_flows;

  double prio_packet_sum = 0.0;
  size_t prio_packet_flows = 0;
  double prio_retrans_sum = 0.0;
  size_t prio_retrans_flows = 0;
  for (const auto& [key, entry] : priority_snapshot) {
    auto it = truth.per_flow.find(key);
    if (it == truth.per_flow.end()) continue;
    prio_packet_sum += per_flow_recall(entry.packet_count, it->second.packet_count);
    prio_packet_flows += 1;
    if (it->second.retrans_count > 0) {
      prio_retrans_sum +=
          per_flow_recall(entry.retrans_count, it->second.retrans_count);
      prio_retrans_flows += 1;
    }
  }
  if (prio_packet_flows > 0) {
    m.priority_packet_recall = prio_packet_sum / prio_packet_flows;
  }
  if (prio_retrans_flows > 0) {
    m.priority_retrans_recall = prio_retrans_sum / prio_retrans_flows;
  }

  if (truth.distinct_flows > 0) {
    m.cardinality_error =
        std::abs(combined_cardinality - static_cast<double>(truth.distinct_flows)) /
        static_cast<double>(truth.distinct_flows);
  }
  return m;
}

void write_truth_sidecar(const std::string& path, const GroundTruth& truth) {
  std::vector<std::pair<FlowKey, FlowTruth>> flows(truth.per_flow.begin(),
                                                   truth.per_flow.end());
  std::sort(flows.begin(), flows.end(), [](const auto& a, const auto& b) {
    return key_encoding_less(a.first, b.first);
  });
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write truth sidecar: " + path);
  out << "# src_ip,dst_ip,src_port,dst_port,proto,packet_count,retrans_count\n";
  for (const auto& [key, ft] : flows) {
    out << format_flow_key(key) << ',' << ft.packet_count << ',' << ft.retrans_count
        << '\n';
  }
}

GroundTruth read_truth_sidecar(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read truth sidecar: " + path);
  GroundTruth truth;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> parts;
    std::stringstream ss(line);
    std::string part;
    while (std::getline(ss, part, ',')) parts.push_back(part);
    if (parts.size() != 7) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": expected 7 comma-separated fields");
    }
    FlowKey key = parse_flow_key(parts[0] + ',' + parts[1] + ',' + parts[2] + ',' +
                                 parts[3] + ',' + parts[4]);
    FlowTruth ft{std::stoull(parts[5]), std::stoull(parts[6])};
    truth.per_flow[key] = ft;
  }
  truth.distinct_flows = truth.per_flow.size();
  return truth;
}

}  // namespace psketch
