// psketch: trace generation, replay and evaluation front end.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "psketch/config.hpp"
#include "psketch/evaluation.hpp"
#include "psketch/pcap.hpp"
#include "psketch/pipeline.hpp"
#include "psketch/synth.hpp"

namespace {

using psketch::FlowKey;
using psketch::PipelineConfig;
using ordered_json = nlohmann::ordered_json;

constexpr const char* kToolVersion = "psketch 0.1.0";

std::string file_digest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for digest: " + path);
  uint64_t h = 0xcbf29ce484222325ull;  // FNV-1a
  char buf[1 << 16];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= static_cast<uint8_t>(buf[i]);
      h *= 0x100000001b3ull;
    }
  }
  char out[17];
  std::snprintf(out, sizeof(out), "%016llx", static_cast<unsigned long long>(h));
  return out;
}

struct ConfigFlags {
  uint64_t heavy_size = 0;
  uint64_t vote_threshold = 0;
  double retrans_threshold_ms = 0.0;
  uint64_t lc_size = 0;
  uint64_t cms_width = 0;
  uint64_t seed = 0;
  bool alg1_literal_update = false;
  bool alg1_literal_cms = false;
  bool alg1_literal_routing = false;
  bool reset_votes_on_match = false;
};

void add_config_flags(CLI::App* cmd, ConfigFlags& f) {
  cmd->add_option("--heavy-size", f.heavy_size, "Heavy flow table slots");
  cmd->add_option("--vote-threshold", f.vote_threshold, "Eviction vote threshold");
  cmd->add_option("--retrans-threshold-ms", f.retrans_threshold_ms,
                  "Retransmission time threshold (ms)");
  cmd->add_option("--lc-size", f.lc_size, "Linear counter cells");
  cmd->add_option("--cms-width", f.cms_width, "CMS cells per layer");
  cmd->add_option("--seed", f.seed, "Hash seed base");
  cmd->add_flag("--alg1-literal-update", f.alg1_literal_update,
                "Unconditional expected-sequence update");
  cmd->add_flag("--alg1-literal-cms", f.alg1_literal_cms,
                "Absorb evicted stats at the incoming key's CMS indices");
  cmd->add_flag("--alg1-literal-routing", f.alg1_literal_routing,
                "Update LC/CMS for every non-priority packet");
  cmd->add_flag("--reset-votes-on-match", f.reset_votes_on_match,
                "Clear negative votes when the occupant matches");
}

PipelineConfig resolve_config(const CLI::App* cmd, const ConfigFlags& f,
                              const std::string& config_path) {
  PipelineConfig cfg;
  std::string path = config_path;
  if (path.empty()) {
    if (const char* env = std::getenv("PSKETCH_CONFIG")) path = env;
  }
  if (!path.empty()) psketch::load_pipeline_config(path, cfg);
  // CLI flags win over config-file values.
  if (cmd->count("--heavy-size")) cfg.heavy_table_size = f.heavy_size;
  if (cmd->count("--vote-threshold")) cfg.vote_threshold = f.vote_threshold;
  if (cmd->count("--retrans-threshold-ms")) {
    cfg.retrans_threshold_ns =
        static_cast<uint64_t>(f.retrans_threshold_ms * 1e6);
  }
  if (cmd->count("--lc-size")) cfg.lc_size = f.lc_size;
  if (cmd->count("--cms-width")) cfg.cms_width = f.cms_width;
  if (cmd->count("--seed")) {
    uint32_t base = static_cast<uint32_t>(f.seed);
    cfg.seed_heavy = base + 17;
    cfg.seed_lc = base + 29;
    cfg.seed_cms = {base + 101, base + 211, base + 307};
  }
  if (cmd->count("--alg1-literal-update")) cfg.alg1_literal_update = true;
  if (cmd->count("--alg1-literal-cms")) cfg.alg1_literal_cms = true;
  if (cmd->count("--alg1-literal-routing")) cfg.alg1_literal_routing = true;
  if (cmd->count("--reset-votes-on-match")) cfg.reset_votes_on_match = true;
  cfg.validate();
  return cfg;
}

ordered_json config_json(const PipelineConfig& cfg) {
  return ordered_json{{"heavy_size", cfg.heavy_table_size},
                      {"vote_threshold", cfg.vote_threshold},
                      {"retrans_threshold_ns", cfg.retrans_threshold_ns},
                      {"lc_size", cfg.lc_size},
                      {"cms_width", cfg.cms_width},
                      {"cms_depth", cfg.cms_depth},
                      {"seed_heavy", cfg.seed_heavy},
                      {"seed_lc", cfg.seed_lc},
                      {"seed_cms1", cfg.seed_cms[0]},
                      {"seed_cms2", cfg.seed_cms[1]},
                      {"seed_cms3", cfg.seed_cms[2]},
                      {"priority_capacity", cfg.priority_capacity},
                      {"alg1_literal_update", cfg.alg1_literal_update},
                      {"alg1_literal_cms", cfg.alg1_literal_cms},
                      {"alg1_literal_routing", cfg.alg1_literal_routing},
                      {"reset_votes_on_match", cfg.reset_votes_on_match}};
}

ordered_json flow_report_json(const psketch::FlowReport& r) {
  const char* source = r.source == psketch::FlowSource::Priority ? "priority"
                       : r.source == psketch::FlowSource::Heavy ? "heavy"
                                                                : "heavy+cms";
  return ordered_json{{"key", psketch::format_flow_key(r.key)},
                      {"packet_count", r.packet_count},
                      {"retrans_count", r.retrans_count},
                      {"kick_flag", r.kick_flag},
                      {"source", source}};
}

ordered_json metrics_json(const psketch::MetricsReport& m) {
  auto field = [](const std::optional<double>& v) {
    return v ? ordered_json(*v) : ordered_json(nullptr);
  };
  return ordered_json{{"topk_detection_accuracy", field(m.topk_detection_accuracy)},
                      {"topk_packet_recall", field(m.topk_packet_recall)},
                      {"topk_retrans_recall", field(m.topk_retrans_recall)},
                      {"priority_packet_recall", field(m.priority_packet_recall)},
                      {"priority_retrans_recall", field(m.priority_retrans_recall)},
                      {"cardinality_error", field(m.cardinality_error)},
                      {"throughput_pps", m.throughput_pps}};
}

int cmd_generate(const CLI::App* cmd, const psketch::SynthConfig& synth_cfg,
                 double retrans_gap_ms, const std::string& out_path) {
  psketch::SynthConfig cfg = synth_cfg;
  if (cmd->count("--retrans-gap-ms")) {
    cfg.retrans_gap_ns = static_cast<uint64_t>(retrans_gap_ms * 1e6);
  }
  psketch::SynthResult result = psketch::generate(cfg);
  for (const std::string& w : result.warnings) {
    std::cerr << "warning: " << w << "\n";
  }
  psketch::write_pcap(out_path, result.trace.packets);
  psketch::write_truth_sidecar(out_path + ".truth", result.truth);

  uint64_t injected = 0;
  for (const auto& [key, ft] : result.truth.per_flow) injected += ft.retrans_count;
  std::cout << "wrote " << out_path << " (" << result.trace.packets.size()
            << " packets, " << result.truth.distinct_flows << " flows, " << injected
            << " injected retransmissions)\n";
  std::cout << "wrote " << out_path << ".truth\n";
  return 0;
}

int cmd_run(const CLI::App* cmd, const ConfigFlags& flags,
            const std::string& config_path, const std::string& trace_path,
            const std::string& priority_path, const std::string& out_path,
            size_t k, bool force_oracle) {
  PipelineConfig cfg = resolve_config(cmd, flags, config_path);
  psketch::TraceSource trace = psketch::read_pcap(trace_path);
  if (trace.truncated_at) {
    std::cerr << "warning: capture truncated at byte offset " << *trace.truncated_at
              << "; processing the packets before it\n";
  }

  psketch::Pipeline pipeline(cfg);
  std::vector<FlowKey> priority_keys;
  if (!priority_path.empty()) {
    priority_keys = psketch::load_priority_keys(priority_path);
    for (const FlowKey& key : priority_keys) {
      if (pipeline.priority().register_flow(key) ==
          psketch::RegisterResult::AtCapacity) {
        std::cerr << "error: priority table capacity exceeded\n";
        return 1;
      }
    }
  }

  auto start = std::chrono::steady_clock::now();
  for (const psketch::PacketRecord& p : trace.packets) {
    pipeline.process_packet(p);
  }
  auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                               start).count();
  double throughput =
      elapsed > 0 ? static_cast<double>(trace.packets.size()) / elapsed : 0.0;

  std::vector<psketch::FlowReport> topk = pipeline.top_k(k);
  auto priority_snapshot = pipeline.priority().snapshot();
  std::sort(priority_snapshot.begin(), priority_snapshot.end(),
            [](const auto& a, const auto& b) {
              return psketch::key_encoding_less(a.first, b.first);
            });
  psketch::CardinalityEstimate card = pipeline.cardinality_estimate();

  ordered_json report;
  report["manifest"] = ordered_json{
      {"tool_version", kToolVersion},
      {"trace", ordered_json{{"path", trace_path},
                             {"digest", file_digest(trace_path)}}},
      {"k", k},
      {"config", config_json(cfg)}};
  const auto& stats = pipeline.stats();
  report["pipeline_stats"] = ordered_json{
      {"packets_processed", stats.packets_processed},
      {"priority_hits", stats.priority_hits},
      {"heavy_matched", stats.heavy_matched},
      {"heavy_installed", stats.heavy_installed},
      {"forwarded", stats.forwarded},
      {"evictions", stats.evictions},
      {"non_ip_skipped", trace.skipped}};
  report["topk"] = ordered_json::array();
  for (const auto& r : topk) report["topk"].push_back(flow_report_json(r));
  report["priority"] = ordered_json::array();
  for (const auto& [key, entry] : priority_snapshot) {
    report["priority"].push_back(
        ordered_json{{"key", psketch::format_flow_key(key)},
                     {"packet_count", entry.packet_count},
                     {"retrans_count", entry.retrans_count}});
  }
  report["cardinality"] =
      ordered_json{{"sketch_path", card.saturated ? ordered_json("saturated")
                                                  : ordered_json(card.sketch_path)},
                   {"combined", card.saturated ? ordered_json("saturated")
                                               : ordered_json(card.combined)},
                   {"saturated", card.saturated}};
  report["throughput_pps"] = throughput;

  std::string sidecar = trace_path + ".truth";
  if (force_oracle || std::filesystem::exists(sidecar)) {
    psketch::GroundTruth truth = force_oracle
                                     ? psketch::oracle(trace)
                                     : psketch::read_truth_sidecar(sidecar);
    psketch::MetricsReport metrics = psketch::compute_metrics(
        topk, priority_snapshot, card.combined, truth, k);
    metrics.throughput_pps = throughput;
    report["metrics"] = metrics_json(metrics);
  }

  std::string text = report.dump(2);
  if (out_path.empty()) {
    std::cout << text << "\n";
  } else {
    std::ofstream out(out_path, std::ios::trunc);
    if (!out) {
      std::cerr << "error: cannot write report to " << out_path << "\n";
      return 1;
    }
    out << text << "\n";
  }
  return 0;
}

int cmd_bench(const CLI::App* cmd, const ConfigFlags& flags,
              const std::string& config_path, uint64_t packets, uint64_t flows,
              uint64_t seed) {
  PipelineConfig cfg = resolve_config(cmd, flags, config_path);
  psketch::SynthConfig synth_cfg;
  synth_cfg.flow_count = flows;
  synth_cfg.total_packets = packets;
  synth_cfg.rng_seed = seed;
  psketch::SynthResult workload = psketch::generate(synth_cfg);

  double best = 0.0;
  for (int pass = 0; pass < 3; ++pass) {
    psketch::Pipeline pipeline(cfg);
    auto start = std::chrono::steady_clock::now();
    for (const psketch::PacketRecord& p : workload.trace.packets) {
      pipeline.process_packet(p);
    }
    auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                                 start).count();
    double pps = static_cast<double>(packets) / elapsed;
    best = std::max(best, pps);
    std::cout << "pass " << (pass + 1) << ": " << static_cast<uint64_t>(pps)
              << " packets/s\n";
  }
  std::cout << "best: " << static_cast<uint64_t>(best) << " packets/s over "
            << packets << " packets\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"PSketch: priority-aware flow monitoring over packet traces"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  // generate
  auto* gen = app.add_subcommand("generate", "Write a synthetic pcap + truth sidecar");
  psketch::SynthConfig synth_cfg;
  double retrans_gap_ms = 5.0;
  std::string gen_out;
  gen->add_option("--flows", synth_cfg.flow_count, "Distinct flows")
      ->check(CLI::PositiveNumber);
  gen->add_option("--packets", synth_cfg.total_packets, "Total packets")
      ->check(CLI::PositiveNumber);
  gen->add_option("--zipf", synth_cfg.zipf_alpha, "Zipf skew exponent");
  gen->add_option("--tcp-fraction", synth_cfg.tcp_fraction, "TCP share of flows")
      ->check(CLI::Range(0.0, 1.0));
  gen->add_option("--retrans-rate", synth_cfg.retrans_rate,
                  "Duplicate probability per TCP data segment")
      ->check(CLI::Range(0.0, 0.999999));
  gen->add_option("--retrans-gap-ms", retrans_gap_ms, "Injected duplicate delay (ms)");
  gen->add_option("--seed", synth_cfg.rng_seed, "Generator RNG seed");
  gen->add_option("--out", gen_out, "Output pcap path")->required();

  // run
  auto* run = app.add_subcommand("run", "Replay a trace through the pipeline");
  ConfigFlags run_flags;
  std::string trace_path, priority_path, config_path, run_out;
  size_t k = 50;
  bool force_oracle = false;
  run->add_option("--trace", trace_path, "Input pcap")->required();
  run->add_option("--out", run_out, "Report path (default: stdout)");
  run->add_option("--k", k, "Top-k report size")->check(CLI::PositiveNumber);
  run->add_option("--priority", priority_path, "Priority key file");
  run->add_option("--config", config_path, "Pipeline config file");
  run->add_flag("--oracle", force_oracle,
                "Compute ground truth from the trace itself");
  add_config_flags(run, run_flags);

  // bench
  auto* bench = app.add_subcommand("bench", "Measure process_packet throughput");
  ConfigFlags bench_flags;
  std::string bench_config;
  uint64_t bench_packets = 1'000'000;
  uint64_t bench_flows = 10'000;
  uint64_t bench_seed = 42;
  bench->add_option("--packets", bench_packets, "Packets per pass")
      ->check(CLI::PositiveNumber);
  bench->add_option("--flows", bench_flows, "Distinct flows")
      ->check(CLI::PositiveNumber);
  bench->add_option("--config", bench_config, "Pipeline config file");
  add_config_flags(bench, bench_flags);
  bench->add_option("--bench-seed", bench_seed, "Workload RNG seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      return cmd_generate(gen, synth_cfg, retrans_gap_ms, gen_out);
    }
    if (run->parsed()) {
      return cmd_run(run, run_flags, config_path, trace_path, priority_path,
                     run_out, k, force_oracle);
    }
    return cmd_bench(bench, bench_flags, bench_config, bench_packets, bench_flows,
                     bench_seed);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
