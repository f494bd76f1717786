#include <benchmark/benchmark.h>

#include "psketch/pipeline.hpp"
#include "psketch/synth.hpp"

namespace {

using namespace psketch;

const SynthResult& workload() {
  static SynthResult r = [] {
    SynthConfig cfg;
    cfg.flow_count = 10'000;
    cfg.total_packets = 500'000;
    cfg.retrans_rate = 0.01;
    return generate(cfg);
  }();
  return r;
}

void BM_ProcessPacket(benchmark::State& state) {
  const auto& packets = workload().trace.packets;
  size_t i = 0;
  Pipeline pipeline{PipelineConfig{}};
  for (auto _ : state) {
    pipeline.process_packet(packets[i]);
    if (++i == packets.size()) i = 0;
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_ProcessPacket);

void BM_FullTrace(benchmark::State& state) {
  const auto& packets = workload().trace.packets;
  for (auto _ : state) {
    Pipeline pipeline{PipelineConfig{}};
    for (const auto& p : packets) pipeline.process_packet(p);
    benchmark::DoNotOptimize(pipeline.stats().packets_processed);
  }
  state.SetItemsProcessed(state.iterations() * packets.size());
}
BENCHMARK(BM_FullTrace)->Unit(benchmark::kMillisecond);

void BM_Reconstruct(benchmark::State& state) {
  Pipeline pipeline{PipelineConfig{}};
  const auto& packets = workload().trace.packets;
  for (const auto& p : packets) pipeline.process_packet(p);
  size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(pipeline.reconstruct_flow(packets[i].key));
    if (++i == packets.size()) i = 0;
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_Reconstruct);

}  // namespace

BENCHMARK_MAIN();
