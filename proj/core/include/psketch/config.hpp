#ifndef PSKETCH_CONFIG_HPP
#define PSKETCH_CONFIG_HPP

#include <string>
#include <vector>

#include "psketch/flow.hpp"
#include "psketch/pipeline.hpp"

namespace psketch {

/// Dotted-quad IPv4, e.g. "10.0.0.1". Throws std::invalid_argument.
uint32_t parse_ipv4(const std::string& text);
std::string format_ipv4(uint32_t addr);

/// `src_ip,dst_ip,src_port,dst_port,proto` with decimal ports/protocol.
FlowKey parse_flow_key(const std::string& text);
std::string format_flow_key(const FlowKey& key);

/// Priority key file: one flow per line, `#` comments and blank lines
/// ignored. Parse errors carry the offending line number.
std::vector<FlowKey> load_priority_keys(const std::string& path);

/// Line-based `key = value` config mirroring PipelineConfig fields; unknown
/// keys are errors. Existing values in cfg are kept for absent keys, so CLI
/// flags applied afterwards win.
void load_pipeline_config(const std::string& path, PipelineConfig& cfg);

}  // namespace psketch

#endif  // PSKETCH_CONFIG_HPP
