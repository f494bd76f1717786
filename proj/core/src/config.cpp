#include "psketch/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace psketch {

namespace {

uint64_t parse_uint(const std::string& text, uint64_t max_value,
                    const std::string& what) {
  uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || value > max_value) {
    throw std::invalid_argument("invalid " + what + ": '" + text + "'");
  }
  return value;
}

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool parse_bool(const std::string& text, const std::string& what) {
  if (text == "true" || text == "1") return true;
  if (text == "false" || text == "0") return false;
  throw std::invalid_argument("invalid " + what + ": '" + text + "'");
}

}  // namespace

uint32_t parse_ipv4(const std::string& text) {
  std::stringstream ss(text);
  std::string octet;
  uint32_t addr = 0;
  int count = 0;
  while (std::getline(ss, octet, '.')) {
    addr = (addr << 8) | static_cast<uint32_t>(parse_uint(octet, 255, "IPv4 octet"));
    ++count;
  }
  if (count != 4) throw std::invalid_argument("invalid IPv4 address: '" + text + "'");
  return addr;
}

std::string format_ipv4(uint32_t addr) {
  std::ostringstream out;
  out << (addr >> 24) << '.' << ((addr >> 16) & 0xff) << '.' << ((addr >> 8) & 0xff)
      << '.' << (addr & 0xff);
  return out.str();
}

FlowKey parse_flow_key(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) parts.push_back(trim(part));
  if (parts.size() != 5) {
    throw std::invalid_argument("flow key needs 5 comma-separated fields: '" +
                                text + "'");
  }
  FlowKey key;
  key.src_ip = parse_ipv4(parts[0]);
  key.dst_ip = parse_ipv4(parts[1]);
  key.src_port = static_cast<uint16_t>(parse_uint(parts[2], 65535, "port"));
  key.dst_port = static_cast<uint16_t>(parse_uint(parts[3], 65535, "port"));
  key.protocol = static_cast<uint8_t>(parse_uint(parts[4], 255, "protocol"));
  return key;
}

std::string format_flow_key(const FlowKey& key) {
  std::ostringstream out;
  out << format_ipv4(key.src_ip) << ',' << format_ipv4(key.dst_ip) << ','
      << key.src_port << ',' << key.dst_port << ','
      << static_cast<unsigned>(key.protocol);
  return out.str();
}

std::vector<FlowKey> load_priority_keys(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open priority key file: " + path);
  std::vector<FlowKey> keys;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string body = trim(line.substr(0, line.find('#')));
    if (body.empty()) continue;
    try {
      keys.push_back(parse_flow_key(body));
    } catch (const std::invalid_argument& e) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": " +
                               e.what());
    }
  }
  return keys;
}

void load_pipeline_config(const std::string& path, PipelineConfig& cfg) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string body = trim(line.substr(0, line.find('#')));
    if (body.empty()) continue;
    size_t eq = body.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": expected `key = value`");
    }
    std::string key = trim(body.substr(0, eq));
    std::string value = trim(body.substr(eq + 1));
    try {
      if (key == "heavy_size") {
        cfg.heavy_table_size = parse_uint(value, SIZE_MAX, key);
      } else if (key == "vote_threshold") {
        cfg.vote_threshold = parse_uint(value, UINT64_MAX, key);
      } else if (key == "retrans_threshold_ns") {
        cfg.retrans_threshold_ns = parse_uint(value, UINT64_MAX, key);
      } else if (key == "lc_size") {
        cfg.lc_size = parse_uint(value, SIZE_MAX, key);
      } else if (key == "cms_width") {
        cfg.cms_width = parse_uint(value, SIZE_MAX, key);
      } else if (key == "cms_depth") {
        cfg.cms_depth = parse_uint(value, SIZE_MAX, key);
      } else if (key == "seed_heavy") {
        cfg.seed_heavy = static_cast<uint32_t>(parse_uint(value, UINT32_MAX, key));
      } else if (key == "seed_lc") {
        cfg.seed_lc = static_cast<uint32_t>(parse_uint(value, UINT32_MAX, key));
      } else if (key == "seed_cms1") {
        cfg.seed_cms[0] = static_cast<uint32_t>(parse_uint(value, UINT32_MAX, key));
      } else if (key == "seed_cms2") {
        cfg.seed_cms[1] = static_cast<uint32_t>(parse_uint(value, UINT32_MAX, key));
      } else if (key == "seed_cms3") {
        cfg.seed_cms[2] = static_cast<uint32_t>(parse_uint(value, UINT32_MAX, key));
      } else if (key == "priority_capacity") {
        cfg.priority_capacity = parse_uint(value, SIZE_MAX, key);
      } else if (key == "alg1_literal_update") {
        cfg.alg1_literal_update = parse_bool(value, key);
      } else if (key == "alg1_literal_cms") {
        cfg.alg1_literal_cms = parse_bool(value, key);
      } else if (key == "alg1_literal_routing") {
        cfg.alg1_literal_routing = parse_bool(value, key);
      } else if (key == "reset_votes_on_match") {
        cfg.reset_votes_on_match = parse_bool(value, key);
      } else {
        throw std::invalid_argument("unknown config key '" + key + "'");
      }
    } catch (const std::invalid_argument& e) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": " +
                               e.what());
    }
  }
}

}  // namespace psketch
