#include <cstdio>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "psketch/config.hpp"

using namespace psketch;

namespace {

std::string write_temp(const std::string& name, const std::string& content) {
  std::string path = (std::filesystem::temp_directory_path() / name).string();
  std::ofstream out(path, std::ios::trunc);
  out << content;
  return path;
}

}  // namespace

TEST_CASE("ipv4 parsing and formatting") {
  CHECK(parse_ipv4("10.0.0.1") == 0x0A000001u);
  CHECK(parse_ipv4("255.255.255.255") == 0xFFFFFFFFu);
  CHECK(format_ipv4(0x0A000001u) == "10.0.0.1");
  CHECK_THROWS_AS(parse_ipv4("10.0.0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_ipv4("10.0.0.256"), std::invalid_argument);
  CHECK_THROWS_AS(parse_ipv4("ten.0.0.1"), std::invalid_argument);
}

TEST_CASE("flow key text round-trip") {
  FlowKey k{0x0A000001, 0xC0A80102, 80, 443, kProtoTcp};
  CHECK(format_flow_key(k) == "10.0.0.1,192.168.1.2,80,443,6");
  CHECK(parse_flow_key(format_flow_key(k)) == k);
  CHECK_THROWS_AS(parse_flow_key("10.0.0.1,10.0.0.2,80,443"), std::invalid_argument);
  CHECK_THROWS_AS(parse_flow_key("10.0.0.1,10.0.0.2,99999,443,6"),
                  std::invalid_argument);
}

TEST_CASE("priority key file") {
  std::string path = write_temp("psketch_prio.txt",
                                "# comment line\n"
                                "10.0.0.1,10.0.0.2,80,443,6\n"
                                "\n"
                                "10.0.0.3,10.0.0.4,1000,2000,17   # trailing\n");
  auto keys = load_priority_keys(path);
  REQUIRE(keys.size() == 2);
  CHECK(keys[0].src_port == 80);
  CHECK(keys[1].protocol == kProtoUdp);
  std::remove(path.c_str());

  SUBCASE("parse errors carry the line number") {
    std::string bad = write_temp("psketch_prio_bad.txt",
                                 "10.0.0.1,10.0.0.2,80,443,6\n"
                                 "not-a-key\n");
    try {
      load_priority_keys(bad);
      FAIL("expected parse error");
    } catch (const std::runtime_error& e) {
      CHECK(std::string(e.what()).find(":2:") != std::string::npos);
    }
    std::remove(bad.c_str());
  }
}

TEST_CASE("pipeline config file") {
  std::string path = write_temp("psketch_cfg.txt",
                                "heavy_size = 128\n"
                                "vote_threshold = 4\n"
                                "retrans_threshold_ns = 5000000\n"
                                "lc_size = 2048\n"
                                "cms_width = 100\n"
                                "seed_heavy = 900\n"
                                "alg1_literal_routing = true\n"
                                "# comment\n");
  PipelineConfig cfg;
  load_pipeline_config(path, cfg);
  CHECK(cfg.heavy_table_size == 128);
  CHECK(cfg.vote_threshold == 4);
  CHECK(cfg.retrans_threshold_ns == 5'000'000);
  CHECK(cfg.lc_size == 2048);
  CHECK(cfg.cms_width == 100);
  CHECK(cfg.seed_heavy == 900);
  CHECK(cfg.alg1_literal_routing);
  CHECK(cfg.cms_width == 100);
  CHECK_FALSE(cfg.alg1_literal_update);  // untouched default
  std::remove(path.c_str());

  SUBCASE("unknown keys are rejected with a line number") {
    std::string bad = write_temp("psketch_cfg_bad.txt", "no_such_knob = 1\n");
    PipelineConfig c;
    try {
      load_pipeline_config(bad, c);
      FAIL("expected config error");
    } catch (const std::runtime_error& e) {
      CHECK(std::string(e.what()).find(":1:") != std::string::npos);
    }
    std::remove(bad.c_str());
  }
}
