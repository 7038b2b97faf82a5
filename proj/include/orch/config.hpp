#ifndef ORCH_CONFIG_HPP
#define ORCH_CONFIG_HPP

#include <chrono>
#include <cstdint>
#include <map>
#include <string>

#include "orch/error.hpp"
#include "orch/topology.hpp"

namespace orch::config {

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error("ConfigError", what) {}
};

// All deployment knobs in one place: NBI binding, southbound addresses,
// decision threshold, simulator delay. Loaded from a JSON file, then
// adjustable through ORCH_* environment variables.
struct ServiceConfig {
  std::string nbi_host = "127.0.0.1";
  int nbi_port = 8181;  // 0 binds an ephemeral port

  std::string ovc_address = "127.0.0.1:8080";
  // Per-switch tunnel-config agent addresses; switches not listed here are
  // reached at <mgmt_address>:6640.
  std::map<topology::NodeId, std::string> agent_addresses;
  int default_agent_port = 6640;

  std::uint64_t ip_bandwidth_threshold_bps = 1'000'000'000;
  std::chrono::milliseconds per_hop_delay{2000};
  std::chrono::milliseconds ack_timeout{5000};

  std::string agent_address_for(const topology::MultilayerTopology& topo,
                                const topology::NodeId& node) const;
};

ServiceConfig parse_config(const std::string& text);
ServiceConfig load_config(const std::string& path);

// Environment overrides: ORCH_NBI_HOST, ORCH_NBI_PORT, ORCH_OVC_ADDRESS,
// ORCH_DECISION_IP_BANDWIDTH_THRESHOLD_BPS, ORCH_SIM_PER_HOP_DELAY_MS,
// ORCH_SBI_ACK_TIMEOUT_MS.
void apply_env_overrides(ServiceConfig& config);

// Splits "host:port"; throws ConfigError on anything else.
std::pair<std::string, int> split_address(const std::string& address);

}  // namespace orch::config

#endif  // ORCH_CONFIG_HPP
