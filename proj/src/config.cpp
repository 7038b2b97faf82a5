#include "orch/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace orch::config {

namespace {

using nlohmann::ordered_json;

std::int64_t integer_field(const ordered_json& obj, const char* key, std::int64_t min_value) {
  const auto& v = obj.at(key);
  if (!v.is_number_integer()) {
    throw ConfigError(std::string("config: '") + key + "' must be an integer");
  }
  const auto value = v.get<std::int64_t>();
  if (value < min_value) {
    throw ConfigError(std::string("config: '") + key + "' must be >= " +
                      std::to_string(min_value));
  }
  return value;
}

std::string string_field(const ordered_json& obj, const char* key) {
  const auto& v = obj.at(key);
  if (!v.is_string()) {
    throw ConfigError(std::string("config: '") + key + "' must be a string");
  }
  return v.get<std::string>();
}

std::int64_t parse_integer(const std::string& text, const std::string& name,
                           std::int64_t min_value) {
  std::size_t consumed = 0;
  std::int64_t value = 0;
  try {
    value = std::stoll(text, &consumed);
  } catch (const std::exception&) {
    throw ConfigError(name + ": not an integer: '" + text + "'");
  }
  if (consumed != text.size()) {
    throw ConfigError(name + ": not an integer: '" + text + "'");
  }
  if (value < min_value) {
    throw ConfigError(name + ": must be >= " + std::to_string(min_value));
  }
  return value;
}

void reject_unknown(const ordered_json& obj, std::initializer_list<const char*> known,
                    const char* section) {
  for (const auto& item : obj.items()) {
    bool ok = false;
    for (const char* key : known) {
      if (item.key() == key) {
        ok = true;
        break;
      }
    }
    if (!ok) {
      throw ConfigError(std::string("config: unknown key '") + item.key() + "' in " + section);
    }
  }
}

}  // namespace

std::string ServiceConfig::agent_address_for(const topology::MultilayerTopology& topo,
                                             const topology::NodeId& node) const {
  auto it = agent_addresses.find(node);
  if (it != agent_addresses.end()) return it->second;
  return topo.node(node).mgmt_address + ":" + std::to_string(default_agent_port);
}

ServiceConfig parse_config(const std::string& text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config: expected an object");
  reject_unknown(doc, {"nbi", "ovc", "decision", "sim", "sbi", "agents"}, "config");

  ServiceConfig cfg;
  if (doc.contains("nbi")) {
    const auto& nbi = doc["nbi"];
    reject_unknown(nbi, {"host", "port"}, "nbi");
    if (nbi.contains("host")) cfg.nbi_host = string_field(nbi, "host");
    if (nbi.contains("port")) cfg.nbi_port = static_cast<int>(integer_field(nbi, "port", 0));
  }
  if (doc.contains("ovc")) {
    const auto& ovc = doc["ovc"];
    reject_unknown(ovc, {"address"}, "ovc");
    if (ovc.contains("address")) cfg.ovc_address = string_field(ovc, "address");
  }
  if (doc.contains("decision")) {
    const auto& decision = doc["decision"];
    reject_unknown(decision, {"ipBandwidthThresholdBps"}, "decision");
    if (decision.contains("ipBandwidthThresholdBps")) {
      cfg.ip_bandwidth_threshold_bps =
          static_cast<std::uint64_t>(integer_field(decision, "ipBandwidthThresholdBps", 1));
    }
  }
  if (doc.contains("sim")) {
    const auto& sim = doc["sim"];
    reject_unknown(sim, {"perHopDelayMs"}, "sim");
    if (sim.contains("perHopDelayMs")) {
      cfg.per_hop_delay = std::chrono::milliseconds(integer_field(sim, "perHopDelayMs", 0));
    }
  }
  if (doc.contains("sbi")) {
    const auto& sbi = doc["sbi"];
    reject_unknown(sbi, {"ackTimeoutMs"}, "sbi");
    if (sbi.contains("ackTimeoutMs")) {
      cfg.ack_timeout = std::chrono::milliseconds(integer_field(sbi, "ackTimeoutMs", 1));
    }
  }
  if (doc.contains("agents")) {
    if (!doc["agents"].is_object()) throw ConfigError("config: 'agents' must be an object");
    for (const auto& item : doc["agents"].items()) {
      if (!item.value().is_string()) {
        throw ConfigError("config: agent address for '" + item.key() + "' must be a string");
      }
      cfg.agent_addresses[item.key()] = item.value().get<std::string>();
    }
  }
  return cfg;
}

ServiceConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

void apply_env_overrides(ServiceConfig& config) {
  if (const char* v = std::getenv("ORCH_NBI_HOST")) config.nbi_host = v;
  if (const char* v = std::getenv("ORCH_NBI_PORT")) {
    config.nbi_port = static_cast<int>(parse_integer(v, "ORCH_NBI_PORT", 0));
  }
  if (const char* v = std::getenv("ORCH_OVC_ADDRESS")) config.ovc_address = v;
  if (const char* v = std::getenv("ORCH_DECISION_IP_BANDWIDTH_THRESHOLD_BPS")) {
    config.ip_bandwidth_threshold_bps = static_cast<std::uint64_t>(
        parse_integer(v, "ORCH_DECISION_IP_BANDWIDTH_THRESHOLD_BPS", 1));
  }
  if (const char* v = std::getenv("ORCH_SIM_PER_HOP_DELAY_MS")) {
    config.per_hop_delay =
        std::chrono::milliseconds(parse_integer(v, "ORCH_SIM_PER_HOP_DELAY_MS", 0));
  }
  if (const char* v = std::getenv("ORCH_SBI_ACK_TIMEOUT_MS")) {
    config.ack_timeout =
        std::chrono::milliseconds(parse_integer(v, "ORCH_SBI_ACK_TIMEOUT_MS", 1));
  }
}

std::pair<std::string, int> split_address(const std::string& address) {
  const auto pos = address.rfind(':');
  if (pos == std::string::npos || pos == 0 || pos + 1 == address.size()) {
    throw ConfigError("malformed address '" + address + "', expected host:port");
  }
  const int port = static_cast<int>(parse_integer(address.substr(pos + 1), "port", 1));
  if (port > 65535) throw ConfigError("port out of range in '" + address + "'");
  return {address.substr(0, pos), port};
}

}  // namespace orch::config
