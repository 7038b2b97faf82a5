#include "orch/scenario.hpp"

#include <fstream>
#include <sstream>
#include <thread>

#include "httplib.h"
#include "json.hpp"

namespace orch::scenario {

namespace {

using nlohmann::ordered_json;

constexpr std::chrono::milliseconds kTerminalTimeout{30000};
constexpr std::chrono::milliseconds kPollInterval{2};

decision::EncryptionLayerChoice parse_choice(const std::string& s) {
  if (s == "Unencrypted") return decision::EncryptionLayerChoice::Unencrypted;
  if (s == "OpticalLayer") return decision::EncryptionLayerChoice::OpticalLayer;
  if (s == "IpLayer") return decision::EncryptionLayerChoice::IpLayer;
  throw ScenarioError("unknown choice '" + s + "'");
}

Scenario parse_scenario(const ordered_json& doc) {
  if (!doc.is_object()) throw ScenarioError("scenario must be an object");
  for (const auto& item : doc.items()) {
    const std::string& key = item.key();
    if (key != "name" && key != "src" && key != "dst" && key != "constraints" &&
        key != "expected") {
      throw ScenarioError("scenario: unknown key '" + key + "'");
    }
  }
  for (const char* key : {"name", "src", "dst"}) {
    if (!doc.contains(key) || !doc.at(key).is_string()) {
      throw ScenarioError(std::string("scenario: missing string field '") + key + "'");
    }
  }
  Scenario s;
  s.name = doc.at("name").get<std::string>();
  s.src = doc.at("src").get<std::string>();
  s.dst = doc.at("dst").get<std::string>();
  if (doc.contains("constraints")) {
    const auto& c = doc.at("constraints");
    if (!c.is_object()) throw ScenarioError("scenario: 'constraints' must be an object");
    for (const auto& item : c.items()) {
      if (item.key() == "encryption" && item.value().is_boolean()) {
        s.constraints.encrypted = item.value().get<bool>();
      } else if (item.key() == "latencySensitive" && item.value().is_boolean()) {
        s.constraints.latency_sensitive = item.value().get<bool>();
      } else if (item.key() == "bandwidthBps" && item.value().is_number_unsigned()) {
        s.constraints.bandwidth_bps = item.value().get<std::uint64_t>();
      } else {
        throw ScenarioError("scenario: bad constraint '" + item.key() + "'");
      }
    }
  }
  if (doc.contains("expected")) {
    const auto& e = doc.at("expected");
    if (!e.is_object()) throw ScenarioError("scenario: 'expected' must be an object");
    for (const auto& item : e.items()) {
      if (item.key() == "choice" && item.value().is_string()) {
        s.expected.choice = parse_choice(item.value().get<std::string>());
      } else if (item.key() == "traceRows" && item.value().is_number_unsigned()) {
        s.expected.trace_rows = item.value().get<std::size_t>();
      } else if (item.key() == "maxProcessingTimeMs" && item.value().is_number()) {
        s.expected.max_processing_time_ms = item.value().get<double>();
      } else {
        throw ScenarioError("scenario: bad expectation '" + item.key() + "'");
      }
    }
  }
  return s;
}

}  // namespace

Scenario builtin_optical() {
  Scenario s;
  s.name = "optical";
  s.src = "OVS1";
  s.dst = "OVS2";
  s.constraints = {true, true, 1'000'000};
  s.expected.choice = decision::EncryptionLayerChoice::OpticalLayer;
  s.expected.trace_rows = 3;  // NBI POST, 201, COP POST
  s.expected.max_processing_time_ms = 120.0;
  return s;
}

Scenario builtin_ip() {
  Scenario s;
  s.name = "ip";
  s.src = "OVS1";
  s.dst = "OVS2";
  s.constraints = {true, false, 1'000'000};
  s.expected.choice = decision::EncryptionLayerChoice::IpLayer;
  s.expected.trace_rows = 5;  // NBI POST, 201, two tunnel configs, COP POST
  s.expected.max_processing_time_ms = 200.0;
  return s;
}

std::vector<Scenario> parse_scenarios(const std::string& text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ScenarioError(std::string("scenario file: ") + e.what());
  }
  std::vector<Scenario> out;
  if (doc.is_object() && doc.contains("scenarios")) {
    if (!doc.at("scenarios").is_array()) {
      throw ScenarioError("'scenarios' must be a list");
    }
    for (const auto& s : doc.at("scenarios")) out.push_back(parse_scenario(s));
  } else {
    out.push_back(parse_scenario(doc));
  }
  return out;
}

std::vector<Scenario> load_scenarios(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ScenarioError("cannot open scenario file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenarios(buf.str());
}

ScenarioRunner::ScenarioRunner(std::shared_ptr<const topology::MultilayerTopology> topo,
                               config::ServiceConfig config)
    : topo_(std::move(topo)), config_(std::move(config)) {}

ScenarioResult ScenarioRunner::run(const Scenario& scenario) {
  ScenarioResult result;
  result.name = scenario.name;

  // Fresh device plane and orchestrator per run; the intent counter starts
  // over so every run provisions call "acino1" like the lab traces.
  netsim::SimPlane sim(topo_, config_.per_hop_delay);
  const auto [ovc_host, ovc_port] = config::split_address(config_.ovc_address);
  sim.start(ovc_host, ovc_port);

  config::ServiceConfig wired = config_;
  wired.ovc_address = sim.ovc().address();
  wired.agent_addresses = sim.agent_addresses();

  service::Orchestrator orch(topo_, wired);
  orch.start();

  // Client role: submit over the wire.
  const auto [nbi_host, nbi_port] = config::split_address(orch.nbi_address());
  httplib::Client client(nbi_host, nbi_port);
  ordered_json body{{"src", scenario.src},
                    {"dst", scenario.dst},
                    {"encryption", scenario.constraints.encrypted},
                    {"latencySensitive", scenario.constraints.latency_sensitive},
                    {"bandwidthBps", scenario.constraints.bandwidth_bps}};
  auto res = client.Post("/onos/v1/intents", body.dump(), "application/json");
  if (!res) {
    throw ScenarioError("NBI unreachable: " + httplib::to_string(res.error()));
  }
  if (res->status != 201) {
    result.expectation_failures.push_back("submission rejected: HTTP " +
                                          std::to_string(res->status) + " " + res->body);
    return result;
  }
  result.intent_id = ordered_json::parse(res->body).at("id").get<std::string>();

  const auto terminal = orch.await_terminal(result.intent_id, kTerminalTimeout);
  if (!terminal) {
    result.expectation_failures.push_back("intent did not reach a terminal state");
    return result;
  }
  result.final_state = terminal->state;
  result.failure_reason = terminal->failure_reason;

  const service::IntentRecord record = orch.get_intent(result.intent_id);
  result.choice = record.choice;
  result.processing_time_ms = record.metrics.processing_time_ms();
  result.trace = record.trace;

  if (result.final_state == intent::IntentStateKind::Installed) {
    result.cop_call = sim.ovc().call(result.intent_id);
    const auto hops = result.cop_call ? result.cop_call->hops : std::size_t{3};
    const auto deadline = netsim::Clock::now() +
                          config_.per_hop_delay * static_cast<long>(hops) +
                          std::chrono::milliseconds(3000);
    while (true) {
      result.end_to_end = sim.end_to_end_check(result.intent_id);
      if (result.end_to_end->connectivity || netsim::Clock::now() >= deadline) break;
      std::this_thread::sleep_for(kPollInterval);
    }
    result.cop_call = sim.ovc().call(result.intent_id);  // refresh status
  } else {
    result.expectation_failures.push_back(
        "terminal state " + std::string(to_string(result.final_state)) +
        (result.failure_reason.empty() ? "" : " (" + result.failure_reason + ")"));
  }

  if (scenario.expected.choice) {
    if (!result.choice || *result.choice != *scenario.expected.choice) {
      result.expectation_failures.push_back(
          std::string("expected choice ") + decision::to_string(*scenario.expected.choice) +
          ", got " + (result.choice ? decision::to_string(*result.choice) : "none"));
    }
  }
  if (scenario.expected.trace_rows && result.trace.size() != *scenario.expected.trace_rows) {
    result.expectation_failures.push_back(
        "expected " + std::to_string(*scenario.expected.trace_rows) + " trace rows, got " +
        std::to_string(result.trace.size()));
  }
  if (scenario.expected.max_processing_time_ms) {
    if (!result.processing_time_ms ||
        *result.processing_time_ms >= *scenario.expected.max_processing_time_ms) {
      result.expectation_failures.push_back(
          "expected processing time < " +
          std::to_string(*scenario.expected.max_processing_time_ms) + " ms, got " +
          (result.processing_time_ms ? std::to_string(*result.processing_time_ms) + " ms"
                                     : "none"));
    }
  }

  orch.stop();
  sim.stop();
  return result;
}

std::string format_report(const ScenarioResult& result, TraceFormat format) {
  std::ostringstream out;
  out << "=== scenario " << result.name << " ===\n";
  out << "intent:          " << (result.intent_id.empty() ? "-" : result.intent_id) << "\n";
  out << "choice:          "
      << (result.choice ? decision::to_string(*result.choice) : "-") << "\n";
  out << "state:           " << to_string(result.final_state);
  if (!result.failure_reason.empty()) out << " (" << result.failure_reason << ")";
  out << "\n";
  out << "processing time: ";
  if (result.processing_time_ms) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f ms", *result.processing_time_ms);
    out << buf;
  } else {
    out << "-";
  }
  out << "\n";
  if (result.end_to_end) {
    out << "end-to-end:      "
        << (result.end_to_end->connectivity ? "connected" : "no connectivity")
        << ", encrypted at " << to_string(result.end_to_end->encrypted_at) << "\n";
  }
  if (result.cop_call) {
    out << "lightpath:       call-" << result.cop_call->call.call_id << " "
        << to_string(result.cop_call->status) << " over "
        << result.cop_call->hops << " hop(s)\n";
  }
  out << "trace:\n";
  out << (format == TraceFormat::Table ? trace::export_table(result.trace)
                                       : trace::export_structured(result.trace));
  out << "result:          " << (result.passed() ? "PASS" : "FAIL") << "\n";
  for (const auto& failure : result.expectation_failures) {
    out << "  - " << failure << "\n";
  }
  return out.str();
}

}  // namespace orch::scenario
