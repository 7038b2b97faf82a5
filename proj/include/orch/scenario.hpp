#ifndef ORCH_SCENARIO_HPP
#define ORCH_SCENARIO_HPP

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "orch/config.hpp"
#include "orch/decision.hpp"
#include "orch/intent.hpp"
#include "orch/netsim.hpp"
#include "orch/service.hpp"
#include "orch/topology.hpp"

namespace orch::scenario {

class ScenarioError : public Error {
 public:
  explicit ScenarioError(const std::string& what) : Error("ScenarioError", what) {}
};

struct Expectation {
  std::optional<decision::EncryptionLayerChoice> choice;
  std::optional<std::size_t> trace_rows;
  std::optional<double> max_processing_time_ms;
};

struct Scenario {
  std::string name;
  topology::NodeId src;
  topology::NodeId dst;
  intent::ConstraintSet constraints;
  Expectation expected;
};

// The two measurement scenarios: an encrypted latency-sensitive 1 Mbit/s
// demand that lands on the optical layer, and an encrypted
// latency-insensitive 1 Mbit/s demand that lands on an IP tunnel.
Scenario builtin_optical();
Scenario builtin_ip();

// Scenario file: a JSON object ({"scenarios": [...]} or a single scenario
// object) with members name, src, dst, constraints{encryption,
// latencySensitive, bandwidthBps} and optional expected{choice, traceRows,
// maxProcessingTimeMs}.
std::vector<Scenario> parse_scenarios(const std::string& text);
std::vector<Scenario> load_scenarios(const std::string& path);

struct ScenarioResult {
  std::string name;
  std::string intent_id;
  intent::IntentStateKind final_state = intent::IntentStateKind::Failed;
  std::string failure_reason;
  std::optional<decision::EncryptionLayerChoice> choice;
  std::optional<double> processing_time_ms;
  std::vector<trace::TraceEvent> trace;
  std::optional<netsim::EndToEndReport> end_to_end;
  std::optional<netsim::SimCallRecord> cop_call;  // device-side view
  std::vector<std::string> expectation_failures;

  bool passed() const { return expectation_failures.empty(); }
};

// Runs scenarios against a freshly booted in-process stack per run — one
// simulated device plane plus one orchestrator — exactly as the lab runs
// were taken, so every run's intent id counter starts at "acino1". The
// client role (NBI POST, polling) is played over real HTTP.
class ScenarioRunner {
 public:
  ScenarioRunner(std::shared_ptr<const topology::MultilayerTopology> topo,
                 config::ServiceConfig config);

  ScenarioResult run(const Scenario& scenario);

 private:
  std::shared_ptr<const topology::MultilayerTopology> topo_;
  config::ServiceConfig config_;
};

enum class TraceFormat { Table, Structured };

std::string format_report(const ScenarioResult& result, TraceFormat format);

}  // namespace orch::scenario

#endif  // ORCH_SCENARIO_HPP
