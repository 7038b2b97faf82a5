#ifndef ORCH_SERVICE_HPP
#define ORCH_SERVICE_HPP

#include <chrono>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "orch/compiler.hpp"
#include "orch/config.hpp"
#include "orch/decision.hpp"
#include "orch/intent.hpp"
#include "orch/sbi_client.hpp"
#include "orch/topology.hpp"
#include "orch/trace.hpp"

namespace httplib {
class Server;
}

namespace orch::service {

using Clock = std::chrono::steady_clock;

// NBI receipt to last SBI emission, per intent. Device-side delays never
// count: the clock stops when the final setup message leaves, not when it
// is acknowledged.
struct ProcessingMetrics {
  std::string intent_id;
  Clock::time_point nbi_received_at{};
  std::optional<Clock::time_point> last_sbi_emitted_at;

  std::optional<std::chrono::microseconds> processing_time() const;
  std::optional<double> processing_time_ms() const;
};

struct IntentRecord {
  intent::Intent intent;
  std::optional<decision::EncryptionLayerChoice> choice;
  ProcessingMetrics metrics;
  std::vector<trace::TraceEvent> trace;
};

enum class TraceFormat { Table, Structured };

class NotWithdrawableError : public Error {
 public:
  explicit NotWithdrawableError(const std::string& what)
      : Error("NotWithdrawable", what) {}
};

// The orchestrator process: REST northbound interface plus the asynchronous
// intent pipeline (submit -> decide -> compile -> execute). Submission
// returns before installation; per-intent pipelines run concurrently.
class Orchestrator {
 public:
  Orchestrator(std::shared_ptr<const topology::MultilayerTopology> topo,
               config::ServiceConfig config);
  ~Orchestrator();

  Orchestrator(const Orchestrator&) = delete;
  Orchestrator& operator=(const Orchestrator&) = delete;

  // Binds the NBI (port 0 = ephemeral); returns the bound port.
  int start();
  void stop();  // stops the NBI and drains running pipelines
  const std::string& nbi_address() const { return nbi_address_; }

  // Programmatic equivalents of the REST surface. submit_intent records the
  // NBI POST / 201 trace rows and schedules the pipeline.
  intent::Intent submit_intent(const topology::NodeId& src, const topology::NodeId& dst,
                               const intent::ConstraintSet& constraints);
  IntentRecord get_intent(const std::string& id) const;
  std::vector<IntentRecord> list_intents() const;
  intent::Intent withdraw_intent(const std::string& id);
  std::string export_trace(const std::string& id, TraceFormat format) const;

  const intent::IntentStore& store() const { return store_; }

  // Blocks until the intent leaves the given set of transient states.
  std::optional<intent::Intent> await_terminal(const std::string& id,
                                               std::chrono::milliseconds timeout) const;

 private:
  struct IntentContext {
    std::shared_ptr<trace::TraceLog> log = std::make_shared<trace::TraceLog>();
    std::optional<decision::EncryptionLayerChoice> choice;
    std::optional<compiler::ActionPlan> plan;
    Clock::time_point nbi_received_at{};
    std::optional<Clock::time_point> last_sbi_emitted_at;
    std::mutex admin_mutex;  // serializes withdrawal
  };

  std::shared_ptr<IntentContext> context(const std::string& id) const;
  sbi::PlanExecutor make_executor(const std::string& intent_id,
                                  const std::shared_ptr<IntentContext>& ctx, bool track_metrics);
  void run_pipeline(std::string id);
  void serve(httplib::Server& server);

  std::shared_ptr<const topology::MultilayerTopology> topo_;
  config::ServiceConfig config_;
  intent::IntentStore store_;

  mutable std::mutex mutex_;
  std::map<std::string, std::shared_ptr<IntentContext>> contexts_;
  std::vector<std::thread> pipelines_;
  bool stopping_ = false;

  std::unique_ptr<httplib::Server> server_;
  std::thread server_thread_;
  std::string nbi_address_;
};

}  // namespace orch::service

#endif  // ORCH_SERVICE_HPP
