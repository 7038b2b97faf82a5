#include "orch/service.hpp"

#include "httplib.h"
#include "json.hpp"

namespace orch::service {

namespace {

using nlohmann::ordered_json;

constexpr const char* kIntentCollectionPath = "/onos/v1/intents";

std::string error_body(const std::string& code, const std::string& message) {
  return ordered_json{{"error", code}, {"message", message}}.dump();
}

}  // namespace

std::optional<std::chrono::microseconds> ProcessingMetrics::processing_time() const {
  if (!last_sbi_emitted_at) return std::nullopt;
  return std::chrono::duration_cast<std::chrono::microseconds>(*last_sbi_emitted_at -
                                                               nbi_received_at);
}

std::optional<double> ProcessingMetrics::processing_time_ms() const {
  auto t = processing_time();
  if (!t) return std::nullopt;
  return static_cast<double>(t->count()) / 1000.0;
}

Orchestrator::Orchestrator(std::shared_ptr<const topology::MultilayerTopology> topo,
                           config::ServiceConfig config)
    : topo_(std::move(topo)), config_(std::move(config)), store_(topo_) {}

Orchestrator::~Orchestrator() { stop(); }

intent::Intent Orchestrator::submit_intent(const topology::NodeId& src,
                                           const topology::NodeId& dst,
                                           const intent::ConstraintSet& constraints) {
  const auto received_at = Clock::now();

  // Intent and context are created under one lock so lookups never observe
  // an intent without its trace log.
  std::lock_guard lock(mutex_);
  intent::Intent in = store_.submit(src, dst, constraints);
  auto ctx = std::make_shared<IntentContext>();
  ctx->nbi_received_at = received_at;
  ctx->log->record("Client", "Controller", trace::Protocol::Http,
                   "POST /onos/v1/intents HTTP/1.1", received_at);
  ctx->log->record("Controller", "Client", trace::Protocol::Http, "HTTP/1.1 201 Created");
  contexts_.emplace(in.id, ctx);
  // Pipeline starts only after the 201 row is on record: submission is
  // acknowledged before any southbound message is emitted.
  pipelines_.emplace_back(&Orchestrator::run_pipeline, this, in.id);
  return in;
}

std::shared_ptr<Orchestrator::IntentContext> Orchestrator::context(
    const std::string& id) const {
  std::lock_guard lock(mutex_);
  auto it = contexts_.find(id);
  if (it == contexts_.end()) {
    throw intent::UnknownIntentError("unknown intent '" + id + "'");
  }
  return it->second;
}

sbi::PlanExecutor Orchestrator::make_executor(const std::string& intent_id,
                                              const std::shared_ptr<IntentContext>& ctx,
                                              bool track_metrics) {
  (void)intent_id;
  sbi::CopClient cop(config_.ovc_address, config_.ack_timeout);
  std::map<topology::NodeId, sbi::TunnelAgentClient> agents;
  for (const auto& node : topo_->nodes()) {
    if (node.kind != topology::NodeKind::PacketSwitch) continue;
    agents.emplace(node.id, sbi::TunnelAgentClient(config_.agent_address_for(*topo_, node.id),
                                                   config_.ack_timeout));
  }
  auto sink = [this, ctx, track_metrics](const std::string& destination,
                                         trace::Protocol protocol, const std::string& info) {
    const auto now = Clock::now();
    ctx->log->record("Controller", destination, protocol, info, now);
    if (track_metrics) {
      std::lock_guard lock(mutex_);
      ctx->last_sbi_emitted_at = now;
    }
  };
  return sbi::PlanExecutor(std::move(cop), std::move(agents), std::move(sink));
}

void Orchestrator::run_pipeline(std::string id) {
  auto ctx = context(id);
  try {
    store_.transition(id, intent::IntentStateKind::Compiling);
    const intent::Intent in = store_.get(id);

    const auto choice = decision::select_encryption_layer(
        in.constraints, decision::DecisionConfig{config_.ip_bandwidth_threshold_bps});
    {
      std::lock_guard lock(mutex_);
      ctx->choice = choice;
    }

    compiler::ActionPlan plan = compiler::compile(in, choice, *topo_);
    {
      std::lock_guard lock(mutex_);
      ctx->plan = plan;
    }

    store_.transition(id, intent::IntentStateKind::Installing);
    make_executor(id, ctx, /*track_metrics=*/true).execute(plan);
    store_.transition(id, intent::IntentStateKind::Installed);
  } catch (const Error& e) {
    ctx->log->record("Controller", "Controller", trace::Protocol::Internal,
                     "pipeline failed: " + e.code());
    try {
      store_.transition(id, intent::IntentStateKind::Failed, e.code() + ": " + e.what());
    } catch (const intent::IntentError&) {
    }
  } catch (const std::exception& e) {
    ctx->log->record("Controller", "Controller", trace::Protocol::Internal,
                     "pipeline failed: internal error");
    try {
      store_.transition(id, intent::IntentStateKind::Failed,
                        std::string("Internal: ") + e.what());
    } catch (const intent::IntentError&) {
    }
  }
}

IntentRecord Orchestrator::get_intent(const std::string& id) const {
  IntentRecord record;
  record.intent = store_.get(id);
  auto ctx = context(id);
  {
    std::lock_guard lock(mutex_);
    record.choice = ctx->choice;
    record.metrics.intent_id = id;
    record.metrics.nbi_received_at = ctx->nbi_received_at;
    record.metrics.last_sbi_emitted_at = ctx->last_sbi_emitted_at;
  }
  record.trace = ctx->log->events();
  return record;
}

std::vector<IntentRecord> Orchestrator::list_intents() const {
  std::vector<IntentRecord> out;
  for (const auto& in : store_.list()) {
    out.push_back(get_intent(in.id));
  }
  return out;
}

intent::Intent Orchestrator::withdraw_intent(const std::string& id) {
  auto ctx = context(id);
  std::lock_guard admin(ctx->admin_mutex);

  const intent::Intent in = store_.get(id);
  if (in.state != intent::IntentStateKind::Installed) {
    throw NotWithdrawableError("intent '" + id + "' is " + to_string(in.state) +
                               ", only Installed intents can be withdrawn");
  }
  compiler::ActionPlan plan;
  {
    std::lock_guard lock(mutex_);
    plan = *ctx->plan;
  }
  try {
    make_executor(id, ctx, /*track_metrics=*/false).teardown(plan);
  } catch (const Error& e) {
    store_.transition(id, intent::IntentStateKind::Failed,
                      "teardown: " + e.code() + ": " + e.what());
    throw;
  }
  return store_.transition(id, intent::IntentStateKind::Withdrawn);
}

std::string Orchestrator::export_trace(const std::string& id, TraceFormat format) const {
  auto events = context(id)->log->events();
  return format == TraceFormat::Table ? trace::export_table(events)
                                      : trace::export_structured(events);
}

std::optional<intent::Intent> Orchestrator::await_terminal(
    const std::string& id, std::chrono::milliseconds timeout) const {
  return store_.await(
      id,
      [](const intent::Intent& in) {
        return in.state != intent::IntentStateKind::Submitted &&
               in.state != intent::IntentStateKind::Compiling &&
               in.state != intent::IntentStateKind::Installing;
      },
      timeout);
}

namespace {

ordered_json constraints_json(const intent::ConstraintSet& c) {
  return {{"encryption", c.encrypted},
          {"latencySensitive", c.latency_sensitive},
          {"bandwidthBps", c.bandwidth_bps}};
}

ordered_json record_json(const IntentRecord& record) {
  ordered_json body;
  body["id"] = record.intent.id;
  body["src"] = record.intent.src;
  body["dst"] = record.intent.dst;
  body["constraints"] = constraints_json(record.intent.constraints);
  body["state"] = to_string(record.intent.state);
  if (record.intent.state == intent::IntentStateKind::Failed) {
    body["failureReason"] = record.intent.failure_reason;
  }
  if (record.choice) {
    body["choice"] = decision::to_string(*record.choice);
  }
  if (auto ms = record.metrics.processing_time_ms()) {
    body["processingTimeMs"] = *ms;
  }
  return body;
}

}  // namespace

void Orchestrator::serve(httplib::Server& server) {
  server.Post(kIntentCollectionPath, [this](const httplib::Request& req,
                                            httplib::Response& res) {
    ordered_json doc;
    try {
      doc = ordered_json::parse(req.body);
    } catch (const nlohmann::json::exception& e) {
      res.status = 400;
      res.set_content(error_body("MalformedBody", e.what()), "application/json");
      return;
    }
    try {
      if (!doc.is_object() || !doc.contains("src") || !doc.contains("dst") ||
          !doc["src"].is_string() || !doc["dst"].is_string()) {
        throw intent::InvalidConstraintsError("body must carry string members src and dst");
      }
      intent::ConstraintSet constraints;
      if (doc.contains("encryption")) {
        if (!doc["encryption"].is_boolean()) {
          throw intent::InvalidConstraintsError("'encryption' must be a boolean");
        }
        constraints.encrypted = doc["encryption"].get<bool>();
      }
      if (doc.contains("latencySensitive")) {
        if (!doc["latencySensitive"].is_boolean()) {
          throw intent::InvalidConstraintsError("'latencySensitive' must be a boolean");
        }
        constraints.latency_sensitive = doc["latencySensitive"].get<bool>();
      }
      if (doc.contains("bandwidthBps")) {
        if (!doc["bandwidthBps"].is_number_unsigned()) {
          throw intent::InvalidConstraintsError("'bandwidthBps' must be a non-negative integer");
        }
        constraints.bandwidth_bps = doc["bandwidthBps"].get<std::uint64_t>();
      }
      const intent::Intent in =
          submit_intent(doc["src"].get<std::string>(), doc["dst"].get<std::string>(), constraints);
      const std::string resource = std::string(kIntentCollectionPath) + "/" + in.id;
      res.status = 201;
      res.set_header("Location", resource);
      res.set_content(
          ordered_json{{"id", in.id}, {"resource", resource}, {"state", to_string(in.state)}}
              .dump(),
          "application/json");
    } catch (const intent::IntentError& e) {
      res.status = 400;
      res.set_content(error_body(e.code(), e.what()), "application/json");
    }
  });

  server.Get(kIntentCollectionPath, [this](const httplib::Request&, httplib::Response& res) {
    ordered_json body;
    body["intents"] = ordered_json::array();
    for (const auto& record : list_intents()) {
      body["intents"].push_back(record_json(record));
    }
    res.set_content(body.dump(2) + "\n", "application/json");
  });

  server.Get(std::string(kIntentCollectionPath) + "/:id",
             [this](const httplib::Request& req, httplib::Response& res) {
               try {
                 const IntentRecord record = get_intent(req.path_params.at("id"));
                 res.set_content(record_json(record).dump(2) + "\n", "application/json");
               } catch (const intent::UnknownIntentError& e) {
                 res.status = 404;
                 res.set_content(error_body(e.code(), e.what()), "application/json");
               }
             });

  server.Get(std::string(kIntentCollectionPath) + "/:id/trace",
             [this](const httplib::Request& req, httplib::Response& res) {
               const std::string format = req.get_param_value("format");
               try {
                 if (format.empty() || format == "table") {
                   res.set_content(export_trace(req.path_params.at("id"), TraceFormat::Table),
                                   "text/plain");
                 } else if (format == "structured") {
                   res.set_content(
                       export_trace(req.path_params.at("id"), TraceFormat::Structured),
                       "application/json");
                 } else {
                   res.status = 400;
                   res.set_content(
                       error_body("BadFormat", "format must be 'table' or 'structured'"),
                       "application/json");
                 }
               } catch (const intent::UnknownIntentError& e) {
                 res.status = 404;
                 res.set_content(error_body(e.code(), e.what()), "application/json");
               }
             });

  server.Delete(std::string(kIntentCollectionPath) + "/:id",
                [this](const httplib::Request& req, httplib::Response& res) {
                  try {
                    const intent::Intent in = withdraw_intent(req.path_params.at("id"));
                    res.set_content(
                        ordered_json{{"id", in.id}, {"state", to_string(in.state)}}.dump(),
                        "application/json");
                  } catch (const intent::UnknownIntentError& e) {
                    res.status = 404;
                    res.set_content(error_body(e.code(), e.what()), "application/json");
                  } catch (const NotWithdrawableError& e) {
                    res.status = 409;
                    res.set_content(error_body(e.code(), e.what()), "application/json");
                  } catch (const Error& e) {
                    res.status = 500;
                    res.set_content(error_body(e.code(), e.what()), "application/json");
                  }
                });
}

int Orchestrator::start() {
  server_ = std::make_unique<httplib::Server>();
  serve(*server_);
  int bound = config_.nbi_port;
  if (config_.nbi_port == 0) {
    bound = server_->bind_to_any_port(config_.nbi_host);
  } else if (!server_->bind_to_port(config_.nbi_host, config_.nbi_port)) {
    throw Error("BindFailed", "NBI: cannot bind " + config_.nbi_host + ":" +
                                  std::to_string(config_.nbi_port));
  }
  if (bound <= 0) throw Error("BindFailed", "NBI: cannot bind " + config_.nbi_host);
  server_thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
  nbi_address_ = config_.nbi_host + ":" + std::to_string(bound);
  return bound;
}

void Orchestrator::stop() {
  if (server_) server_->stop();
  if (server_thread_.joinable()) server_thread_.join();
  std::vector<std::thread> pipelines;
  {
    std::lock_guard lock(mutex_);
    stopping_ = true;
    pipelines.swap(pipelines_);
  }
  for (auto& t : pipelines) {
    if (t.joinable()) t.join();
  }
}

}  // namespace orch::service
