#include "orch/sbi_client.hpp"

#include "httplib.h"
#include "json.hpp"
#include "orch/config.hpp"

namespace orch::sbi {

namespace {

// One client per request: httplib clients are not safe for concurrent use,
// and connection setup on loopback is cheap.
httplib::Client make_client(const std::string& address, std::chrono::milliseconds timeout) {
  auto [host, port] = config::split_address(address);
  httplib::Client client(host, port);
  client.set_connection_timeout(std::chrono::duration_cast<std::chrono::seconds>(timeout));
  client.set_read_timeout(timeout);
  client.set_write_timeout(timeout);
  return client;
}

// Pulls the "message" out of an error body, falling back to the raw text.
std::string rejection_detail(const httplib::Response& res) {
  try {
    auto doc = nlohmann::json::parse(res.body);
    if (doc.is_object() && doc.contains("message") && doc["message"].is_string()) {
      return doc["message"].get<std::string>();
    }
  } catch (const nlohmann::json::exception&) {
  }
  return "HTTP " + std::to_string(res.status) + ": " + res.body;
}

}  // namespace

CopClient::CopClient(std::string address, std::chrono::milliseconds timeout)
    : address_(std::move(address)), timeout_(timeout) {}

CopAck CopClient::push_call(const CopCall& call) const {
  auto client = make_client(address_, timeout_);
  auto res = client.Post(cop_call_path(call.call_id), encode_cop_call(call), "application/json");
  if (!res) {
    throw ControllerUnreachableError("OVC at " + address_ + ": " + httplib::to_string(res.error()));
  }
  if (res->status < 200 || res->status >= 300) {
    throw ControllerRejectedError(rejection_detail(*res));
  }
  try {
    CopCall reply = decode_cop_call(res->body);
    return CopAck{reply.call_id, reply.oper_status};
  } catch (const MalformedBodyError& e) {
    throw ControllerRejectedError(std::string("malformed acknowledgment: ") + e.what());
  }
}

void CopClient::delete_call(const std::string& call_id) const {
  auto client = make_client(address_, timeout_);
  auto res = client.Delete(cop_call_path(call_id));
  if (!res) {
    throw ControllerUnreachableError("OVC at " + address_ + ": " + httplib::to_string(res.error()));
  }
  if (res->status < 200 || res->status >= 300) {
    throw ControllerRejectedError(rejection_detail(*res));
  }
}

TunnelAgentClient::TunnelAgentClient(std::string address, std::chrono::milliseconds timeout)
    : address_(std::move(address)), timeout_(timeout) {}

void TunnelAgentClient::push_tunnel(const TunnelConfig& config) const {
  auto client = make_client(address_, timeout_);
  auto res = client.Post(tunnel_path(config.name), encode_tunnel_config(config),
                         "application/json");
  if (!res) {
    throw AgentUnreachableError("agent at " + address_ + ": " + httplib::to_string(res.error()));
  }
  if (res->status < 200 || res->status >= 300) {
    throw AgentRejectedError(rejection_detail(*res));
  }
}

void TunnelAgentClient::delete_tunnel(const std::string& name) const {
  auto client = make_client(address_, timeout_);
  auto res = client.Delete(tunnel_path(name));
  if (!res) {
    throw AgentUnreachableError("agent at " + address_ + ": " + httplib::to_string(res.error()));
  }
  if (res->status < 200 || res->status >= 300) {
    throw AgentRejectedError(rejection_detail(*res));
  }
}

PlanExecutor::PlanExecutor(CopClient cop, std::map<topology::NodeId, TunnelAgentClient> agents,
                           TraceSink trace)
    : cop_(std::move(cop)), agents_(std::move(agents)), trace_(std::move(trace)) {}

const TunnelAgentClient& PlanExecutor::agent_for(const topology::NodeId& node) const {
  auto it = agents_.find(node);
  if (it == agents_.end()) {
    throw AgentUnreachableError("no agent address configured for switch '" + node + "'");
  }
  return it->second;
}

void PlanExecutor::execute(const compiler::ActionPlan& plan) {
  for (const auto& action : plan.actions) {
    if (const auto* tunnel = std::get_if<compiler::ConfigureTunnel>(&action)) {
      if (trace_) {
        trace_(tunnel->switch_id, trace::Protocol::TunnelCfg,
               "POST " + tunnel_path(tunnel->tunnel.name));
      }
      agent_for(tunnel->switch_id).push_tunnel(tunnel->tunnel);
    } else {
      const auto& cop = std::get<compiler::CreateCopCall>(action);
      if (trace_) {
        trace_("OVC", trace::Protocol::Cop, "POST " + cop_call_path(cop.call.call_id));
      }
      cop_.push_call(cop.call);
    }
  }
}

void PlanExecutor::teardown(const compiler::ActionPlan& plan) {
  for (auto it = plan.actions.rbegin(); it != plan.actions.rend(); ++it) {
    if (const auto* tunnel = std::get_if<compiler::ConfigureTunnel>(&*it)) {
      if (trace_) {
        trace_(tunnel->switch_id, trace::Protocol::TunnelCfg,
               "DELETE " + tunnel_path(tunnel->tunnel.name));
      }
      agent_for(tunnel->switch_id).delete_tunnel(tunnel->tunnel.name);
    } else {
      const auto& cop = std::get<compiler::CreateCopCall>(*it);
      if (trace_) {
        trace_("OVC", trace::Protocol::Cop, "DELETE " + cop_call_path(cop.call.call_id));
      }
      cop_.delete_call(cop.call.call_id);
    }
  }
}

}  // namespace orch::sbi
