#ifndef ORCH_SBI_CLIENT_HPP
#define ORCH_SBI_CLIENT_HPP

#include <chrono>
#include <functional>
#include <map>
#include <string>

#include "orch/compiler.hpp"
#include "orch/cop.hpp"
#include "orch/topology.hpp"
#include "orch/trace.hpp"
#include "orch/tunnel.hpp"

namespace orch::sbi {

class ControllerUnreachableError : public Error {
 public:
  explicit ControllerUnreachableError(const std::string& what)
      : Error("ControllerUnreachable", what) {}
};

class ControllerRejectedError : public Error {
 public:
  explicit ControllerRejectedError(const std::string& what)
      : Error("ControllerRejected", what) {}
};

class AgentUnreachableError : public Error {
 public:
  explicit AgentUnreachableError(const std::string& what)
      : Error("AgentUnreachable", what) {}
};

class AgentRejectedError : public Error {
 public:
  explicit AgentRejectedError(const std::string& what) : Error("AgentRejected", what) {}
};

struct CopAck {
  std::string call_id;
  OperStatus oper_status = OperStatus::Down;
};

// COP client toward the optical controller. Safe to use from concurrent
// intent executions; every request awaits its acknowledgment.
class CopClient {
 public:
  explicit CopClient(std::string address,
                     std::chrono::milliseconds timeout = std::chrono::milliseconds(5000));

  CopAck push_call(const CopCall& call) const;
  void delete_call(const std::string& call_id) const;

 private:
  std::string address_;
  std::chrono::milliseconds timeout_;
};

// Tunnel-configuration client toward one switch agent.
class TunnelAgentClient {
 public:
  explicit TunnelAgentClient(std::string address,
                             std::chrono::milliseconds timeout = std::chrono::milliseconds(5000));

  void push_tunnel(const TunnelConfig& config) const;
  void delete_tunnel(const std::string& name) const;

 private:
  std::string address_;
  std::chrono::milliseconds timeout_;
};

// Dispatches a plan's actions strictly in plan order, awaiting each
// acknowledgment before the next send. `trace` fires at message emission,
// before the request leaves.
class PlanExecutor {
 public:
  using TraceSink =
      std::function<void(const std::string& destination, trace::Protocol protocol,
                         const std::string& info)>;

  PlanExecutor(CopClient cop, std::map<topology::NodeId, TunnelAgentClient> agents,
               TraceSink trace);

  void execute(const compiler::ActionPlan& plan);

  // Reverse-plan-order teardown: the COP call is removed first, then the
  // tunnels.
  void teardown(const compiler::ActionPlan& plan);

 private:
  const TunnelAgentClient& agent_for(const topology::NodeId& node) const;

  CopClient cop_;
  std::map<topology::NodeId, TunnelAgentClient> agents_;
  TraceSink trace_;
};

}  // namespace orch::sbi

#endif  // ORCH_SBI_CLIENT_HPP
