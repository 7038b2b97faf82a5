#ifndef ORCH_COMPILER_HPP
#define ORCH_COMPILER_HPP

#include <string>
#include <variant>
#include <vector>

#include "orch/cop.hpp"
#include "orch/decision.hpp"
#include "orch/intent.hpp"
#include "orch/topology.hpp"
#include "orch/tunnel.hpp"

namespace orch::compiler {

struct ConfigureTunnel {
  topology::NodeId switch_id;
  sbi::TunnelConfig tunnel;

  bool operator==(const ConfigureTunnel&) const = default;
};

struct CreateCopCall {
  sbi::CopCall call;

  bool operator==(const CreateCopCall&) const = default;
};

using Action = std::variant<ConfigureTunnel, CreateCopCall>;

// Ordered southbound actions realizing one intent. IP-layer plans configure
// both switch tunnels before the COP call so the tunnels are in place when
// the lightpath comes up; optical and unencrypted plans are a single call.
struct ActionPlan {
  std::string intent_id;
  decision::EncryptionLayerChoice choice = decision::EncryptionLayerChoice::Unencrypted;
  std::vector<Action> actions;

  bool operator==(const ActionPlan&) const = default;
};

class CompileError : public Error {
  using Error::Error;
};

class PreconditionError : public CompileError {
 public:
  explicit PreconditionError(const std::string& what)
      : CompileError("PreconditionViolation", what) {}
};

class UnattachedEndpointError : public CompileError {
 public:
  explicit UnattachedEndpointError(const std::string& what)
      : CompileError("UnattachedEndpoint", what) {}
};

class NoEncryptionCapablePortsError : public CompileError {
 public:
  explicit NoEncryptionCapablePortsError(const std::string& what)
      : CompileError("NoEncryptionCapablePorts", what) {}
};

// Resolves the intent endpoints to their ROADM client ports and emits the
// action plan for the chosen layer. Checks that the optical layer can reach
// between the endpoints (the path itself is left to the optical controller)
// and, for optical encryption, that both client ports carry AES capability.
ActionPlan compile(const intent::Intent& intent, decision::EncryptionLayerChoice choice,
                   const topology::MultilayerTopology& topo);

// The COP call for a pair of ROADM client ports; aEnd is the source side.
// Requested operStatus is UP, connections start empty, and the encryption
// marker is present iff `encrypted`.
sbi::CopCall build_cop_call(const std::string& intent_id,
                            const topology::MultilayerTopology& topo,
                            const topology::PortId& a_port, const topology::PortId& z_port,
                            bool encrypted);

// Tunnel configuration for one switch of an IP-layer intent. The tunnel is
// named "gre-" + intent id on both sides; endpoint addresses come from the
// switches' management addresses.
sbi::TunnelConfig build_tunnel_config(const topology::MultilayerTopology& topo,
                                      const topology::NodeId& local,
                                      const topology::NodeId& remote,
                                      const std::string& intent_id);

}  // namespace orch::compiler

#endif  // ORCH_COMPILER_HPP
