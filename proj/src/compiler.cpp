#include "orch/compiler.hpp"

namespace orch::compiler {

namespace {

// Key material is provisioned out of band by the administrator; plans carry
// a reference only.
constexpr const char* kAdminKeyRef = "psk-admin";

}  // namespace

sbi::CopCall build_cop_call(const std::string& intent_id,
                            const topology::MultilayerTopology& topo,
                            const topology::PortId& a_port, const topology::PortId& z_port,
                            bool encrypted) {
  if (a_port == z_port) {
    throw PreconditionError("degenerate call: aEnd equals zEnd");
  }
  sbi::CopCall call;
  call.call_id = intent_id;
  call.oper_status = sbi::OperStatus::Up;  // requested status
  call.encryption_present = encrypted;
  for (auto [port_id, endpoint] :
       {std::pair{&a_port, &call.a_end}, std::pair{&z_port, &call.z_end}}) {
    const topology::Port& port = topo.port(*port_id);
    const topology::Node& node = topo.node(port_id->node);
    if (node.kind != topology::NodeKind::Roadm ||
        port.role != topology::PortRole::ClientPort) {
      throw PreconditionError("port " + topology::to_string(*port_id) +
                              " is not a ROADM client port");
    }
    endpoint->router_id = node.mgmt_address;
    endpoint->interface_id = "";
    endpoint->endpoint_id = node.mgmt_address + "|" + port_id->name;
  }
  return call;
}

sbi::TunnelConfig build_tunnel_config(const topology::MultilayerTopology& topo,
                                      const topology::NodeId& local,
                                      const topology::NodeId& remote,
                                      const std::string& intent_id) {
  for (const topology::NodeId* id : {&local, &remote}) {
    if (topo.node(*id).kind != topology::NodeKind::PacketSwitch) {
      throw PreconditionError("node '" + *id + "' is not a packet switch");
    }
  }
  if (local == remote) {
    throw PreconditionError("tunnel endpoints must differ");
  }
  sbi::TunnelConfig config;
  config.name = "gre-" + intent_id;
  config.local_node = local;
  config.remote_node = remote;
  config.local_addr = topo.node(local).mgmt_address;
  config.remote_addr = topo.node(remote).mgmt_address;
  config.mode = sbi::TunnelMode::EncryptedGre;
  config.key_ref = kAdminKeyRef;
  return config;
}

ActionPlan compile(const intent::Intent& intent, decision::EncryptionLayerChoice choice,
                   const topology::MultilayerTopology& topo) {
  topology::PortId a_port;
  topology::PortId z_port;
  try {
    a_port = topo.roadm_client_port_of(intent.src);
    z_port = topo.roadm_client_port_of(intent.dst);
  } catch (const topology::NotAttachedError& e) {
    throw UnattachedEndpointError(e.what());
  } catch (const topology::AmbiguousAttachmentError& e) {
    throw UnattachedEndpointError(e.what());
  }

  // Fail fast when the fiber layer cannot reach between the endpoints; the
  // path itself is the optical controller's job and is not embedded in the
  // call ("connections" stays empty).
  topo.optical_path(a_port.node, z_port.node);

  if (choice == decision::EncryptionLayerChoice::OpticalLayer) {
    for (const topology::PortId* port_id : {&a_port, &z_port}) {
      if (!topo.port(*port_id).encryption_capable) {
        throw NoEncryptionCapablePortsError("client port " + topology::to_string(*port_id) +
                                            " has no encryption-capable card");
      }
    }
  }

  ActionPlan plan;
  plan.intent_id = intent.id;
  plan.choice = choice;
  if (choice == decision::EncryptionLayerChoice::IpLayer) {
    plan.actions.push_back(
        ConfigureTunnel{intent.src, build_tunnel_config(topo, intent.src, intent.dst, intent.id)});
    plan.actions.push_back(
        ConfigureTunnel{intent.dst, build_tunnel_config(topo, intent.dst, intent.src, intent.id)});
  }
  const bool encrypted = choice == decision::EncryptionLayerChoice::OpticalLayer;
  plan.actions.push_back(
      CreateCopCall{build_cop_call(intent.id, topo, a_port, z_port, encrypted)});
  return plan;
}

}  // namespace orch::compiler
