#ifndef ORCH_TUNNEL_HPP
#define ORCH_TUNNEL_HPP

#include <string>
#include <string_view>

#include "orch/cop.hpp"
#include "orch/topology.hpp"

namespace orch::sbi {

enum class TunnelMode { EncryptedGre };

const char* to_string(TunnelMode mode);

// An encrypted point-to-point tunnel between two packet switches. The key is
// referenced, never carried: key material stays administrator-provisioned.
struct TunnelConfig {
  std::string name;  // unique per active tunnel set on a switch
  topology::NodeId local_node;
  topology::NodeId remote_node;
  std::string local_addr;
  std::string remote_addr;
  TunnelMode mode = TunnelMode::EncryptedGre;
  std::string key_ref;

  bool operator==(const TunnelConfig&) const = default;
};

// Wire members: name, localAddr, remoteAddr, mode, keyRef. Node ids are an
// orchestrator-side concept and never cross the wire, so decode leaves them
// empty.
std::string encode_tunnel_config(const TunnelConfig& config);
TunnelConfig decode_tunnel_config(std::string_view body);  // throws MalformedBodyError

// Wire path for a tunnel resource, e.g. "/tunnels/gre-acino1".
std::string tunnel_path(const std::string& name);

}  // namespace orch::sbi

#endif  // ORCH_TUNNEL_HPP
