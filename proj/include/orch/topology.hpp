#ifndef ORCH_TOPOLOGY_HPP
#define ORCH_TOPOLOGY_HPP

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "orch/error.hpp"

namespace orch::topology {

using NodeId = std::string;

// A port is addressed by its owning node plus a device-local name
// (e.g. "1-7-C1"). Port names are opaque strings.
struct PortId {
  NodeId node;
  std::string name;

  auto operator<=>(const PortId&) const = default;
};

std::string to_string(const PortId& id);

enum class NodeKind { PacketSwitch, Roadm };
enum class PortRole { ClientPort, NetworkPort, HostPort };
enum class LinkLayer { Packet, Fiber, CrossLayer };

const char* to_string(NodeKind kind);
const char* to_string(PortRole role);
const char* to_string(LinkLayer layer);

struct Node {
  NodeId id;
  NodeKind kind = NodeKind::PacketSwitch;
  std::string mgmt_address;

  bool operator==(const Node&) const = default;
};

struct Port {
  PortId id;
  PortRole role = PortRole::NetworkPort;
  bool encryption_capable = false;  // only valid on ROADM ports

  bool operator==(const Port&) const = default;
};

// Links are bidirectional; `a`/`z` record the file orientation only.
struct Link {
  PortId a;
  PortId z;
  LinkLayer layer = LinkLayer::Packet;
  std::uint32_t hop_weight = 1;

  bool operator==(const Link&) const = default;
};

class TopologyError : public Error {
  using Error::Error;
};

class ParseError : public TopologyError {
 public:
  explicit ParseError(const std::string& what) : TopologyError("ParseError", what) {}
};

class ValidationError : public TopologyError {
 public:
  explicit ValidationError(const std::string& what)
      : TopologyError("ValidationError", what) {}
};

class UnknownNodeError : public TopologyError {
 public:
  explicit UnknownNodeError(const std::string& what)
      : TopologyError("UnknownNode", what) {}
};

class NotAttachedError : public TopologyError {
 public:
  explicit NotAttachedError(const std::string& what)
      : TopologyError("NotAttached", what) {}
};

class AmbiguousAttachmentError : public TopologyError {
 public:
  explicit AmbiguousAttachmentError(const std::string& what)
      : TopologyError("Ambiguous", what) {}
};

class NoPathError : public TopologyError {
 public:
  explicit NoPathError(const std::string& what) : TopologyError("NoPath", what) {}
};

// Two-layer network model: packet switches attached over cross-layer links
// to a ROADM ring. Immutable once loaded; safe to share across threads.
class MultilayerTopology {
 public:
  MultilayerTopology() = default;

  // Parses and validates a topology document (see data/testbed.topo for the
  // schema). Throws ParseError on malformed text, ValidationError on any
  // integrity violation.
  static MultilayerTopology load(const std::string& document);

  // Serializes back to a document accepted by load(); load(to_document())
  // reproduces an identical topology.
  std::string to_document() const;

  bool has_node(const NodeId& id) const;
  bool has_port(const PortId& id) const;
  const Node& node(const NodeId& id) const;  // throws UnknownNodeError
  const Port& port(const PortId& id) const;  // throws ValidationError

  std::vector<Node> nodes() const;  // sorted by id
  std::vector<Port> ports() const;  // sorted by id
  const std::vector<Link>& links() const { return links_; }

  std::vector<Port> ports_of(const NodeId& id) const;
  std::optional<NodeId> find_node_by_address(const std::string& mgmt_address) const;

  // The ROADM client port a packet switch hangs off. Requires exactly one
  // cross-layer attachment; throws NotAttachedError / AmbiguousAttachmentError.
  PortId roadm_client_port_of(const NodeId& packet_switch) const;

  // Minimum-hop-weight path between two ROADMs over fiber links. Ties are
  // broken by the lexicographically smallest node sequence, compared in
  // canonical orientation (from the smaller endpoint id), which makes the
  // result orientation-symmetric: reverse(optical_path(a, z)) ==
  // optical_path(z, a). Returns an empty path for a == z; throws
  // NoPathError when the fiber layer does not connect a and z.
  std::vector<Link> optical_path(const NodeId& a, const NodeId& z) const;

  bool operator==(const MultilayerTopology&) const = default;

 private:
  void add_node(Node node);
  void add_port(Port port);
  void add_link(Link link);

  std::map<NodeId, Node> nodes_;
  std::map<PortId, Port> ports_;
  std::vector<Link> links_;
};

// Node sequence visited by a path that starts at `from`.
std::vector<NodeId> path_nodes(const std::vector<Link>& path, const NodeId& from);

// The Fig.3-style lab topology shipped as data/testbed.topo: two packet
// switches attached to a three-node ROADM ring, AES capability on two of
// the three client ports.
const std::string& default_testbed_document();

}  // namespace orch::topology

#endif  // ORCH_TOPOLOGY_HPP
