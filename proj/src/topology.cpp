#include "orch/topology.hpp"

#include <algorithm>
#include <queue>
#include <set>
#include <sstream>

#include "json.hpp"

namespace orch::topology {

namespace {

using nlohmann::ordered_json;

NodeKind parse_node_kind(const std::string& s) {
  if (s == "PacketSwitch") return NodeKind::PacketSwitch;
  if (s == "Roadm") return NodeKind::Roadm;
  throw ValidationError("unknown node kind '" + s + "'");
}

PortRole parse_port_role(const std::string& s) {
  if (s == "ClientPort") return PortRole::ClientPort;
  if (s == "NetworkPort") return PortRole::NetworkPort;
  if (s == "HostPort") return PortRole::HostPort;
  throw ValidationError("unknown port role '" + s + "'");
}

LinkLayer parse_link_layer(const std::string& s) {
  if (s == "Packet") return LinkLayer::Packet;
  if (s == "Fiber") return LinkLayer::Fiber;
  if (s == "CrossLayer") return LinkLayer::CrossLayer;
  throw ValidationError("unknown link layer '" + s + "'");
}

void require_keys(const ordered_json& obj, const std::set<std::string>& required,
                  const std::set<std::string>& optional, const char* what) {
  if (!obj.is_object()) {
    throw ValidationError(std::string(what) + ": expected an object");
  }
  for (const auto& item : obj.items()) {
    if (!required.contains(item.key()) && !optional.contains(item.key())) {
      throw ValidationError(std::string(what) + ": unknown field '" + item.key() + "'");
    }
  }
  for (const auto& key : required) {
    if (!obj.contains(key)) {
      throw ValidationError(std::string(what) + ": missing field '" + key + "'");
    }
  }
}

std::string get_string(const ordered_json& obj, const char* key, const char* what) {
  const auto& v = obj.at(key);
  if (!v.is_string()) {
    throw ValidationError(std::string(what) + ": field '" + key + "' must be a string");
  }
  return v.get<std::string>();
}

PortId parse_port_id(const ordered_json& obj, const char* what) {
  if (!obj.is_object()) throw ValidationError(std::string(what) + ": expected an object");
  require_keys(obj, {"node", "name"}, {}, what);
  return PortId{get_string(obj, "node", what), get_string(obj, "name", what)};
}

}  // namespace

std::string to_string(const PortId& id) { return id.node + "/" + id.name; }

const char* to_string(NodeKind kind) {
  switch (kind) {
    case NodeKind::PacketSwitch: return "PacketSwitch";
    case NodeKind::Roadm: return "Roadm";
  }
  return "?";
}

const char* to_string(PortRole role) {
  switch (role) {
    case PortRole::ClientPort: return "ClientPort";
    case PortRole::NetworkPort: return "NetworkPort";
    case PortRole::HostPort: return "HostPort";
  }
  return "?";
}

const char* to_string(LinkLayer layer) {
  switch (layer) {
    case LinkLayer::Packet: return "Packet";
    case LinkLayer::Fiber: return "Fiber";
    case LinkLayer::CrossLayer: return "CrossLayer";
  }
  return "?";
}

void MultilayerTopology::add_node(Node node) {
  if (node.id.empty()) throw ValidationError("node id must not be empty");
  if (node.mgmt_address.empty()) {
    throw ValidationError("node '" + node.id + "': mgmt_address must not be empty");
  }
  for (const auto& [id, existing] : nodes_) {
    if (existing.mgmt_address == node.mgmt_address) {
      throw ValidationError("duplicate mgmt_address '" + node.mgmt_address + "'");
    }
  }
  auto [it, inserted] = nodes_.emplace(node.id, std::move(node));
  if (!inserted) throw ValidationError("duplicate node id '" + it->first + "'");
}

void MultilayerTopology::add_port(Port port) {
  if (port.id.name.empty()) throw ValidationError("port name must not be empty");
  auto node_it = nodes_.find(port.id.node);
  if (node_it == nodes_.end()) {
    throw ValidationError("port " + to_string(port.id) + " references unknown node");
  }
  if (port.encryption_capable && node_it->second.kind != NodeKind::Roadm) {
    throw ValidationError("port " + to_string(port.id) +
                          ": encryption_capable is only valid on ROADM ports");
  }
  auto [it, inserted] = ports_.emplace(port.id, std::move(port));
  if (!inserted) throw ValidationError("duplicate port " + to_string(it->first));
}

void MultilayerTopology::add_link(Link link) {
  if (link.a == link.z) {
    throw ValidationError("link endpoints must differ: " + to_string(link.a));
  }
  if (link.hop_weight == 0) throw ValidationError("hop_weight must be positive");
  auto a_it = ports_.find(link.a);
  auto z_it = ports_.find(link.z);
  if (a_it == ports_.end() || z_it == ports_.end()) {
    throw ValidationError("link references unknown port " +
                          to_string(a_it == ports_.end() ? link.a : link.z));
  }
  const Node& a_node = nodes_.at(link.a.node);
  const Node& z_node = nodes_.at(link.z.node);
  switch (link.layer) {
    case LinkLayer::Fiber:
      if (a_node.kind != NodeKind::Roadm || z_node.kind != NodeKind::Roadm ||
          a_it->second.role != PortRole::NetworkPort ||
          z_it->second.role != PortRole::NetworkPort) {
        throw ValidationError("fiber link must connect two ROADM network ports: " +
                              to_string(link.a) + " - " + to_string(link.z));
      }
      break;
    case LinkLayer::CrossLayer: {
      const bool a_is_switch = a_node.kind == NodeKind::PacketSwitch;
      const Node& roadm = a_is_switch ? z_node : a_node;
      const Port& client = a_is_switch ? z_it->second : a_it->second;
      const Node& sw = a_is_switch ? a_node : z_node;
      if (sw.kind != NodeKind::PacketSwitch || roadm.kind != NodeKind::Roadm ||
          client.role != PortRole::ClientPort) {
        throw ValidationError(
            "cross-layer link must connect a packet switch port to a ROADM "
            "client port: " +
            to_string(link.a) + " - " + to_string(link.z));
      }
      break;
    }
    case LinkLayer::Packet:
      if (a_node.kind != NodeKind::PacketSwitch || z_node.kind != NodeKind::PacketSwitch) {
        throw ValidationError("packet link must connect two packet switches: " +
                              to_string(link.a) + " - " + to_string(link.z));
      }
      break;
  }
  links_.push_back(std::move(link));
}

MultilayerTopology MultilayerTopology::load(const std::string& document) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(document);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(e.what());
  }
  if (!doc.is_object()) throw ValidationError("topology document must be an object");
  require_keys(doc, {"nodes", "ports", "links"}, {}, "topology");
  if (!doc["nodes"].is_array() || !doc["ports"].is_array() || !doc["links"].is_array()) {
    throw ValidationError("'nodes', 'ports' and 'links' must be lists");
  }

  MultilayerTopology topo;
  for (const auto& n : doc["nodes"]) {
    require_keys(n, {"id", "kind", "mgmt_address"}, {}, "node");
    topo.add_node(Node{get_string(n, "id", "node"),
                       parse_node_kind(get_string(n, "kind", "node")),
                       get_string(n, "mgmt_address", "node")});
  }
  for (const auto& p : doc["ports"]) {
    require_keys(p, {"node", "name", "role"}, {"encryption_capable"}, "port");
    Port port;
    port.id = PortId{get_string(p, "node", "port"), get_string(p, "name", "port")};
    port.role = parse_port_role(get_string(p, "role", "port"));
    if (p.contains("encryption_capable")) {
      if (!p["encryption_capable"].is_boolean()) {
        throw ValidationError("port: 'encryption_capable' must be a boolean");
      }
      port.encryption_capable = p["encryption_capable"].get<bool>();
    }
    topo.add_port(std::move(port));
  }
  for (const auto& l : doc["links"]) {
    require_keys(l, {"a", "z", "layer"}, {"hop_weight"}, "link");
    Link link;
    link.a = parse_port_id(l["a"], "link");
    link.z = parse_port_id(l["z"], "link");
    link.layer = parse_link_layer(get_string(l, "layer", "link"));
    if (l.contains("hop_weight")) {
      if (!l["hop_weight"].is_number_unsigned() || l["hop_weight"].get<std::uint64_t>() == 0) {
        throw ValidationError("link: 'hop_weight' must be a positive integer");
      }
      link.hop_weight = l["hop_weight"].get<std::uint32_t>();
    }
    topo.add_link(std::move(link));
  }
  return topo;
}

std::string MultilayerTopology::to_document() const {
  ordered_json doc;
  doc["nodes"] = ordered_json::array();
  for (const auto& [id, n] : nodes_) {
    doc["nodes"].push_back({{"id", n.id},
                            {"kind", to_string(n.kind)},
                            {"mgmt_address", n.mgmt_address}});
  }
  doc["ports"] = ordered_json::array();
  for (const auto& [id, p] : ports_) {
    ordered_json jp = {{"node", p.id.node}, {"name", p.id.name}, {"role", to_string(p.role)}};
    if (p.encryption_capable) jp["encryption_capable"] = true;
    doc["ports"].push_back(std::move(jp));
  }
  doc["links"] = ordered_json::array();
  for (const auto& l : links_) {
    doc["links"].push_back({{"a", {{"node", l.a.node}, {"name", l.a.name}}},
                            {"z", {{"node", l.z.node}, {"name", l.z.name}}},
                            {"layer", to_string(l.layer)},
                            {"hop_weight", l.hop_weight}});
  }
  return doc.dump(2) + "\n";
}

bool MultilayerTopology::has_node(const NodeId& id) const { return nodes_.contains(id); }

bool MultilayerTopology::has_port(const PortId& id) const { return ports_.contains(id); }

const Node& MultilayerTopology::node(const NodeId& id) const {
  auto it = nodes_.find(id);
  if (it == nodes_.end()) throw UnknownNodeError("unknown node '" + id + "'");
  return it->second;
}

const Port& MultilayerTopology::port(const PortId& id) const {
  auto it = ports_.find(id);
  if (it == ports_.end()) throw ValidationError("unknown port " + to_string(id));
  return it->second;
}

std::vector<Node> MultilayerTopology::nodes() const {
  std::vector<Node> out;
  out.reserve(nodes_.size());
  for (const auto& [id, n] : nodes_) out.push_back(n);
  return out;
}

std::vector<Port> MultilayerTopology::ports() const {
  std::vector<Port> out;
  out.reserve(ports_.size());
  for (const auto& [id, p] : ports_) out.push_back(p);
  return out;
}

std::vector<Port> MultilayerTopology::ports_of(const NodeId& id) const {
  std::vector<Port> out;
  for (const auto& [pid, p] : ports_) {
    if (pid.node == id) out.push_back(p);
  }
  return out;
}

std::optional<NodeId> MultilayerTopology::find_node_by_address(
    const std::string& mgmt_address) const {
  for (const auto& [id, n] : nodes_) {
    if (n.mgmt_address == mgmt_address) return id;
  }
  return std::nullopt;
}

PortId MultilayerTopology::roadm_client_port_of(const NodeId& packet_switch) const {
  const Node& sw = node(packet_switch);
  if (sw.kind != NodeKind::PacketSwitch) {
    throw ValidationError("node '" + packet_switch + "' is not a packet switch");
  }
  std::vector<PortId> attachments;
  for (const auto& l : links_) {
    if (l.layer != LinkLayer::CrossLayer) continue;
    if (l.a.node == packet_switch) attachments.push_back(l.z);
    if (l.z.node == packet_switch) attachments.push_back(l.a);
  }
  if (attachments.empty()) {
    throw NotAttachedError("switch '" + packet_switch + "' has no cross-layer attachment");
  }
  if (attachments.size() > 1) {
    throw AmbiguousAttachmentError("switch '" + packet_switch +
                                   "' has multiple cross-layer attachments");
  }
  return attachments.front();
}

std::vector<Link> MultilayerTopology::optical_path(const NodeId& a, const NodeId& z) const {
  for (const NodeId* id : {&a, &z}) {
    if (node(*id).kind != NodeKind::Roadm) {
      throw ValidationError("node '" + *id + "' is not a ROADM");
    }
  }
  if (a == z) return {};

  // Canonical orientation: route from the smaller endpoint so equal-cost
  // tie-breaking picks the same geometric path for both query directions.
  const NodeId& s = std::min(a, z);
  const NodeId& t = std::max(a, z);

  struct Edge {
    NodeId to;
    std::uint64_t weight;
    std::size_t link_index;
  };
  std::map<NodeId, std::vector<Edge>> adjacency;
  for (std::size_t i = 0; i < links_.size(); ++i) {
    const Link& l = links_[i];
    if (l.layer != LinkLayer::Fiber) continue;
    adjacency[l.a.node].push_back({l.z.node, l.hop_weight, i});
    adjacency[l.z.node].push_back({l.a.node, l.hop_weight, i});
  }
  for (auto& [id, edges] : adjacency) {
    std::sort(edges.begin(), edges.end(), [](const Edge& lhs, const Edge& rhs) {
      return std::tie(lhs.weight, lhs.to, lhs.link_index) <
             std::tie(rhs.weight, rhs.to, rhs.link_index);
    });
  }

  struct Best {
    std::uint64_t dist = 0;
    std::vector<NodeId> seq;          // node sequence from s, inclusive
    std::vector<std::size_t> chain;   // link indices along seq
  };
  std::map<NodeId, Best> best;
  best[s] = Best{0, {s}, {}};

  using QueueItem = std::tuple<std::uint64_t, std::vector<NodeId>, NodeId>;
  std::priority_queue<QueueItem, std::vector<QueueItem>, std::greater<>> queue;
  queue.push({0, {s}, s});

  while (!queue.empty()) {
    auto [dist, seq, u] = queue.top();
    queue.pop();
    auto u_it = best.find(u);
    if (u_it == best.end() || dist != u_it->second.dist || seq != u_it->second.seq) {
      continue;  // stale entry
    }
    if (u == t) break;
    auto adj_it = adjacency.find(u);
    if (adj_it == adjacency.end()) continue;
    for (const Edge& e : adj_it->second) {
      const std::uint64_t cand_dist = dist + e.weight;
      std::vector<NodeId> cand_seq = seq;
      cand_seq.push_back(e.to);
      auto v_it = best.find(e.to);
      if (v_it == best.end() || cand_dist < v_it->second.dist ||
          (cand_dist == v_it->second.dist && cand_seq < v_it->second.seq)) {
        auto chain = u_it->second.chain;
        chain.push_back(e.link_index);
        best[e.to] = Best{cand_dist, cand_seq, std::move(chain)};
        queue.push({cand_dist, std::move(cand_seq), e.to});
      }
    }
  }

  auto t_it = best.find(t);
  if (t_it == best.end()) {
    throw NoPathError("no fiber path between '" + a + "' and '" + z + "'");
  }
  std::vector<Link> path;
  path.reserve(t_it->second.chain.size());
  for (std::size_t idx : t_it->second.chain) path.push_back(links_[idx]);
  if (a != s) std::reverse(path.begin(), path.end());
  return path;
}

std::vector<NodeId> path_nodes(const std::vector<Link>& path, const NodeId& from) {
  std::vector<NodeId> nodes{from};
  NodeId at = from;
  for (const Link& l : path) {
    at = (l.a.node == at) ? l.z.node : l.a.node;
    nodes.push_back(at);
  }
  return nodes;
}

const std::string& default_testbed_document() {
  static const std::string doc = R"({
  "nodes": [
    {"id": "OVS1", "kind": "PacketSwitch", "mgmt_address": "10.12.105.11"},
    {"id": "OVS2", "kind": "PacketSwitch", "mgmt_address": "10.12.105.12"},
    {"id": "ROADM1", "kind": "Roadm", "mgmt_address": "10.12.105.39"},
    {"id": "ROADM2", "kind": "Roadm", "mgmt_address": "10.12.105.38"},
    {"id": "ROADM3", "kind": "Roadm", "mgmt_address": "10.12.105.37"}
  ],
  "ports": [
    {"node": "OVS1", "name": "eth1", "role": "NetworkPort"},
    {"node": "OVS1", "name": "host0", "role": "HostPort"},
    {"node": "OVS2", "name": "eth1", "role": "NetworkPort"},
    {"node": "OVS2", "name": "host0", "role": "HostPort"},
    {"node": "ROADM1", "name": "1-7-C1", "role": "ClientPort", "encryption_capable": true},
    {"node": "ROADM1", "name": "1-4-N1", "role": "NetworkPort"},
    {"node": "ROADM1", "name": "1-4-N2", "role": "NetworkPort"},
    {"node": "ROADM2", "name": "1-7-C1", "role": "ClientPort", "encryption_capable": true},
    {"node": "ROADM2", "name": "1-4-N1", "role": "NetworkPort"},
    {"node": "ROADM2", "name": "1-4-N2", "role": "NetworkPort"},
    {"node": "ROADM3", "name": "1-7-C1", "role": "ClientPort"},
    {"node": "ROADM3", "name": "1-4-N1", "role": "NetworkPort"},
    {"node": "ROADM3", "name": "1-4-N2", "role": "NetworkPort"}
  ],
  "links": [
    {"a": {"node": "OVS1", "name": "eth1"}, "z": {"node": "ROADM1", "name": "1-7-C1"}, "layer": "CrossLayer"},
    {"a": {"node": "OVS2", "name": "eth1"}, "z": {"node": "ROADM2", "name": "1-7-C1"}, "layer": "CrossLayer"},
    {"a": {"node": "ROADM1", "name": "1-4-N1"}, "z": {"node": "ROADM2", "name": "1-4-N2"}, "layer": "Fiber"},
    {"a": {"node": "ROADM2", "name": "1-4-N1"}, "z": {"node": "ROADM3", "name": "1-4-N2"}, "layer": "Fiber"},
    {"a": {"node": "ROADM3", "name": "1-4-N1"}, "z": {"node": "ROADM1", "name": "1-4-N2"}, "layer": "Fiber"}
  ]
}
)";
  return doc;
}

}  // namespace orch::topology
