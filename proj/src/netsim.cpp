#include "orch/netsim.hpp"

#include <algorithm>

#include "httplib.h"
#include "json.hpp"

namespace orch::netsim {

namespace {

using nlohmann::ordered_json;

std::string error_body(const Error& e) {
  return ordered_json{{"error", e.code()}, {"message", e.what()}}.dump();
}

// Waits until the server accepts connections so callers can send
// immediately after start() returns.
void wait_ready(httplib::Server& server) {
  server.wait_until_ready();
}

}  // namespace

const char* to_string(CallStatus status) {
  switch (status) {
    case CallStatus::SettingUp: return "SettingUp";
    case CallStatus::Up: return "Up";
    case CallStatus::Failed: return "Failed";
  }
  return "?";
}

const char* to_string(TunnelStatus status) {
  switch (status) {
    case TunnelStatus::Pending: return "Pending";
    case TunnelStatus::Active: return "Active";
  }
  return "?";
}

const char* to_string(EndToEndReport::Layer layer) {
  switch (layer) {
    case EndToEndReport::Layer::Optical: return "Optical";
    case EndToEndReport::Layer::Ip: return "Ip";
    case EndToEndReport::Layer::None: return "None";
  }
  return "?";
}

// ── LightpathBoard ──────────────────────────────────────────────────────────

void LightpathBoard::subscribe(Listener listener) {
  std::lock_guard lock(mutex_);
  listeners_.push_back(std::move(listener));
}

void LightpathBoard::mark_up(const std::string& call_id, Clock::time_point up_at) {
  std::vector<Listener> listeners;
  {
    std::lock_guard lock(mutex_);
    up_[call_id] = up_at;
    listeners = listeners_;
  }
  for (const auto& listener : listeners) {
    listener(call_id, up_at);
  }
}

void LightpathBoard::mark_down(const std::string& call_id) {
  std::lock_guard lock(mutex_);
  up_.erase(call_id);
}

std::optional<Clock::time_point> LightpathBoard::up_since(const std::string& call_id) const {
  std::lock_guard lock(mutex_);
  auto it = up_.find(call_id);
  if (it == up_.end()) return std::nullopt;
  return it->second;
}

// ── SimOvc ──────────────────────────────────────────────────────────────────

SimOvc::SimOvc(std::shared_ptr<const topology::MultilayerTopology> topo,
               LightpathBoard& board, std::chrono::milliseconds per_hop_delay)
    : topo_(std::move(topo)), board_(board), per_hop_delay_(per_hop_delay) {
  timer_ = std::thread([this] { timer_loop(); });
}

SimOvc::~SimOvc() {
  stop();
}

void SimOvc::timer_loop() {
  std::unique_lock lock(mutex_);
  while (!stopping_) {
    if (pending_.empty()) {
      cv_.wait(lock, [this] { return stopping_ || !pending_.empty(); });
      continue;
    }
    auto next = std::min_element(pending_.begin(), pending_.end(),
                                 [](const Deadline& a, const Deadline& b) { return a.due < b.due; });
    const auto due = next->due;
    if (Clock::now() < due) {
      cv_.wait_until(lock, due);
      continue;  // re-evaluate: new earlier deadlines or stop may have arrived
    }
    const std::string call_id = next->call_id;
    pending_.erase(next);
    auto it = calls_.find(call_id);
    if (it == calls_.end()) continue;  // deleted while setting up
    const auto up_at = Clock::now();
    it->second.status = CallStatus::Up;
    it->second.up_at = up_at;
    lock.unlock();
    board_.mark_up(call_id, up_at);
    log_.record("OVC", "OVC", trace::Protocol::Internal,
                "lightpath call-" + call_id + " up");
    lock.lock();
  }
}

SimCallRecord SimOvc::handle_call(const sbi::CopCall& call, std::string raw_body) {
  // Resolve both endpoints against the optical layer.
  topology::PortId ports[2];
  const sbi::CopEndpoint* ends[2] = {&call.a_end, &call.z_end};
  for (int i = 0; i < 2; ++i) {
    auto node = topo_->find_node_by_address(ends[i]->router_id);
    if (!node || topo_->node(*node).kind != topology::NodeKind::Roadm) {
      throw RejectUnknownPortError("unknown ROADM '" + ends[i]->router_id + "'");
    }
    const std::string prefix = ends[i]->router_id + "|";
    if (ends[i]->endpoint_id.compare(0, prefix.size(), prefix) != 0) {
      throw RejectUnknownPortError("malformed endpointId '" + ends[i]->endpoint_id + "'");
    }
    const std::string name = ends[i]->endpoint_id.substr(prefix.size());
    topology::PortId pid{*node, name};
    if (!topo_->has_port(pid) ||
        topo_->port(pid).role != topology::PortRole::ClientPort) {
      throw RejectUnknownPortError("unknown client port '" + ends[i]->endpoint_id + "'");
    }
    ports[i] = pid;
  }
  if (call.encryption_present) {
    for (const auto& pid : ports) {
      if (!topo_->port(pid).encryption_capable) {
        throw RejectNoEncryptionCapablePortError("no encryption-capable port");
      }
    }
  }
  std::vector<topology::Link> path;
  try {
    path = topo_->optical_path(ports[0].node, ports[1].node);
  } catch (const topology::NoPathError& e) {
    throw RejectNoPathError(e.what());
  }

  SimCallRecord record;
  record.call = call;
  record.hops = path.size();
  record.accepted_at = Clock::now();
  record.raw_body = std::move(raw_body);

  std::chrono::milliseconds delay{0};
  {
    std::unique_lock lock(mutex_);
    if (calls_.contains(call.call_id)) {
      throw RejectDuplicateCallError("call '" + call.call_id + "' already exists");
    }
    delay = per_hop_delay_ * static_cast<long>(record.hops);
    if (delay.count() == 0) {
      record.status = CallStatus::Up;
      record.up_at = Clock::now();
    } else {
      record.status = CallStatus::SettingUp;
      pending_.push_back({record.accepted_at + delay, call.call_id});
    }
    calls_[call.call_id] = record;
    cv_.notify_all();
  }
  log_.record("Controller", "OVC", trace::Protocol::Cop,
              "POST " + sbi::cop_call_path(call.call_id));
  if (record.status == CallStatus::Up) {
    board_.mark_up(call.call_id, *record.up_at);
  }
  return record;
}

void SimOvc::delete_call(const std::string& call_id) {
  {
    std::unique_lock lock(mutex_);
    auto it = calls_.find(call_id);
    if (it == calls_.end()) throw UnknownCallError("unknown call '" + call_id + "'");
    calls_.erase(it);
    std::erase_if(pending_, [&](const Deadline& d) { return d.call_id == call_id; });
  }
  board_.mark_down(call_id);
  log_.record("Controller", "OVC", trace::Protocol::Cop,
              "DELETE " + sbi::cop_call_path(call_id));
}

std::optional<SimCallRecord> SimOvc::call(const std::string& call_id) const {
  std::lock_guard lock(mutex_);
  auto it = calls_.find(call_id);
  if (it == calls_.end()) return std::nullopt;
  return it->second;
}

std::vector<SimCallRecord> SimOvc::calls() const {
  std::lock_guard lock(mutex_);
  std::vector<SimCallRecord> out;
  out.reserve(calls_.size());
  for (const auto& [id, record] : calls_) out.push_back(record);
  return out;
}

std::vector<trace::TraceEvent> SimOvc::events() const { return log_.events(); }

void SimOvc::set_per_hop_delay(std::chrono::milliseconds delay) {
  std::lock_guard lock(mutex_);
  per_hop_delay_ = delay;
}

std::chrono::milliseconds SimOvc::per_hop_delay() const {
  std::lock_guard lock(mutex_);
  return per_hop_delay_;
}

void SimOvc::serve(httplib::Server& server) {
  server.Post("/data/calls/:resource", [this](const httplib::Request& req,
                                              httplib::Response& res) {
    const std::string resource = req.path_params.at("resource");
    if (resource.rfind("call-", 0) != 0) {
      res.status = 404;
      res.set_content(error_body(UnknownCallError("no such resource")), "application/json");
      return;
    }
    try {
      sbi::CopCall call = sbi::decode_cop_call(req.body);
      if ("call-" + call.call_id != resource) {
        throw sbi::MalformedBodyError("callId does not match resource path");
      }
      SimCallRecord record = handle_call(call, req.body);
      sbi::CopCall reply = record.call;
      reply.oper_status =
          record.status == CallStatus::Up ? sbi::OperStatus::Up : sbi::OperStatus::Down;
      res.status = 201;
      res.set_content(sbi::encode_cop_call(reply), "application/json");
    } catch (const sbi::MalformedBodyError& e) {
      res.status = 400;
      res.set_content(error_body(e), "application/json");
    } catch (const RejectUnknownPortError& e) {
      res.status = 400;
      res.set_content(error_body(e), "application/json");
    } catch (const RejectError& e) {
      res.status = 409;
      res.set_content(error_body(e), "application/json");
    }
  });
  server.Delete("/data/calls/:resource", [this](const httplib::Request& req,
                                                httplib::Response& res) {
    const std::string resource = req.path_params.at("resource");
    try {
      if (resource.rfind("call-", 0) != 0) throw UnknownCallError("no such resource");
      delete_call(resource.substr(5));
      res.status = 204;
    } catch (const UnknownCallError& e) {
      res.status = 404;
      res.set_content(error_body(e), "application/json");
    }
  });
  server.Get("/state", [this](const httplib::Request&, httplib::Response& res) {
    ordered_json state;
    state["perHopDelayMs"] = per_hop_delay().count();
    state["calls"] = ordered_json::array();
    for (const auto& record : calls()) {
      state["calls"].push_back({{"callId", record.call.call_id},
                                {"status", to_string(record.status)},
                                {"hops", record.hops},
                                {"encryption", record.call.encryption_present}});
    }
    res.set_content(state.dump(2) + "\n", "application/json");
  });
}

int SimOvc::start(const std::string& host, int port) {
  server_ = std::make_unique<httplib::Server>();
  serve(*server_);
  int bound = port;
  if (port == 0) {
    bound = server_->bind_to_any_port(host);
  } else if (!server_->bind_to_port(host, port)) {
    throw Error("BindFailed", "OVC: cannot bind " + host + ":" + std::to_string(port));
  }
  if (bound <= 0) throw Error("BindFailed", "OVC: cannot bind " + host);
  server_thread_ = std::thread([this] { server_->listen_after_bind(); });
  wait_ready(*server_);
  address_ = host + ":" + std::to_string(bound);
  return bound;
}

void SimOvc::stop() {
  {
    std::lock_guard lock(mutex_);
    stopping_ = true;
    cv_.notify_all();
  }
  if (timer_.joinable()) timer_.join();
  if (server_) server_->stop();
  if (server_thread_.joinable()) server_thread_.join();
}

// ── SimSwitchAgent ──────────────────────────────────────────────────────────

std::string lightpath_id_for_tunnel(const std::string& tunnel_name) {
  if (tunnel_name.rfind("gre-", 0) == 0) return tunnel_name.substr(4);
  return tunnel_name;
}

SimSwitchAgent::SimSwitchAgent(topology::NodeId node, LightpathBoard& board,
                               bool host_interface)
    : node_(std::move(node)), board_(board), host_interface_(host_interface) {
  board_.subscribe([this](const std::string& call_id, Clock::time_point up_at) {
    on_lightpath_up(call_id, up_at);
  });
}

SimSwitchAgent::~SimSwitchAgent() { stop(); }

void SimSwitchAgent::on_lightpath_up(const std::string& call_id, Clock::time_point) {
  std::lock_guard lock(mutex_);
  for (auto& [name, record] : tunnels_) {
    if (record.lightpath_id == call_id && record.status == TunnelStatus::Pending) {
      record.status = TunnelStatus::Active;
      record.activated_at = Clock::now();
      log_.record(node_, node_, trace::Protocol::Internal, "tunnel " + name + " active");
    }
  }
}

SimTunnelRecord SimSwitchAgent::add_tunnel(const sbi::TunnelConfig& config) {
  SimTunnelRecord record;
  {
    std::lock_guard lock(mutex_);
    if (tunnels_.contains(config.name)) {
      throw DuplicateTunnelError("tunnel '" + config.name + "' already configured");
    }
    record.config = config;
    record.status = TunnelStatus::Pending;
    record.lightpath_id = lightpath_id_for_tunnel(config.name);
    record.configured_at = Clock::now();
    tunnels_[config.name] = record;
  }
  log_.record("Controller", node_, trace::Protocol::TunnelCfg,
              "POST " + sbi::tunnel_path(config.name));
  // The lightpath may already carry light (zero-delay setups, or a tunnel
  // configured late); activate immediately in that case.
  if (auto up_at = board_.up_since(record.lightpath_id)) {
    on_lightpath_up(record.lightpath_id, *up_at);
    std::lock_guard lock(mutex_);
    record = tunnels_.at(config.name);
  }
  return record;
}

void SimSwitchAgent::remove_tunnel(const std::string& name) {
  {
    std::lock_guard lock(mutex_);
    if (tunnels_.erase(name) == 0) {
      throw UnknownTunnelError("unknown tunnel '" + name + "'");
    }
  }
  log_.record("Controller", node_, trace::Protocol::TunnelCfg,
              "DELETE " + sbi::tunnel_path(name));
}

std::optional<SimTunnelRecord> SimSwitchAgent::tunnel(const std::string& name) const {
  std::lock_guard lock(mutex_);
  auto it = tunnels_.find(name);
  if (it == tunnels_.end()) return std::nullopt;
  return it->second;
}

std::vector<SimTunnelRecord> SimSwitchAgent::tunnels() const {
  std::lock_guard lock(mutex_);
  std::vector<SimTunnelRecord> out;
  out.reserve(tunnels_.size());
  for (const auto& [name, record] : tunnels_) out.push_back(record);
  return out;
}

std::vector<trace::TraceEvent> SimSwitchAgent::events() const { return log_.events(); }

void SimSwitchAgent::serve(httplib::Server& server) {
  server.Post("/tunnels/:name", [this](const httplib::Request& req, httplib::Response& res) {
    try {
      sbi::TunnelConfig config = sbi::decode_tunnel_config(req.body);
      if (config.name != req.path_params.at("name")) {
        throw sbi::MalformedBodyError("tunnel name does not match resource path");
      }
      add_tunnel(config);
      res.status = 201;
      res.set_content(ordered_json{{"name", config.name}, {"status", "Pending"}}.dump(),
                      "application/json");
    } catch (const sbi::MalformedBodyError& e) {
      res.status = 400;
      res.set_content(error_body(e), "application/json");
    } catch (const DuplicateTunnelError& e) {
      res.status = 409;
      res.set_content(error_body(e), "application/json");
    }
  });
  server.Delete("/tunnels/:name", [this](const httplib::Request& req, httplib::Response& res) {
    try {
      remove_tunnel(req.path_params.at("name"));
      res.status = 204;
    } catch (const UnknownTunnelError& e) {
      res.status = 404;
      res.set_content(error_body(e), "application/json");
    }
  });
  server.Get("/state", [this](const httplib::Request&, httplib::Response& res) {
    ordered_json state;
    state["node"] = node_;
    state["hostInterface"] = host_interface_;
    state["tunnels"] = ordered_json::array();
    for (const auto& record : tunnels()) {
      state["tunnels"].push_back({{"name", record.config.name},
                                  {"status", to_string(record.status)},
                                  {"lightpath", record.lightpath_id}});
    }
    res.set_content(state.dump(2) + "\n", "application/json");
  });
}

int SimSwitchAgent::start(const std::string& host, int port) {
  server_ = std::make_unique<httplib::Server>();
  serve(*server_);
  int bound = port;
  if (port == 0) {
    bound = server_->bind_to_any_port(host);
  } else if (!server_->bind_to_port(host, port)) {
    throw Error("BindFailed",
                "agent " + node_ + ": cannot bind " + host + ":" + std::to_string(port));
  }
  if (bound <= 0) throw Error("BindFailed", "agent " + node_ + ": cannot bind " + host);
  server_thread_ = std::thread([this] { server_->listen_after_bind(); });
  wait_ready(*server_);
  address_ = host + ":" + std::to_string(bound);
  return bound;
}

void SimSwitchAgent::stop() {
  if (server_) server_->stop();
  if (server_thread_.joinable()) server_thread_.join();
}

// ── SimPlane ────────────────────────────────────────────────────────────────

SimPlane::SimPlane(std::shared_ptr<const topology::MultilayerTopology> topo,
                   std::chrono::milliseconds per_hop_delay)
    : topo_(std::move(topo)) {
  ovc_ = std::make_unique<SimOvc>(topo_, board_, per_hop_delay);
  for (const auto& node : topo_->nodes()) {
    if (node.kind != topology::NodeKind::PacketSwitch) continue;
    bool host_interface = false;
    for (const auto& port : topo_->ports_of(node.id)) {
      if (port.role == topology::PortRole::HostPort) host_interface = true;
    }
    agents_.emplace(node.id,
                    std::make_unique<SimSwitchAgent>(node.id, board_, host_interface));
  }
}

void SimPlane::start(const std::string& host, int ovc_port, int agent_port_base) {
  ovc_->start(host, ovc_port);
  int next = agent_port_base;
  for (auto& [id, agent] : agents_) {
    agent->start(host, next);
    if (next != 0) ++next;
  }
}

void SimPlane::stop() {
  // The OVC goes first: once its timer is joined no more lightpath-up
  // notifications can reach the agents.
  ovc_->stop();
  for (auto& [id, agent] : agents_) agent->stop();
}

SimSwitchAgent& SimPlane::agent(const topology::NodeId& node) {
  auto it = agents_.find(node);
  if (it == agents_.end()) {
    throw topology::UnknownNodeError("no agent for node '" + node + "'");
  }
  return *it->second;
}

std::map<topology::NodeId, std::string> SimPlane::agent_addresses() const {
  std::map<topology::NodeId, std::string> out;
  for (const auto& [id, agent] : agents_) out[id] = agent->address();
  return out;
}

EndToEndReport SimPlane::end_to_end_check(const std::string& intent_id) const {
  const auto call = ovc_->call(intent_id);
  const std::string tunnel_name = "gre-" + intent_id;
  std::vector<SimTunnelRecord> tunnels;
  for (const auto& [id, agent] : agents_) {
    if (auto t = agent->tunnel(tunnel_name)) tunnels.push_back(*t);
  }
  if (!call && tunnels.empty()) {
    throw UnknownIntentError("no device state for intent '" + intent_id + "'");
  }

  EndToEndReport report;
  const bool lightpath_up = call && call->status == CallStatus::Up;
  if (!tunnels.empty()) {
    bool all_active = std::all_of(tunnels.begin(), tunnels.end(), [](const SimTunnelRecord& t) {
      return t.status == TunnelStatus::Active;
    });
    report.connectivity = lightpath_up && all_active;
    report.encrypted_at =
        report.connectivity ? EndToEndReport::Layer::Ip : EndToEndReport::Layer::None;
  } else {
    report.connectivity = lightpath_up;
    report.encrypted_at = report.connectivity && call->call.encryption_present
                              ? EndToEndReport::Layer::Optical
                              : EndToEndReport::Layer::None;
  }
  return report;
}

}  // namespace orch::netsim
