#ifndef ORCH_NETSIM_HPP
#define ORCH_NETSIM_HPP

#include <chrono>
#include <condition_variable>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "orch/cop.hpp"
#include "orch/error.hpp"
#include "orch/topology.hpp"
#include "orch/trace.hpp"
#include "orch/tunnel.hpp"

namespace httplib {
class Server;
}

namespace orch::netsim {

using Clock = std::chrono::steady_clock;

enum class CallStatus { SettingUp, Up, Failed };
enum class TunnelStatus { Pending, Active };

const char* to_string(CallStatus status);
const char* to_string(TunnelStatus status);

class RejectError : public Error {
  using Error::Error;
};

class RejectUnknownPortError : public RejectError {
 public:
  explicit RejectUnknownPortError(const std::string& what)
      : RejectError("RejectUnknownPort", what) {}
};

class RejectNoEncryptionCapablePortError : public RejectError {
 public:
  explicit RejectNoEncryptionCapablePortError(const std::string& what)
      : RejectError("RejectNoEncryptionCapablePort", what) {}
};

class RejectNoPathError : public RejectError {
 public:
  explicit RejectNoPathError(const std::string& what) : RejectError("RejectNoPath", what) {}
};

class RejectDuplicateCallError : public RejectError {
 public:
  explicit RejectDuplicateCallError(const std::string& what)
      : RejectError("RejectDuplicateCall", what) {}
};

class UnknownCallError : public Error {
 public:
  explicit UnknownCallError(const std::string& what) : Error("UnknownCall", what) {}
};

class DuplicateTunnelError : public Error {
 public:
  explicit DuplicateTunnelError(const std::string& what)
      : Error("DuplicateTunnel", what) {}
};

class UnknownTunnelError : public Error {
 public:
  explicit UnknownTunnelError(const std::string& what) : Error("UnknownTunnel", what) {}
};

class UnknownIntentError : public Error {
 public:
  explicit UnknownIntentError(const std::string& what) : Error("UnknownIntent", what) {}
};

// Which lightpaths currently carry light. The OVC publishes; switch agents
// subscribe so tunnels can activate once their underlay is up. Listeners are
// invoked without the board lock held.
class LightpathBoard {
 public:
  using Listener = std::function<void(const std::string& call_id, Clock::time_point up_at)>;

  void subscribe(Listener listener);
  void mark_up(const std::string& call_id, Clock::time_point up_at);
  void mark_down(const std::string& call_id);
  std::optional<Clock::time_point> up_since(const std::string& call_id) const;

 private:
  mutable std::mutex mutex_;
  std::map<std::string, Clock::time_point> up_;
  std::vector<Listener> listeners_;
};

struct SimCallRecord {
  sbi::CopCall call;
  CallStatus status = CallStatus::SettingUp;
  std::size_t hops = 0;
  Clock::time_point accepted_at{};
  std::optional<Clock::time_point> up_at;
  std::string raw_body;  // exact bytes received on the wire
};

// Simulated optical controller: accepts COP calls against the ROADM layer,
// validates AES capability for encrypted calls, and brings each lightpath
// up after hops x per_hop_delay.
class SimOvc {
 public:
  SimOvc(std::shared_ptr<const topology::MultilayerTopology> topo, LightpathBoard& board,
         std::chrono::milliseconds per_hop_delay);
  ~SimOvc();

  SimOvc(const SimOvc&) = delete;
  SimOvc& operator=(const SimOvc&) = delete;

  // Core operation behind POST /data/calls/call-{id}; throws Reject* errors.
  SimCallRecord handle_call(const sbi::CopCall& call, std::string raw_body = {});
  void delete_call(const std::string& call_id);  // throws UnknownCallError

  std::optional<SimCallRecord> call(const std::string& call_id) const;
  std::vector<SimCallRecord> calls() const;
  std::vector<trace::TraceEvent> events() const;

  void set_per_hop_delay(std::chrono::milliseconds delay);  // applies to new calls
  std::chrono::milliseconds per_hop_delay() const;

  // Binds the COP endpoint (port 0 = ephemeral); returns the bound port.
  int start(const std::string& host, int port);
  void stop();
  const std::string& address() const { return address_; }

 private:
  void timer_loop();
  void serve(httplib::Server& server);

  std::shared_ptr<const topology::MultilayerTopology> topo_;
  LightpathBoard& board_;

  mutable std::mutex mutex_;
  std::condition_variable cv_;
  bool stopping_ = false;
  std::chrono::milliseconds per_hop_delay_;
  std::map<std::string, SimCallRecord> calls_;
  struct Deadline {
    Clock::time_point due;
    std::string call_id;
  };
  std::vector<Deadline> pending_;
  std::thread timer_;

  trace::TraceLog log_;
  std::unique_ptr<httplib::Server> server_;
  std::thread server_thread_;
  std::string address_;
};

struct SimTunnelRecord {
  sbi::TunnelConfig config;
  TunnelStatus status = TunnelStatus::Pending;
  std::string lightpath_id;  // call the tunnel rides on, from the tunnel name
  Clock::time_point configured_at{};
  std::optional<Clock::time_point> activated_at;
};

// The lightpath a tunnel depends on, derived from its name ("gre-acino1"
// rides on call "acino1"); names without the prefix map to themselves.
std::string lightpath_id_for_tunnel(const std::string& tunnel_name);

// Simulated switch agent: stores tunnel configs and activates a tunnel once
// the board reports its lightpath up.
class SimSwitchAgent {
 public:
  SimSwitchAgent(topology::NodeId node, LightpathBoard& board, bool host_interface);
  ~SimSwitchAgent();

  SimSwitchAgent(const SimSwitchAgent&) = delete;
  SimSwitchAgent& operator=(const SimSwitchAgent&) = delete;

  // Core operation behind POST /tunnels/{name}; throws DuplicateTunnelError.
  SimTunnelRecord add_tunnel(const sbi::TunnelConfig& config);
  void remove_tunnel(const std::string& name);  // throws UnknownTunnelError

  std::optional<SimTunnelRecord> tunnel(const std::string& name) const;
  std::vector<SimTunnelRecord> tunnels() const;
  std::vector<trace::TraceEvent> events() const;

  const topology::NodeId& node() const { return node_; }
  bool host_interface() const { return host_interface_; }

  int start(const std::string& host, int port);
  void stop();
  const std::string& address() const { return address_; }

 private:
  void on_lightpath_up(const std::string& call_id, Clock::time_point up_at);
  void serve(httplib::Server& server);

  topology::NodeId node_;
  LightpathBoard& board_;
  bool host_interface_;

  mutable std::mutex mutex_;
  std::map<std::string, SimTunnelRecord> tunnels_;

  trace::TraceLog log_;
  std::unique_ptr<httplib::Server> server_;
  std::thread server_thread_;
  std::string address_;
};

struct EndToEndReport {
  enum class Layer { Optical, Ip, None };

  bool connectivity = false;
  Layer encrypted_at = Layer::None;
};

const char* to_string(EndToEndReport::Layer layer);

// One simulated device plane for a topology: the OVC plus one agent per
// packet switch, wired through a shared lightpath board. Devices exchange
// nothing with the orchestrator except wire messages.
class SimPlane {
 public:
  SimPlane(std::shared_ptr<const topology::MultilayerTopology> topo,
           std::chrono::milliseconds per_hop_delay);

  // Binds every device on `host` (ports 0 = ephemeral).
  void start(const std::string& host = "127.0.0.1", int ovc_port = 0, int agent_port_base = 0);
  void stop();

  SimOvc& ovc() { return *ovc_; }
  const SimOvc& ovc() const { return *ovc_; }
  SimSwitchAgent& agent(const topology::NodeId& node);
  std::map<topology::NodeId, std::string> agent_addresses() const;

  // Verifies the full chain for one intent from device state alone: the
  // lightpath must be up, and any tunnels riding on it must be active.
  EndToEndReport end_to_end_check(const std::string& intent_id) const;

 private:
  std::shared_ptr<const topology::MultilayerTopology> topo_;
  LightpathBoard board_;
  std::unique_ptr<SimOvc> ovc_;
  std::map<topology::NodeId, std::unique_ptr<SimSwitchAgent>> agents_;
};

}  // namespace orch::netsim

#endif  // ORCH_NETSIM_HPP
