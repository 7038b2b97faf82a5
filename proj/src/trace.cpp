#include "orch/trace.hpp"

#include <cstdio>

#include "json.hpp"

namespace orch::trace {

const char* to_string(Protocol protocol) {
  switch (protocol) {
    case Protocol::Http: return "HTTP";
    case Protocol::Cop: return "COP";
    case Protocol::TunnelCfg: return "TUNNELCFG";
    case Protocol::Internal: return "INTERNAL";
  }
  return "?";
}

TraceEvent TraceLog::record(std::string source, std::string destination, Protocol protocol,
                            std::string info, Clock::time_point at) {
  std::lock_guard lock(mutex_);
  if (events_.empty()) {
    epoch_ = at;
  }
  TraceEvent event;
  event.t_offset = std::chrono::duration_cast<std::chrono::microseconds>(at - epoch_);
  if (event.t_offset.count() < 0) event.t_offset = std::chrono::microseconds{0};
  event.source = std::move(source);
  event.destination = std::move(destination);
  event.protocol = protocol;
  event.info = std::move(info);
  events_.push_back(event);
  return event;
}

std::vector<TraceEvent> TraceLog::events() const {
  std::lock_guard lock(mutex_);
  return events_;
}

std::size_t TraceLog::size() const {
  std::lock_guard lock(mutex_);
  return events_.size();
}

TraceLog::Clock::time_point TraceLog::epoch() const {
  std::lock_guard lock(mutex_);
  return epoch_;
}

std::string format_offset(std::chrono::microseconds offset) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%lld.%06lld",
                static_cast<long long>(offset.count() / 1000000),
                static_cast<long long>(offset.count() % 1000000));
  return buf;
}

std::string export_table(const std::vector<TraceEvent>& events) {
  std::string out = "Time\tSource\tDestination\tProtocol\tInfo\n";
  bool first = true;
  for (const TraceEvent& e : events) {
    out += first ? "REF" : format_offset(e.t_offset);
    out += '\t';
    out += e.source;
    out += '\t';
    out += e.destination;
    out += '\t';
    out += to_string(e.protocol);
    out += '\t';
    out += e.info;
    out += '\n';
    first = false;
  }
  return out;
}

std::string export_structured(const std::vector<TraceEvent>& events) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  bool first = true;
  for (const TraceEvent& e : events) {
    rows.push_back({{"time", first ? "REF" : format_offset(e.t_offset)},
                    {"source", e.source},
                    {"destination", e.destination},
                    {"protocol", to_string(e.protocol)},
                    {"info", e.info}});
    first = false;
  }
  return rows.dump(2) + "\n";
}

}  // namespace orch::trace
