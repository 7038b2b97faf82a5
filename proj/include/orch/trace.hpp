#ifndef ORCH_TRACE_HPP
#define ORCH_TRACE_HPP

#include <chrono>
#include <mutex>
#include <string>
#include <vector>

namespace orch::trace {

enum class Protocol { Http, Cop, TunnelCfg, Internal };

const char* to_string(Protocol protocol);

// One row of a per-intent message trace. Offsets are measured from the
// intent's first event (the NBI POST), microsecond resolution; the first
// row renders as "REF".
struct TraceEvent {
  std::chrono::microseconds t_offset{0};
  std::string source;
  std::string destination;
  Protocol protocol = Protocol::Http;
  std::string info;

  bool operator==(const TraceEvent&) const = default;
};

// Append-only event log for one intent. The first record() pins the epoch;
// offsets are non-decreasing because records are stamped under the lock.
class TraceLog {
 public:
  using Clock = std::chrono::steady_clock;

  TraceEvent record(std::string source, std::string destination, Protocol protocol,
                    std::string info, Clock::time_point at = Clock::now());

  std::vector<TraceEvent> events() const;
  std::size_t size() const;
  Clock::time_point epoch() const;  // meaningful once non-empty

 private:
  mutable std::mutex mutex_;
  Clock::time_point epoch_{};
  std::vector<TraceEvent> events_;
};

// Tab-separated table with columns Time, Source, Destination, Protocol,
// Info; the first data row carries Time = "REF", later rows seconds with
// microsecond precision (e.g. "0.114814").
std::string export_table(const std::vector<TraceEvent>& events);

// Same rows as a JSON array of objects keyed time/source/destination/
// protocol/info.
std::string export_structured(const std::vector<TraceEvent>& events);

std::string format_offset(std::chrono::microseconds offset);

}  // namespace orch::trace

#endif  // ORCH_TRACE_HPP
