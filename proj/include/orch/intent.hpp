#ifndef ORCH_INTENT_HPP
#define ORCH_INTENT_HPP

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "orch/error.hpp"
#include "orch/topology.hpp"

namespace orch::intent {

struct ConstraintSet {
  bool encrypted = false;
  bool latency_sensitive = false;
  std::uint64_t bandwidth_bps = 0;

  bool operator==(const ConstraintSet&) const = default;
};

enum class IntentStateKind { Submitted, Compiling, Installing, Installed, Failed, Withdrawn };

const char* to_string(IntentStateKind state);

// Legal lifecycle edges: Submitted→Compiling→Installing→Installed,
// Installed→Withdrawn, and any state→Failed.
bool transition_allowed(IntentStateKind from, IntentStateKind to);

struct Intent {
  std::string id;
  topology::NodeId src;
  topology::NodeId dst;
  ConstraintSet constraints;
  IntentStateKind state = IntentStateKind::Submitted;
  std::string failure_reason;  // set iff state == Failed
  std::chrono::steady_clock::time_point submitted_at;
  std::optional<std::chrono::steady_clock::time_point> installed_at;
};

class IntentError : public Error {
  using Error::Error;
};

class UnknownEndpointError : public IntentError {
 public:
  explicit UnknownEndpointError(const std::string& what)
      : IntentError("UnknownEndpoint", what) {}
};

class InvalidConstraintsError : public IntentError {
 public:
  explicit InvalidConstraintsError(const std::string& what)
      : IntentError("InvalidConstraints", what) {}
};

class UnknownIntentError : public IntentError {
 public:
  explicit UnknownIntentError(const std::string& what)
      : IntentError("UnknownIntent", what) {}
};

class IllegalTransitionError : public IntentError {
 public:
  explicit IllegalTransitionError(const std::string& what)
      : IntentError("IllegalTransition", what) {}
};

// Concurrent intent store. Reads take a shared lock; writes are serialized,
// so per-intent state histories only ever walk legal edges. Ids are
// orchestrator-assigned: prefix + monotonic counter ("acino1", "acino2", ...).
class IntentStore {
 public:
  explicit IntentStore(std::shared_ptr<const topology::MultilayerTopology> topo,
                       std::string id_prefix = "acino");

  // Validates the endpoints against the topology (must be distinct packet
  // switches) and records a fresh intent in state Submitted.
  Intent submit(const topology::NodeId& src, const topology::NodeId& dst,
                const ConstraintSet& constraints);

  // Applies a state transition atomically; rejected transitions leave the
  // intent untouched. `failure_reason` is only meaningful for Failed.
  Intent transition(const std::string& id, IntentStateKind to,
                    const std::string& failure_reason = {});

  Intent get(const std::string& id) const;
  std::vector<Intent> list() const;  // submission order

  // States the intent has entered, starting with Submitted.
  std::vector<IntentStateKind> history(const std::string& id) const;

  // Blocks until pred(intent) holds or the timeout expires; returns the
  // final snapshot (nullopt on timeout). The predicate runs under the lock.
  std::optional<Intent> await(const std::string& id,
                              const std::function<bool(const Intent&)>& pred,
                              std::chrono::milliseconds timeout) const;

 private:
  struct Entry {
    Intent intent;
    std::vector<IntentStateKind> history;
  };

  const Entry& entry(const std::string& id) const;  // caller holds lock

  std::shared_ptr<const topology::MultilayerTopology> topo_;
  std::string prefix_;
  mutable std::shared_mutex mutex_;
  mutable std::condition_variable_any changed_;
  std::uint64_t next_id_ = 1;
  std::vector<std::string> order_;
  std::unordered_map<std::string, Entry> entries_;
};

}  // namespace orch::intent

#endif  // ORCH_INTENT_HPP
