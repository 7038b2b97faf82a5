#include "orch/intent.hpp"

namespace orch::intent {

const char* to_string(IntentStateKind state) {
  switch (state) {
    case IntentStateKind::Submitted: return "Submitted";
    case IntentStateKind::Compiling: return "Compiling";
    case IntentStateKind::Installing: return "Installing";
    case IntentStateKind::Installed: return "Installed";
    case IntentStateKind::Failed: return "Failed";
    case IntentStateKind::Withdrawn: return "Withdrawn";
  }
  return "?";
}

bool transition_allowed(IntentStateKind from, IntentStateKind to) {
  if (to == IntentStateKind::Failed) return true;
  switch (from) {
    case IntentStateKind::Submitted: return to == IntentStateKind::Compiling;
    case IntentStateKind::Compiling: return to == IntentStateKind::Installing;
    case IntentStateKind::Installing: return to == IntentStateKind::Installed;
    case IntentStateKind::Installed: return to == IntentStateKind::Withdrawn;
    case IntentStateKind::Failed:
    case IntentStateKind::Withdrawn: return false;
  }
  return false;
}

IntentStore::IntentStore(std::shared_ptr<const topology::MultilayerTopology> topo,
                         std::string id_prefix)
    : topo_(std::move(topo)), prefix_(std::move(id_prefix)) {}

Intent IntentStore::submit(const topology::NodeId& src, const topology::NodeId& dst,
                           const ConstraintSet& constraints) {
  for (const topology::NodeId* id : {&src, &dst}) {
    if (!topo_->has_node(*id)) {
      throw UnknownEndpointError("unknown endpoint '" + *id + "'");
    }
    if (topo_->node(*id).kind != topology::NodeKind::PacketSwitch) {
      throw UnknownEndpointError("endpoint '" + *id + "' is not a packet switch");
    }
  }
  if (src == dst) {
    throw InvalidConstraintsError("src and dst must differ");
  }

  std::unique_lock lock(mutex_);
  Intent in;
  in.id = prefix_ + std::to_string(next_id_++);
  in.src = src;
  in.dst = dst;
  in.constraints = constraints;
  in.state = IntentStateKind::Submitted;
  in.submitted_at = std::chrono::steady_clock::now();
  order_.push_back(in.id);
  entries_.emplace(in.id, Entry{in, {IntentStateKind::Submitted}});
  changed_.notify_all();
  return in;
}

Intent IntentStore::transition(const std::string& id, IntentStateKind to,
                               const std::string& failure_reason) {
  std::unique_lock lock(mutex_);
  auto it = entries_.find(id);
  if (it == entries_.end()) throw UnknownIntentError("unknown intent '" + id + "'");
  Intent& in = it->second.intent;
  if (!transition_allowed(in.state, to)) {
    throw IllegalTransitionError("intent '" + id + "': illegal transition " +
                                 std::string(to_string(in.state)) + " -> " + to_string(to));
  }
  in.state = to;
  if (to == IntentStateKind::Failed) {
    in.failure_reason = failure_reason;
  } else if (to == IntentStateKind::Installed) {
    in.installed_at = std::chrono::steady_clock::now();
  }
  it->second.history.push_back(to);
  changed_.notify_all();
  return in;
}

const IntentStore::Entry& IntentStore::entry(const std::string& id) const {
  auto it = entries_.find(id);
  if (it == entries_.end()) throw UnknownIntentError("unknown intent '" + id + "'");
  return it->second;
}

Intent IntentStore::get(const std::string& id) const {
  std::shared_lock lock(mutex_);
  return entry(id).intent;
}

std::vector<Intent> IntentStore::list() const {
  std::shared_lock lock(mutex_);
  std::vector<Intent> out;
  out.reserve(order_.size());
  for (const auto& id : order_) out.push_back(entries_.at(id).intent);
  return out;
}

std::vector<IntentStateKind> IntentStore::history(const std::string& id) const {
  std::shared_lock lock(mutex_);
  return entry(id).history;
}

std::optional<Intent> IntentStore::await(const std::string& id,
                                         const std::function<bool(const Intent&)>& pred,
                                         std::chrono::milliseconds timeout) const {
  std::shared_lock lock(mutex_);
  const Intent* in = &entry(id).intent;
  if (changed_.wait_for(lock, timeout, [&] { return pred(*in); })) {
    return *in;
  }
  return std::nullopt;
}

}  // namespace orch::intent
