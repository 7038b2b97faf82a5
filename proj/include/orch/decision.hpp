#ifndef ORCH_DECISION_HPP
#define ORCH_DECISION_HPP

#include <cstdint>

#include "orch/intent.hpp"

namespace orch::decision {

enum class EncryptionLayerChoice { Unencrypted, OpticalLayer, IpLayer };

const char* to_string(EncryptionLayerChoice choice);

struct DecisionConfig {
  // Above this rate a software tunnel cannot carry the demand and the
  // physical layer takes over. Must be positive; never hard-code call sites
  // to a literal — the value is deployment configuration.
  std::uint64_t ip_bandwidth_threshold_bps = 1'000'000'000;
};

// Encryption-layer selection, evaluated in fixed order: the encryption flag
// gates everything, latency-sensitive traffic goes to the optical layer, and
// otherwise the bandwidth decides. The threshold comparison is strict: a
// demand exactly at the threshold is still satisfiable by an IP tunnel.
EncryptionLayerChoice select_encryption_layer(const intent::ConstraintSet& constraints,
                                              const DecisionConfig& config);

}  // namespace orch::decision

#endif  // ORCH_DECISION_HPP
