#include "orch/decision.hpp"

namespace orch::decision {

const char* to_string(EncryptionLayerChoice choice) {
  switch (choice) {
    case EncryptionLayerChoice::Unencrypted: return "Unencrypted";
    case EncryptionLayerChoice::OpticalLayer: return "OpticalLayer";
    case EncryptionLayerChoice::IpLayer: return "IpLayer";
  }
  return "?";
}

EncryptionLayerChoice select_encryption_layer(const intent::ConstraintSet& constraints,
                                              const DecisionConfig& config) {
  if (!constraints.encrypted) {
    return EncryptionLayerChoice::Unencrypted;
  }
  if (constraints.latency_sensitive) {
    // Tunnel encryption adds per-packet delay; latency-sensitive traffic
    // goes to the physical layer.
    return EncryptionLayerChoice::OpticalLayer;
  }
  if (constraints.bandwidth_bps > config.ip_bandwidth_threshold_bps) {
    // Beyond what a software tunnel can carry; line-speed encryption needed.
    return EncryptionLayerChoice::OpticalLayer;
  }
  return EncryptionLayerChoice::IpLayer;
}

}  // namespace orch::decision
