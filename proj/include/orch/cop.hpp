#ifndef ORCH_COP_HPP
#define ORCH_COP_HPP

#include <string>
#include <string_view>

#include "json.hpp"
#include "orch/error.hpp"

namespace orch::sbi {

enum class OperStatus { Up, Down };

const char* to_string(OperStatus status);

struct CopEndpoint {
  std::string router_id;
  std::string interface_id;  // empty in all observed traffic
  std::string endpoint_id;   // router_id + "|" + port name

  bool operator==(const CopEndpoint&) const = default;
};

struct TransportLayer {
  std::string layer = "DWDM_LINK";
  std::string direction = "BIDIR";
  std::string layer_id = "layer";

  bool operator==(const TransportLayer&) const = default;
};

// A COP call: a point-to-point transport service request toward the optical
// controller. Encryption is a presence marker — it is either there (and then
// serialized as boolean true) or omitted entirely; a serialized false never
// appears on the wire.
struct CopCall {
  std::string call_id;
  CopEndpoint a_end;
  CopEndpoint z_end;
  OperStatus oper_status = OperStatus::Up;
  nlohmann::ordered_json connections = nlohmann::ordered_json::array();
  bool encryption_present = false;
  TransportLayer transport_layer;

  bool operator==(const CopCall&) const = default;
};

class MalformedBodyError : public Error {
 public:
  explicit MalformedBodyError(const std::string& what) : Error("MalformedBody", what) {}
};

// Serializes a call with the fixed member order
//   operStatus, callId, zEnd, connections, aEnd, [encryption,] transportLayer
// so that equal calls produce byte-identical bodies.
std::string encode_cop_call(const CopCall& call);

// Strict inverse of encode_cop_call: unknown members, missing members, type
// mismatches, a false-valued encryption member, and endpoint ids that do not
// extend their router id all raise MalformedBodyError.
CopCall decode_cop_call(std::string_view body);

// Wire path for a call resource, e.g. "/data/calls/call-acino1".
std::string cop_call_path(const std::string& call_id);

}  // namespace orch::sbi

#endif  // ORCH_COP_HPP
