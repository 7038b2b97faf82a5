#include "orch/cop.hpp"

#include <set>

namespace orch::sbi {

namespace {

using nlohmann::ordered_json;

void require_members(const ordered_json& obj, const std::set<std::string>& required,
                     const std::set<std::string>& optional, const char* what) {
  if (!obj.is_object()) {
    throw MalformedBodyError(std::string(what) + ": expected an object");
  }
  for (const auto& item : obj.items()) {
    if (!required.contains(item.key()) && !optional.contains(item.key())) {
      throw MalformedBodyError(std::string(what) + ": unknown member '" + item.key() + "'");
    }
  }
  for (const auto& key : required) {
    if (!obj.contains(key)) {
      throw MalformedBodyError(std::string(what) + ": missing member '" + key + "'");
    }
  }
}

std::string member_string(const ordered_json& obj, const char* key, const char* what) {
  const auto& v = obj.at(key);
  if (!v.is_string()) {
    throw MalformedBodyError(std::string(what) + ": member '" + key + "' must be a string");
  }
  return v.get<std::string>();
}

ordered_json encode_endpoint(const CopEndpoint& ep) {
  return {{"routerId", ep.router_id},
          {"interfaceId", ep.interface_id},
          {"endpointId", ep.endpoint_id}};
}

CopEndpoint decode_endpoint(const ordered_json& obj, const char* what) {
  require_members(obj, {"routerId", "interfaceId", "endpointId"}, {}, what);
  CopEndpoint ep;
  ep.router_id = member_string(obj, "routerId", what);
  ep.interface_id = member_string(obj, "interfaceId", what);
  ep.endpoint_id = member_string(obj, "endpointId", what);
  const std::string prefix = ep.router_id + "|";
  if (ep.endpoint_id.compare(0, prefix.size(), prefix) != 0) {
    throw MalformedBodyError(std::string(what) + ": endpointId '" + ep.endpoint_id +
                             "' must be routerId + \"|\" + port name");
  }
  return ep;
}

}  // namespace

const char* to_string(OperStatus status) {
  return status == OperStatus::Up ? "UP" : "DOWN";
}

std::string encode_cop_call(const CopCall& call) {
  ordered_json body;
  body["operStatus"] = to_string(call.oper_status);
  body["callId"] = call.call_id;
  body["zEnd"] = encode_endpoint(call.z_end);
  body["connections"] = call.connections;
  body["aEnd"] = encode_endpoint(call.a_end);
  if (call.encryption_present) {
    body["encryption"] = true;
  }
  body["transportLayer"] = {{"layer", call.transport_layer.layer},
                            {"direction", call.transport_layer.direction},
                            {"layerId", call.transport_layer.layer_id}};
  return body.dump();
}

CopCall decode_cop_call(std::string_view body) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(body);
  } catch (const nlohmann::json::exception& e) {
    throw MalformedBodyError(e.what());
  }
  require_members(doc, {"operStatus", "callId", "zEnd", "connections", "aEnd", "transportLayer"},
                  {"encryption"}, "call");

  CopCall call;
  const std::string status = member_string(doc, "operStatus", "call");
  if (status == "UP") {
    call.oper_status = OperStatus::Up;
  } else if (status == "DOWN") {
    call.oper_status = OperStatus::Down;
  } else {
    throw MalformedBodyError("call: operStatus must be \"UP\" or \"DOWN\"");
  }
  call.call_id = member_string(doc, "callId", "call");
  call.z_end = decode_endpoint(doc.at("zEnd"), "zEnd");
  call.a_end = decode_endpoint(doc.at("aEnd"), "aEnd");
  if (!doc.at("connections").is_array()) {
    throw MalformedBodyError("call: 'connections' must be a list");
  }
  call.connections = doc.at("connections");
  if (doc.contains("encryption")) {
    // YANG presence container: the member exists only to mean "encrypt";
    // anything but literal true is wire drift.
    if (!doc.at("encryption").is_boolean() || !doc.at("encryption").get<bool>()) {
      throw MalformedBodyError("call: 'encryption' must be absent or boolean true");
    }
    call.encryption_present = true;
  }
  const auto& tl = doc.at("transportLayer");
  require_members(tl, {"layer", "direction", "layerId"}, {}, "transportLayer");
  call.transport_layer.layer = member_string(tl, "layer", "transportLayer");
  call.transport_layer.direction = member_string(tl, "direction", "transportLayer");
  call.transport_layer.layer_id = member_string(tl, "layerId", "transportLayer");
  return call;
}

std::string cop_call_path(const std::string& call_id) {
  return "/data/calls/call-" + call_id;
}

}  // namespace orch::sbi
