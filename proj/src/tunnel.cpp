#include "orch/tunnel.hpp"

#include <set>

namespace orch::sbi {

namespace {

using nlohmann::ordered_json;

constexpr const char* kEncryptedGre = "encrypted-gre";

}  // namespace

const char* to_string(TunnelMode mode) {
  switch (mode) {
    case TunnelMode::EncryptedGre: return kEncryptedGre;
  }
  return "?";
}

std::string encode_tunnel_config(const TunnelConfig& config) {
  ordered_json body;
  body["name"] = config.name;
  body["localAddr"] = config.local_addr;
  body["remoteAddr"] = config.remote_addr;
  body["mode"] = to_string(config.mode);
  body["keyRef"] = config.key_ref;
  return body.dump();
}

TunnelConfig decode_tunnel_config(std::string_view body) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(body);
  } catch (const nlohmann::json::exception& e) {
    throw MalformedBodyError(e.what());
  }
  if (!doc.is_object()) throw MalformedBodyError("tunnel: expected an object");
  const std::set<std::string> members = {"name", "localAddr", "remoteAddr", "mode", "keyRef"};
  for (const auto& item : doc.items()) {
    if (!members.contains(item.key())) {
      throw MalformedBodyError("tunnel: unknown member '" + item.key() + "'");
    }
  }
  TunnelConfig config;
  for (const auto& key : members) {
    if (!doc.contains(key) || !doc.at(key).is_string()) {
      throw MalformedBodyError("tunnel: member '" + key + "' must be a string");
    }
  }
  config.name = doc.at("name").get<std::string>();
  config.local_addr = doc.at("localAddr").get<std::string>();
  config.remote_addr = doc.at("remoteAddr").get<std::string>();
  config.key_ref = doc.at("keyRef").get<std::string>();
  if (doc.at("mode").get<std::string>() != kEncryptedGre) {
    throw MalformedBodyError("tunnel: unsupported mode '" +
                             doc.at("mode").get<std::string>() + "'");
  }
  config.mode = TunnelMode::EncryptedGre;
  return config;
}

std::string tunnel_path(const std::string& name) { return "/tunnels/" + name; }

}  // namespace orch::sbi
