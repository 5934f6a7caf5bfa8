// Copyright 2026 The secagg Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// JSON record files: curve parameters, OU keys, signing keys, deployments.
// Big integers are lowercase hex strings; points are "04" || X || Y hex.

#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "secagg/agg_sig.hpp"
#include "secagg/ec_group.hpp"
#include "secagg/error.hpp"
#include "secagg/ou_phe.hpp"
#include "secagg/protocol/message.hpp"

namespace secagg {

using Json = nlohmann::ordered_json;

inline Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::Config, "cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(Errc::Config, path.string() + ": " + e.what());
  }
}

inline void write_json_file(const std::filesystem::path& path, const Json& doc) {
  std::ofstream out(path);
  if (!out) throw Error(Errc::Config, "cannot write " + path.string());
  out << doc.dump(2) << '\n';
}

namespace detail {

inline const Json& field(const Json& doc, const char* name, const std::string& where) {
  if (!doc.is_object() || !doc.contains(name)) throw Error(Errc::Config, where + ": missing field '" + name + "'");
  return doc.at(name);
}

inline BigInt hex_field(const Json& doc, const char* name, const std::string& where) {
  const Json& v = field(doc, name, where);
  if (!v.is_string()) throw Error(Errc::Config, where + "." + name + ": expected a hex string");
  try {
    return from_hex(v.get<std::string>());
  } catch (const Error& e) {
    throw Error(Errc::Config, where + "." + name + ": " + e.what());
  }
}

}  // namespace detail

// --- curves ---------------------------------------------------------------

inline CurveRecord curve_record_from_json(const Json& doc) {
  const std::string where = "curve";
  CurveRecord rec;
  rec.name = doc.is_object() && doc.contains("name") ? doc.at("name").get<std::string>() : "unnamed";
  const Json& fr = detail::field(doc, "fr", where);
  if (!fr.is_string()) throw Error(Errc::Config, "curve.fr: expected a string");
  rec.fr = fr.get<std::string>();
  rec.q = detail::hex_field(doc, "q", where);
  rec.a = detail::hex_field(doc, "a", where);
  rec.b = detail::hex_field(doc, "b", where);
  rec.tx = detail::hex_field(doc, "Tx", where);
  rec.ty = detail::hex_field(doc, "Ty", where);
  rec.order = detail::hex_field(doc, "order", where);
  rec.cofactor = detail::hex_field(doc, "cofactor", where);
  return rec;
}

inline Json to_json(const CurveRecord& rec) {
  return Json{{"name", rec.name}, {"fr", rec.fr},          {"q", to_hex(rec.q)},
              {"a", to_hex(rec.a)}, {"b", to_hex(rec.b)},   {"Tx", to_hex(rec.tx)},
              {"Ty", to_hex(rec.ty)}, {"order", to_hex(rec.order)}, {"cofactor", to_hex(rec.cofactor)}};
}

inline CurveParams load_curve_file(const std::filesystem::path& path) {
  return load_curve(curve_record_from_json(read_json_file(path)));
}

inline std::string point_to_hex(const CurveParams& c, const Point& p) {
  std::vector<std::uint8_t> bytes;
  write_point(bytes, c, p);
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  for (std::uint8_t b : bytes) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0xf]);
  }
  return out;
}

inline Point point_from_hex(const CurveParams& c, std::string_view hex) {
  if (hex.size() % 2 != 0) throw Error(Errc::BadPointEncoding, "odd-length point hex");
  std::vector<std::uint8_t> bytes;
  for (std::size_t i = 0; i < hex.size(); i += 2) {
    BigInt byte = from_hex(hex.substr(i, 2));
    bytes.push_back(static_cast<std::uint8_t>(byte.get_ui()));
  }
  return read_point(bytes, c);
}

// --- Okamoto-Uchiyama keys --------------------------------------------------

inline Json to_json(const OuPublicKey& pk) {
  return Json{{"n", to_hex(pk.n())}, {"g", to_hex(pk.g())}, {"h", to_hex(pk.h())}};
}

inline OuPublicKey ou_public_from_json(const Json& doc) {
  try {
    return OuPublicKey::from_record(detail::hex_field(doc, "n", "ou_public"), detail::hex_field(doc, "g", "ou_public"),
                                    detail::hex_field(doc, "h", "ou_public"));
  } catch (const Error& e) {
    if (e.code() == Errc::Config) throw;
    throw Error(Errc::Config, std::string("ou_public: ") + e.what());
  }
}

inline Json to_json(const OuPrivateKey& sk) {
  return Json{{"p", to_hex(sk.p())}, {"q", to_hex(sk.q())}, {"g", to_hex(sk.g())}};
}

/// The private record (p, q, g) determines both halves of the key pair.
inline OuKeyPair ou_keypair_from_json(const Json& doc) {
  try {
    return OuKeyPair::from_factors(detail::hex_field(doc, "p", "ou_private"), detail::hex_field(doc, "q", "ou_private"),
                                   detail::hex_field(doc, "g", "ou_private"));
  } catch (const Error& e) {
    if (e.code() == Errc::Config) throw;
    throw Error(Errc::Config, std::string("ou_private: ") + e.what());
  }
}

// --- deployments ----------------------------------------------------------

struct DeploymentNode {
  NodeId id = 0;
  Role role = Role::Leaf;
  std::optional<NodeId> parent;
  std::optional<Point> verify_key;  // absent for the base station
};

struct DeploymentFile {
  std::string params;
  CurveRecord curve;
  BigInt max_reading;
  bool strict_mode = false;
  std::vector<DeploymentNode> nodes;
};

inline Role role_from_string(const std::string& s) {
  if (s == "leaf") return Role::Leaf;
  if (s == "aggregator") return Role::Aggregator;
  if (s == "base") return Role::Base;
  throw Error(Errc::Config, "deployment.nodes.role: unknown role '" + s + "'");
}

inline Json to_json(const DeploymentFile& file, const CurveParams& curve) {
  Json nodes = Json::array();
  for (const auto& node : file.nodes) {
    Json entry{{"id", node.id}, {"role", std::string(to_string(node.role))}};
    entry["parent"] = node.parent ? Json(*node.parent) : Json(nullptr);
    if (node.verify_key) entry["verify_key"] = point_to_hex(curve, *node.verify_key);
    nodes.push_back(std::move(entry));
  }
  return Json{{"params", file.params},
              {"curve", to_json(file.curve)},
              {"max_reading", file.max_reading.get_str()},
              {"strict", file.strict_mode},
              {"nodes", std::move(nodes)}};
}

inline DeploymentFile deployment_from_json(const Json& doc) {
  DeploymentFile file;
  const std::string where = "deployment";
  file.params = detail::field(doc, "params", where).get<std::string>();
  file.curve = curve_record_from_json(detail::field(doc, "curve", where));
  CurveParams curve = load_curve(file.curve);
  const Json& max_reading = detail::field(doc, "max_reading", where);
  if (!max_reading.is_string()) throw Error(Errc::Config, "deployment.max_reading: expected a decimal string");
  try {
    file.max_reading = BigInt(max_reading.get<std::string>(), 10);
  } catch (const std::invalid_argument&) {
    throw Error(Errc::Config, "deployment.max_reading: not a decimal integer");
  }
  file.strict_mode = detail::field(doc, "strict", where).get<bool>();
  const Json& nodes = detail::field(doc, "nodes", where);
  if (!nodes.is_array()) throw Error(Errc::Config, "deployment.nodes: expected an array");
  for (const Json& entry : nodes) {
    DeploymentNode node;
    node.id = detail::field(entry, "id", "deployment.nodes").get<NodeId>();
    node.role = role_from_string(detail::field(entry, "role", "deployment.nodes").get<std::string>());
    const Json& parent = detail::field(entry, "parent", "deployment.nodes");
    if (!parent.is_null()) node.parent = parent.get<NodeId>();
    if (entry.contains("verify_key")) {
      try {
        node.verify_key = point_from_hex(curve, entry.at("verify_key").get<std::string>());
      } catch (const Error& e) {
        throw Error(Errc::Config, "deployment.nodes[" + std::to_string(node.id) + "].verify_key: " + e.what());
      }
    } else if (node.role != Role::Base) {
      throw Error(Errc::Config, "deployment.nodes[" + std::to_string(node.id) + "]: missing verify_key");
    }
    file.nodes.push_back(std::move(node));
  }
  return file;
}

// --- signing keys -----------------------------------------------------------

inline Json signing_keys_to_json(const std::map<NodeId, SigningKey>& keys) {
  Json nodes = Json::array();
  for (const auto& [id, key] : keys) nodes.push_back(Json{{"id", id}, {"z", to_hex(key.z)}});
  return Json{{"nodes", std::move(nodes)}};
}

inline std::map<NodeId, SigningKey> signing_keys_from_json(const Json& doc) {
  std::map<NodeId, SigningKey> out;
  const Json& nodes = detail::field(doc, "nodes", "signing_keys");
  for (const Json& entry : nodes) {
    NodeId id = detail::field(entry, "id", "signing_keys.nodes").get<NodeId>();
    out[id] = SigningKey{detail::hex_field(entry, "z", "signing_keys.nodes")};
  }
  return out;
}

}  // namespace secagg
