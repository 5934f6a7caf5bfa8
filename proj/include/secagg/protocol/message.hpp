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

// The unit a node sends to its parent, the deployment context every role
// needs, and the canonical binary encoding of messages.
//
// Wire layout (all integers big-endian):
//
//   version      1 byte, always 1
//   epoch_id     8 bytes
//   count        2 bytes, number of contributor ids
//   ids          2 bytes each, strictly ascending
//   ct_len       2 bytes, always the byte length of n
//   ct           ct_len bytes
//   s            ceil(bits(order) / 8) bytes
//   Z            0x04 || X || Y, each coordinate ceil(bits(q) / 8) bytes

#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "secagg/agg_sig.hpp"
#include "secagg/ec_group.hpp"
#include "secagg/error.hpp"
#include "secagg/ou_phe.hpp"

namespace secagg {

using NodeId = std::uint16_t;

inline constexpr std::uint8_t kWireVersion = 1;

enum class Role { Leaf, Aggregator, Base };

constexpr std::string_view to_string(Role role) {
  switch (role) {
    case Role::Leaf: return "leaf";
    case Role::Aggregator: return "aggregator";
    case Role::Base: return "base";
  }
  return "unknown";
}

struct NodeIdentity {
  NodeId id = 0;
  SigningKey signing;
  VerifyKey verify;
  Role role = Role::Leaf;
};

struct AggMessage {
  std::uint8_t version = kWireVersion;
  std::uint64_t epoch_id = 0;
  std::vector<NodeId> contributors;  // ascending, unique
  OuCiphertext ct;
  AggSignature s;
  VerifyKey Z;

  friend bool operator==(const AggMessage&, const AggMessage&) = default;
};

/// Everything a node knows about the deployment: public parameters and the
/// registry of per-node verify keys. Never holds the OU private key.
struct Deployment {
  CurveParams curve;
  OuPublicKey ou_pk;
  std::map<NodeId, VerifyKey> registry;
  BigInt max_reading;
  bool strict_mode = false;

  /// Upper bound on any honest aggregate: every registered node at max.
  BigInt max_total() const { return BigInt(static_cast<unsigned long>(registry.size())) * max_reading; }

  void validate() const {
    if (max_reading < 0) throw Error(Errc::Parameter, "max_reading must be nonnegative");
    if (max_total() >= ou_pk.capacity()) {
      throw Error(Errc::CapacityExceeded, "node count * max_reading must stay below the OU capacity");
    }
    if (max_total() >= curve.order()) {
      throw Error(Errc::CapacityExceeded, "node count * max_reading must stay below the curve order");
    }
    for (const auto& [id, key] : registry) {
      if (key.Z.is_infinity() || !on_curve(curve, key.Z)) {
        throw Error(Errc::OffCurve, "registry key for node " + std::to_string(id) + " is not a valid point");
      }
    }
  }
};

inline Deployment make_deployment(CurveParams curve, OuPublicKey pk, std::map<NodeId, VerifyKey> registry,
                                  BigInt max_reading, bool strict_mode) {
  Deployment dep{std::move(curve), std::move(pk), std::move(registry), std::move(max_reading), strict_mode};
  dep.validate();
  return dep;
}

/// Point encoding used on the wire and in deployment files.
inline void write_point(std::vector<std::uint8_t>& out, const CurveParams& c, const Point& p) {
  if (p.is_infinity()) throw Error(Errc::Parameter, "cannot encode the point at infinity");
  out.push_back(0x04);
  write_fixed(out, p.x(), c.field_bytes());
  write_fixed(out, p.y(), c.field_bytes());
}

inline std::size_t encoded_size(const AggMessage& msg, const Deployment& dep) {
  return 1 + 8 + 2 + 2 * msg.contributors.size() + 2 + dep.ou_pk.ciphertext_bytes() + dep.curve.scalar_bytes() + 1 +
         2 * dep.curve.field_bytes();
}

inline std::vector<std::uint8_t> encode(const AggMessage& msg, const Deployment& dep) {
  if (msg.contributors.empty() || msg.contributors.size() > 0xffff) {
    throw Error(Errc::BadContributorList, "contributor list must hold 1..65535 ids");
  }
  if (!std::is_sorted(msg.contributors.begin(), msg.contributors.end()) ||
      std::adjacent_find(msg.contributors.begin(), msg.contributors.end()) != msg.contributors.end()) {
    throw Error(Errc::BadContributorList, "contributor ids must be strictly ascending");
  }
  if (msg.s.count != msg.contributors.size()) {
    throw Error(Errc::BadContributorList, "signature count does not match contributor count");
  }
  std::vector<std::uint8_t> out;
  out.reserve(encoded_size(msg, dep));
  out.push_back(msg.version);
  for (int shift = 56; shift >= 0; shift -= 8) out.push_back(static_cast<std::uint8_t>(msg.epoch_id >> shift));
  auto put16 = [&out](std::size_t v) {
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v));
  };
  put16(msg.contributors.size());
  for (NodeId id : msg.contributors) put16(id);
  std::size_t ct_len = dep.ou_pk.ciphertext_bytes();
  put16(ct_len);
  write_fixed(out, msg.ct.c, ct_len);
  write_fixed(out, msg.s.s, dep.curve.scalar_bytes());
  write_point(out, dep.curve, msg.Z.Z);
  return out;
}

namespace detail {

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::span<const std::uint8_t> take(std::size_t n, const char* field) {
    if (bytes_.size() - pos_ < n) throw Error(Errc::Truncated, std::string("buffer ends inside ") + field);
    auto out = bytes_.subspan(pos_, n);
    pos_ += n;
    return out;
  }

  std::uint64_t take_uint(std::size_t n, const char* field) {
    std::uint64_t v = 0;
    for (std::uint8_t b : take(n, field)) v = (v << 8) | b;
    return v;
  }

  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline Point read_point(std::span<const std::uint8_t> bytes, const CurveParams& c) {
  std::size_t w = c.field_bytes();
  if (bytes.size() != 1 + 2 * w) throw Error(Errc::BadPointEncoding, "point has the wrong length");
  if (bytes[0] != 0x04) throw Error(Errc::BadPointEncoding, "only uncompressed points (0x04) are accepted");
  Point p(read_fixed(bytes.subspan(1, w)), read_fixed(bytes.subspan(1 + w, w)));
  if (!on_curve(c, p)) throw Error(Errc::OffCurve, "encoded key is not on the curve");
  return p;
}

/// Strict inverse of encode: rejects anything encode could not have produced
/// for this deployment.
inline AggMessage decode(std::span<const std::uint8_t> bytes, const Deployment& dep) {
  detail::Reader in(bytes);
  AggMessage msg;
  msg.version = static_cast<std::uint8_t>(in.take_uint(1, "version"));
  if (msg.version != kWireVersion) {
    throw Error(Errc::UnsupportedVersion, "wire version " + std::to_string(msg.version));
  }
  msg.epoch_id = in.take_uint(8, "epoch_id");
  std::size_t count = in.take_uint(2, "count");
  if (count == 0) throw Error(Errc::BadContributorList, "empty contributor list");
  msg.contributors.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    auto id = static_cast<NodeId>(in.take_uint(2, "contributor ids"));
    if (!msg.contributors.empty() && id <= msg.contributors.back()) {
      throw Error(Errc::BadContributorList, "contributor ids are not strictly ascending");
    }
    msg.contributors.push_back(id);
  }
  std::size_t ct_len = in.take_uint(2, "ct_len");
  if (ct_len != dep.ou_pk.ciphertext_bytes()) {
    // Checked before reading so a corrupted length reports as such.
    throw Error(Errc::BadCiphertext, "ciphertext length " + std::to_string(ct_len) + " does not match modulus");
  }
  msg.ct.c = read_fixed(in.take(ct_len, "ciphertext"));
  if (!dep.ou_pk.well_formed(msg.ct)) throw Error(Errc::BadCiphertext, "ciphertext is not a unit mod n");
  msg.s.s = read_fixed(in.take(dep.curve.scalar_bytes(), "signature"));
  msg.s.count = count;
  if (msg.s.s < 1 || msg.s.s >= dep.curve.order()) {
    throw Error(Errc::BadSignatureScalar, "signature scalar outside [1, order)");
  }
  msg.Z.Z = read_point(in.take(1 + 2 * dep.curve.field_bytes(), "public key"), dep.curve);
  if (in.remaining() != 0) throw Error(Errc::TrailingBytes, std::to_string(in.remaining()) + " bytes after message");
  return msg;
}

}  // namespace secagg
