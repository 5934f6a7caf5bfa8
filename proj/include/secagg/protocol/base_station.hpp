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

// Root of the tree: decrypts the aggregate and checks its signature.

#pragma once

#include <optional>
#include <vector>

#include "secagg/protocol/message.hpp"

namespace secagg {

struct EpochResult {
  BigInt sum;
  bool verified = false;
  std::vector<NodeId> contributors;
};

/// Key the signature is checked against: the carried Z in permissive mode,
/// the registry sum over declared contributors in strict mode. Returns
/// nullopt if the registry keys cancel out.
inline std::optional<VerifyKey> effective_key(const Deployment& dep, const AggMessage& msg) {
  if (!dep.strict_mode) return msg.Z;
  std::vector<VerifyKey> keys;
  keys.reserve(msg.contributors.size());
  for (NodeId id : msg.contributors) {
    auto it = dep.registry.find(id);
    if (it == dep.registry.end()) {
      throw Error(Errc::UnknownContributor, "node " + std::to_string(id) + " is not registered");
    }
    keys.push_back(it->second);
  }
  try {
    return combine_keys(dep.curve, keys);
  } catch (const Error& e) {
    if (e.code() == Errc::DegenerateKeySum) return std::nullopt;
    throw;
  }
}

inline EpochResult base_receive(const Deployment& dep, const OuPrivateKey& sk, const EpochNonce& nonce,
                                const AggMessage& msg) {
  if (msg.epoch_id != nonce.epoch_id) {
    throw Error(Errc::EpochMismatch, "aggregate for epoch " + std::to_string(msg.epoch_id) + " in epoch " +
                                         std::to_string(nonce.epoch_id));
  }
  EpochResult result;
  result.sum = ou_decrypt(sk, msg.ct);
  result.contributors = msg.contributors;
  auto key = effective_key(dep, msg);
  result.verified = key && msg.s.count == msg.contributors.size() &&
                    verify(dep.curve, mod(result.sum, dep.curve.order()), msg.s, *key, nonce.r_x);
  return result;
}

}  // namespace secagg
