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

// Leaf and aggregator roles. Aggregators fold ciphertexts, signatures, and
// keys; nothing in this header can see a plaintext aggregate.

#pragma once

#include <algorithm>
#include <iterator>
#include <optional>
#include <span>
#include <vector>

#include "secagg/protocol/message.hpp"

namespace secagg {

namespace detail {

/// Signing-layer degenerates end the epoch; the caller retries with a
/// fresh nonce.
template <typename F>
auto abort_on_degenerate(F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    switch (e.code()) {
      case Errc::DegenerateSignature:
      case Errc::DegenerateAggregate:
      case Errc::DegenerateKeySum:
        throw Error(Errc::EpochAbort, e.what());
      default:
        throw;
    }
  }
}

}  // namespace detail

inline AggMessage leaf_emit(const NodeIdentity& node, const BigInt& reading, const EpochNonce& nonce,
                            const Deployment& dep, Rng& rng) {
  if (node.role == Role::Base) throw Error(Errc::RoleMismatch, "the base station does not emit readings");
  if (reading < 0 || reading > dep.max_reading) {
    throw Error(Errc::ReadingOutOfRange,
                "reading " + reading.get_str() + " outside [0, " + dep.max_reading.get_str() + "]");
  }
  AggMessage msg;
  msg.epoch_id = nonce.epoch_id;
  msg.contributors = {node.id};
  msg.s = detail::abort_on_degenerate([&] {
    return AggSignature{sign(dep.curve, node.signing, reading, nonce), 1};
  });
  msg.ct = ou_encrypt(dep.ou_pk, reading, rng);
  msg.Z = node.verify;
  return msg;
}

/// Pure relay fold of already-formed messages: product of ciphertexts, sum of
/// signatures, sum of keys, union of contributors.
inline AggMessage combine_messages(std::span<const AggMessage> parts, const EpochNonce& nonce,
                                   const Deployment& dep) {
  if (parts.empty()) throw Error(Errc::Parameter, "nothing to combine");
  std::vector<NodeId> ids;
  std::vector<OuCiphertext> cts;
  std::vector<AggSignature> sigs;
  std::vector<VerifyKey> keys;
  for (const auto& part : parts) {
    if (part.epoch_id != nonce.epoch_id) {
      throw Error(Errc::EpochMismatch, "message for epoch " + std::to_string(part.epoch_id) + " in epoch " +
                                           std::to_string(nonce.epoch_id));
    }
    ids.insert(ids.end(), part.contributors.begin(), part.contributors.end());
    cts.push_back(part.ct);
    sigs.push_back(part.s);
    keys.push_back(part.Z);
  }
  std::sort(ids.begin(), ids.end());
  if (auto dup = std::adjacent_find(ids.begin(), ids.end()); dup != ids.end()) {
    throw Error(Errc::DuplicateContributor, "node " + std::to_string(*dup) + " appears in more than one input");
  }
  BigInt bound = BigInt(static_cast<unsigned long>(ids.size())) * dep.max_reading;
  if (bound >= dep.ou_pk.capacity() || bound >= dep.curve.order()) {
    throw Error(Errc::CapacityExceeded, std::to_string(ids.size()) + " contributors could overflow the aggregate");
  }
  AggMessage out;
  out.epoch_id = nonce.epoch_id;
  out.contributors = std::move(ids);
  out.ct = ou_add_many(dep.ou_pk, cts);
  out.s = detail::abort_on_degenerate([&] { return combine_sigs(dep.curve, std::span<const AggSignature>(sigs)); });
  out.Z = detail::abort_on_degenerate([&] { return combine_keys(dep.curve, keys); });
  return out;
}

/// Parent step: its own reading (when it has one) joins the children's
/// aggregates.
inline AggMessage aggregate(const NodeIdentity& node, const std::optional<BigInt>& own_reading,
                            std::span<const AggMessage> children, const EpochNonce& nonce, const Deployment& dep,
                            Rng& rng) {
  if (node.role != Role::Aggregator) throw Error(Errc::RoleMismatch, "only aggregators combine child messages");
  if (children.empty()) throw Error(Errc::Parameter, "aggregate needs at least one child message");
  std::vector<AggMessage> parts(children.begin(), children.end());
  if (own_reading) parts.push_back(leaf_emit(node, *own_reading, nonce, dep, rng));
  return combine_messages(parts, nonce, dep);
}

}  // namespace secagg
