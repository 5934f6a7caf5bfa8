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

// Three sensors in a chain reporting 10, 20, 30 through the protocol roles
// directly, without the simulator.

#include <iostream>
#include <vector>

#include "secagg/secagg.hpp"

int main() {
  using namespace secagg;
  Rng rng(2026);
  CurveParams curve = load_curve_file(default_params_dir() / "secp256r1.json");
  OuKeyPair ou = ou_keygen(512, rng);

  std::vector<NodeIdentity> sensors;
  std::map<NodeId, VerifyKey> registry;
  for (NodeId id = 1; id <= 3; ++id) {
    SigKeyPair kp = keygen(curve, rng);
    sensors.push_back({id, kp.signing, kp.verify, id == 3 ? Role::Leaf : Role::Aggregator});
    registry[id] = kp.verify;
  }
  Deployment dep = make_deployment(curve, ou.pk, registry, 1000, /*strict_mode=*/true);
  EpochNonce nonce = epoch_setup(curve, 1, rng);

  // 3 -> 2 -> 1 -> base
  AggMessage m3 = leaf_emit(sensors[2], 30, nonce, dep, rng);
  std::vector<AggMessage> from3{decode(encode(m3, dep), dep)};
  AggMessage m2 = aggregate(sensors[1], BigInt(20), from3, nonce, dep, rng);
  std::vector<AggMessage> from2{decode(encode(m2, dep), dep)};
  AggMessage m1 = aggregate(sensors[0], BigInt(10), from2, nonce, dep, rng);
  std::vector<std::uint8_t> frame = encode(m1, dep);

  EpochResult result = base_receive(dep, ou.sk, nonce, decode(frame, dep));
  std::cout << "sum " << result.sum << ", verified " << (result.verified ? "yes" : "no") << ", "
            << result.contributors.size() << " contributors, " << frame.size() << "-byte root frame\n";
  return result.verified && result.sum == 60 ? 0 : 1;
}
