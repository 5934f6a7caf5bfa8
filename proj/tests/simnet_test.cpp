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

#include "secagg/simnet.hpp"

#include "gtest/gtest.h"

namespace secagg {
namespace {

const std::filesystem::path kParams = SECAGG_PARAMS_DIR;

Scenario chain_scenario(Attack attack = Attack::None, bool strict = false) {
  Scenario s;
  s.nodes = 4;
  s.fanout = 1;
  s.readings = std::vector<std::uint64_t>{10, 20, 30};
  s.attack = attack;
  s.strict = strict;
  return s;
}

TEST(BuildTree, Examples) {
  Topology two = build_tree(2, 1);
  EXPECT_EQ(two.leaves(), std::vector<NodeId>{1});
  EXPECT_EQ(two.parent[1], NodeId(0));
  EXPECT_EQ(two.depth, 1u);

  Topology seven = build_tree(7, 2);
  EXPECT_EQ(seven.depth, 2u);
  EXPECT_EQ(seven.leaves(), (std::vector<NodeId>{3, 4, 5, 6}));
  EXPECT_EQ(seven.children[0], (std::vector<NodeId>{1, 2}));

  Topology big = build_tree(64, 4);
  EXPECT_EQ(big.depth, 3u);
  EXPECT_EQ(big.leaves().size(), 48u);
  for (std::size_t i = 1; i < 64; ++i) {
    ASSERT_TRUE(big.parent[i].has_value());
    ASSERT_LT(*big.parent[i], i);  // parents precede children, so no cycles
    ASSERT_EQ(big.level[i], big.level[*big.parent[i]] + 1);
  }
  std::vector<NodeId> order = big.upward_order();
  EXPECT_EQ(order.size(), 63u);
  for (std::size_t i = 1; i < order.size(); ++i) ASSERT_GE(big.level[order[i - 1]], big.level[order[i]]);

  Topology chain = build_tree(5, 1);
  EXPECT_EQ(chain.depth, 4u);
  EXPECT_EQ(chain.leaves(), std::vector<NodeId>{4});
}

TEST(BuildTree, Errors) {
  EXPECT_THROW(build_tree(1, 2), Error);
  EXPECT_THROW(build_tree(5, 0), Error);
  EXPECT_THROW(Topology::from_parents({std::nullopt, NodeId(2), NodeId(1)}), Error);  // cycle
  EXPECT_THROW(Topology::from_parents({std::nullopt, NodeId(1)}), Error);             // self loop
  EXPECT_THROW(Topology::from_parents({std::nullopt, NodeId(9)}), Error);
  EXPECT_THROW(Topology::from_parents({NodeId(1), NodeId(0)}), Error);
  EXPECT_THROW(Topology::from_parents({std::nullopt, std::nullopt}), Error);
}

TEST(RunEpoch, HonestChain) {
  for (ParamSet params : {ParamSet::Toy, ParamSet::Standard}) {
    Scenario s = chain_scenario();
    s.params = params;
    RunReport r = run_epoch(s, kParams);
    EXPECT_EQ(r.expected_sum, 60);
    ASSERT_TRUE(r.decrypted_sum);
    EXPECT_EQ(*r.decrypted_sum, 60);
    EXPECT_TRUE(r.verified);
    EXPECT_FALSE(r.error);
    EXPECT_EQ(r.detection, Detection::NotApplicable);
    EXPECT_TRUE(r.as_expected());
    EXPECT_EQ(r.links.size(), 4u);  // 3 -> 2 -> 1 -> gateway -> verifier
  }
}

TEST(RunEpoch, Attacks) {
  RunReport ct = run_epoch(chain_scenario(Attack::TamperCt), kParams);
  EXPECT_EQ(ct.detection, Detection::Detected);
  EXPECT_FALSE(ct.verified);
  EXPECT_EQ(*ct.decrypted_sum, 61);
  EXPECT_TRUE(ct.as_expected());

  RunReport sig = run_epoch(chain_scenario(Attack::TamperSig), kParams);
  EXPECT_EQ(sig.detection, Detection::Detected);
  EXPECT_TRUE(sig.as_expected());

  RunReport loose = run_epoch(chain_scenario(Attack::ForgeSubtree, false), kParams);
  EXPECT_EQ(loose.detection, Detection::Missed);
  EXPECT_EQ(loose.expected, Detection::Missed);
  EXPECT_TRUE(loose.verified);
  EXPECT_TRUE(loose.as_expected());

  RunReport strict = run_epoch(chain_scenario(Attack::ForgeSubtree, true), kParams);
  EXPECT_EQ(strict.detection, Detection::Detected);
  EXPECT_FALSE(strict.verified);
  EXPECT_TRUE(strict.as_expected());

  RunReport replay = run_epoch(chain_scenario(Attack::ReplayEpoch), kParams);
  EXPECT_EQ(replay.detection, Detection::Detected);
  ASSERT_TRUE(replay.error);
  EXPECT_NE(replay.error->find("epoch 0 in epoch 1"), std::string::npos) << *replay.error;
  EXPECT_FALSE(replay.decrypted_sum);
}

TEST(InjectAttack, Effects) {
  Scenario s = chain_scenario();
  secagg::Setup setup = make_setup(s, load_profile(ParamSet::Toy, kParams));
  const Deployment& dep = setup.deployment;
  Rng rng(3);
  EpochNonce nonce = epoch_setup(dep.curve, 1, rng);
  AggMessage msg = leaf_emit(setup.nodes[3], 30, nonce, dep, rng);
  AttackContext ctx{dep, nonce, rng};

  EXPECT_EQ(inject_attack(Attack::None, msg, ctx), msg);

  AggMessage ct = inject_attack(Attack::TamperCt, msg, ctx);
  EXPECT_EQ(ou_decrypt(setup.ou.sk, ct.ct), 31);
  EXPECT_EQ(ct.s, msg.s);

  AggMessage sig = inject_attack(Attack::TamperSig, msg, ctx);
  EXPECT_EQ(sig.s.s, mod(msg.s.s + 1, dep.curve.order()));
  EXPECT_FALSE(verify(dep.curve, 30, sig.s, msg.Z, nonce.r_x));

  AggMessage forged = inject_attack(Attack::ForgeSubtree, msg, ctx);
  EXPECT_EQ(forged.contributors, msg.contributors);
  EXPECT_NE(forged.Z, msg.Z);
  BigInt value = ou_decrypt(setup.ou.sk, forged.ct);
  EXPECT_TRUE(verify(dep.curve, value, forged.s, forged.Z, nonce.r_x));  // self-consistent forgery

  EXPECT_THROW(inject_attack(Attack::ReplayEpoch, msg, ctx), Error);
  AggMessage old = msg;
  old.epoch_id = 0;
  ctx.prior = &old;
  AggMessage replayed = inject_attack(Attack::ReplayEpoch, msg, ctx);
  EXPECT_EQ(replayed, old);
  EXPECT_THROW(base_receive(dep, setup.ou.sk, nonce, replayed), Error);
}

TEST(Measure, RootPackets) {
  Scenario two;
  two.nodes = 2;
  RunReport r2 = run_epoch(two, kParams);
  EXPECT_EQ(r2.root_packets_with_aggregation, 1u);
  EXPECT_EQ(r2.root_packets_without_aggregation, 1u);

  Scenario big;
  big.nodes = 64;
  big.fanout = 4;
  big.params = ParamSet::Standard;
  secagg::Setup setup = make_setup(big, load_profile(big.params, kParams));
  RunReport r = run_epoch(big, setup);
  EXPECT_TRUE(r.verified);
  EXPECT_TRUE(r.sum_correct());
  EXPECT_EQ(r.root_packets_with_aggregation, 1u);
  EXPECT_EQ(r.root_packets_without_aggregation, 48u);
  ASSERT_EQ(r.links.size(), 64u);

  // link sizes are the encoded sizes: fixed part plus two bytes per contributor
  std::vector<std::size_t> subtree(64, 1);
  for (NodeId id : setup.topology.upward_order()) subtree[*setup.topology.parent[id]] += subtree[id];
  AggMessage probe;
  std::size_t fixed = encoded_size(probe, setup.deployment);
  std::size_t total = 0;
  for (const auto& link : r.links) {
    std::size_t contributors = link.to ? subtree[link.from] : 63;
    EXPECT_EQ(link.bytes, fixed + 2 * contributors) << link.from;
    EXPECT_GT(link.bytes, 0u);
    total += link.bytes;
  }
  EXPECT_EQ(r.upward_bytes(), total);
}

TEST(RunEpoch, Determinism) {
  for (Attack a : {Attack::None, Attack::TamperCt, Attack::ForgeSubtree, Attack::ReplayEpoch}) {
    Scenario s;
    s.nodes = 13;
    s.fanout = 3;
    s.seed = 99;
    s.attack = a;
    EXPECT_EQ(serialize(run_epoch(s, kParams)), serialize(run_epoch(s, kParams))) << to_string(a);
  }
  Scenario s;
  s.nodes = 13;
  s.fanout = 3;
  Scenario t = s;
  t.seed = 2;
  EXPECT_NE(serialize(run_epoch(s, kParams)), serialize(run_epoch(t, kParams)));
}

TEST(RunEpoch, HonestMixedScenarios) {
  Rng rng(2024);
  for (int i = 0; i < 100; ++i) {
    Scenario s;
    s.params = i % 2 ? ParamSet::Standard : ParamSet::Toy;
    s.nodes = 2 + rng.next_u64() % 63;
    s.fanout = 1 + rng.next_u64() % 6;
    s.max_reading = 1 + rng.next_u64() % 100000;
    s.seed = rng.next_u64();
    RunReport r = run_epoch(s, kParams);
    ASSERT_TRUE(r.verified) << serialize(r);
    ASSERT_TRUE(r.sum_correct()) << serialize(r);
    ASSERT_EQ(r.root_packets_with_aggregation, 1u);
  }
}

TEST(RunEpoch, DetectionRates) {
  struct Case {
    Attack attack;
    bool strict;
  };
  for (Case c : {Case{Attack::TamperCt, false}, Case{Attack::TamperSig, false}, Case{Attack::ForgeSubtree, true},
                 Case{Attack::ReplayEpoch, false}}) {
    int detected = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
      Scenario s;
      s.nodes = 2 + seed % 40;
      s.fanout = 1 + seed % 4;
      s.attack = c.attack;
      s.strict = c.strict;
      s.seed = seed;
      if (run_epoch(s, kParams).detection == Detection::Detected) ++detected;
    }
    EXPECT_EQ(detected, 100) << to_string(c.attack);
  }
}

TEST(Scenario, JsonRoundTripAndErrors) {
  Scenario s = chain_scenario(Attack::TamperSig, true);
  s.seed = 5;
  Json doc = to_json(s);
  Scenario back = scenario_from_json(doc);
  EXPECT_EQ(to_json(back), doc);

  auto message = [](const Json& d) {
    try {
      scenario_from_json(d);
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::Config);
      return std::string(e.what());
    }
    return std::string("no error");
  };
  Json bad = doc;
  bad["attack"] = "ddos";
  EXPECT_NE(message(bad).find("scenario.attack"), std::string::npos);
  bad = doc;
  bad["nodes"] = 1;
  EXPECT_NE(message(bad).find("scenario.nodes"), std::string::npos);
  bad = doc;
  bad["readings"] = Json::array({1, 2});
  EXPECT_NE(message(bad).find("scenario.readings"), std::string::npos);
  bad = doc;
  bad["readings"] = Json::array({1, 2, 5000});
  EXPECT_NE(message(bad).find("scenario.readings"), std::string::npos);
  bad = doc;
  bad["fanout"] = -1;
  EXPECT_NE(message(bad).find("scenario.fanout"), std::string::npos);
  bad = doc;
  bad["params"] = "huge";
  EXPECT_NE(message(bad).find("scenario.params"), std::string::npos);
  bad = doc;
  bad["colour"] = "red";
  EXPECT_NE(message(bad).find("scenario.colour"), std::string::npos);
  bad = doc;
  bad["strict"] = "yes";
  EXPECT_NE(message(bad).find("scenario.strict"), std::string::npos);

  Json minimal = Json::object();
  Scenario defaults = scenario_from_json(minimal);
  EXPECT_EQ(defaults.params, ParamSet::Toy);
  EXPECT_FALSE(defaults.readings);
}

TEST(Report, StableFieldOrder) {
  RunReport r = run_epoch(chain_scenario(), kParams);
  Json doc = to_json(r);
  std::vector<std::string> keys;
  for (const auto& [k, _] : doc.items()) keys.push_back(k);
  EXPECT_EQ(keys, (std::vector<std::string>{"report_version", "scenario", "expected_sum", "decrypted_sum",
                                            "sum_correct", "verified", "detection", "expected_detection",
                                            "outcome_as_expected", "error", "attack_target", "nonce_attempts",
                                            "root_packets_with_aggregation", "root_packets_without_aggregation",
                                            "upward_bytes_total", "nonce_broadcast_counted", "links"}));
  EXPECT_TRUE(to_json(r, true).contains("wall_clock_ms"));
  EXPECT_EQ(doc["links"].back()["to"], "verifier");
  EXPECT_EQ(doc["decrypted_sum"], "60");
  EXPECT_NE(summary_table(r).find("as expected"), std::string::npos);
}

}  // namespace
}  // namespace secagg
