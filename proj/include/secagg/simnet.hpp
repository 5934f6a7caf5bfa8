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

// Deterministic aggregation-tree simulator.
//
// One epoch runs in logical time, leaves first, level by level. Every
// message is really encoded and decoded on each link, so byte counts are
// the actual wire sizes. The epoch nonce broadcast from the base station is
// treated as free trusted setup and never counted as upward traffic.
//
// Node 0 is the base station. Its gateway folds the messages of its
// children (no reading, no key of its own) and forwards exactly one message
// over the root link to the verifier.

#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "secagg/agg_sig.hpp"
#include "secagg/ec_group.hpp"
#include "secagg/error.hpp"
#include "secagg/numeric.hpp"
#include "secagg/ou_phe.hpp"
#include "secagg/protocol.hpp"
#include "secagg/records.hpp"

namespace secagg {

// --- parameter sets -----------------------------------------------------------

enum class ParamSet { Toy, Standard };

constexpr std::string_view to_string(ParamSet p) { return p == ParamSet::Toy ? "toy" : "standard"; }

inline ParamSet param_set_from_string(std::string_view s) {
  if (s == "toy") return ParamSet::Toy;
  if (s == "standard") return ParamSet::Standard;
  throw Error(Errc::Config, "scenario.params: expected 'toy' or 'standard', got '" + std::string(s) + "'");
}

struct ParamProfile {
  std::string name;
  CurveParams curve;
  std::size_t ou_bits;
};

inline std::filesystem::path default_params_dir() {
  if (const char* env = std::getenv("SECAGG_PARAMS_DIR")) return env;
#ifdef SECAGG_PARAMS_DIR
  return SECAGG_PARAMS_DIR;
#else
  return "params";
#endif
}

/// toy: 25-bit prime-order curve + 32-bit OU primes (fast, for simulation).
/// standard: secp256r1 + 512-bit OU primes (n = p^2 q is 1536 bits).
inline ParamProfile load_profile(ParamSet set, const std::filesystem::path& dir = default_params_dir()) {
  if (set == ParamSet::Toy) return {"toy", load_curve_file(dir / "small24.json"), 32};
  return {"standard", load_curve_file(dir / "secp256r1.json"), 512};
}

// --- topology -------------------------------------------------------------

struct Topology {
  std::vector<std::optional<NodeId>> parent;  // nullopt only for node 0
  std::vector<std::vector<NodeId>> children;
  std::vector<std::size_t> level;
  std::size_t fanout = 0;
  std::size_t depth = 0;

  std::size_t size() const { return parent.size(); }
  bool is_leaf(NodeId id) const { return id != 0 && children[id].empty(); }

  std::vector<NodeId> leaves() const {
    std::vector<NodeId> out;
    for (std::size_t i = 1; i < size(); ++i) {
      if (is_leaf(static_cast<NodeId>(i))) out.push_back(static_cast<NodeId>(i));
    }
    return out;
  }

  /// Non-base nodes, deepest level first, ascending id within a level.
  std::vector<NodeId> upward_order() const {
    std::vector<NodeId> out;
    for (std::size_t i = 1; i < size(); ++i) out.push_back(static_cast<NodeId>(i));
    std::stable_sort(out.begin(), out.end(), [this](NodeId a, NodeId b) { return level[a] > level[b]; });
    return out;
  }

  /// Validates a parent table: node 0 is the only root, every other node
  /// reaches it, no cycles.
  static Topology from_parents(std::vector<std::optional<NodeId>> parents) {
    if (parents.size() < 2) throw Error(Errc::Parameter, "a topology needs the base station and one node");
    if (parents.size() > 0x10000) throw Error(Errc::Parameter, "node ids are 16 bits");
    if (parents[0]) throw Error(Errc::Parameter, "node 0 is the base station and has no parent");
    Topology t;
    t.parent = std::move(parents);
    t.children.resize(t.size());
    t.level.assign(t.size(), 0);
    for (std::size_t i = 1; i < t.size(); ++i) {
      if (!t.parent[i]) throw Error(Errc::Parameter, "node " + std::to_string(i) + " has no parent");
      if (*t.parent[i] >= t.size() || *t.parent[i] == i) {
        throw Error(Errc::Parameter, "node " + std::to_string(i) + " has an invalid parent");
      }
      t.children[*t.parent[i]].push_back(static_cast<NodeId>(i));
    }
    for (std::size_t i = 1; i < t.size(); ++i) {
      std::size_t hops = 0;
      for (std::size_t cur = i; cur != 0; cur = *t.parent[cur]) {
        if (++hops > t.size()) throw Error(Errc::Parameter, "cycle through node " + std::to_string(i));
      }
      t.level[i] = hops;
      t.depth = std::max(t.depth, hops);
    }
    for (const auto& kids : t.children) t.fanout = std::max(t.fanout, kids.size());
    return t;
  }
};

/// Complete `fanout`-ary tree filled level by level: parent(i) = (i-1)/fanout.
/// The layout is fully determined by n and fanout; `seed` is accepted for
/// interface symmetry with randomized layouts and currently unused.
inline Topology build_tree(std::size_t n, std::size_t fanout, [[maybe_unused]] std::uint64_t seed = 0) {
  if (n < 2) throw Error(Errc::Parameter, "build_tree needs at least 2 nodes");
  if (fanout < 1) throw Error(Errc::Parameter, "build_tree needs fanout >= 1");
  std::vector<std::optional<NodeId>> parents(n);
  for (std::size_t i = 1; i < n; ++i) parents[i] = static_cast<NodeId>((i - 1) / fanout);
  Topology t = Topology::from_parents(std::move(parents));
  t.fanout = fanout;
  return t;
}

// --- scenarios --------------------------------------------------------------

enum class Attack { None, TamperCt, TamperSig, ForgeSubtree, ReplayEpoch };

constexpr std::string_view to_string(Attack a) {
  switch (a) {
    case Attack::None: return "none";
    case Attack::TamperCt: return "tamper-ct";
    case Attack::TamperSig: return "tamper-sig";
    case Attack::ForgeSubtree: return "forge-subtree";
    case Attack::ReplayEpoch: return "replay-epoch";
  }
  return "unknown";
}

inline Attack attack_from_string(std::string_view s) {
  for (Attack a : {Attack::None, Attack::TamperCt, Attack::TamperSig, Attack::ForgeSubtree, Attack::ReplayEpoch}) {
    if (to_string(a) == s) return a;
  }
  throw Error(Errc::Config, "scenario.attack: unknown attack '" + std::string(s) + "'");
}

struct Scenario {
  ParamSet params = ParamSet::Toy;
  std::size_t nodes = 4;
  std::size_t fanout = 1;
  std::optional<std::vector<std::uint64_t>> readings;  // one per non-base node; nullopt = seeded uniform
  std::uint64_t max_reading = 1000;
  Attack attack = Attack::None;
  bool strict = false;
  std::uint64_t seed = 1;
  std::uint64_t epoch = 1;

  void validate() const {
    if (nodes < 2) throw Error(Errc::Config, "scenario.nodes: must be >= 2");
    if (nodes > 0x10000) throw Error(Errc::Config, "scenario.nodes: at most 65536");
    if (fanout < 1) throw Error(Errc::Config, "scenario.fanout: must be >= 1");
    if (readings) {
      if (readings->size() != nodes - 1) {
        throw Error(Errc::Config, "scenario.readings: expected " + std::to_string(nodes - 1) + " values (one per node), got " +
                                      std::to_string(readings->size()));
      }
      for (auto r : *readings) {
        if (r > max_reading) throw Error(Errc::Config, "scenario.readings: value " + std::to_string(r) + " exceeds max_reading");
      }
    }
    if (attack == Attack::ReplayEpoch && epoch == 0) {
      throw Error(Errc::Config, "scenario.epoch: replay-epoch needs a prior epoch (epoch >= 1)");
    }
  }
};

inline Json to_json(const Scenario& s) {
  Json doc{{"params", std::string(to_string(s.params))}, {"nodes", s.nodes}, {"fanout", s.fanout}};
  doc["readings"] = s.readings ? Json(*s.readings) : Json("uniform");
  doc["max_reading"] = s.max_reading;
  doc["attack"] = std::string(to_string(s.attack));
  doc["strict"] = s.strict;
  doc["seed"] = s.seed;
  doc["epoch"] = s.epoch;
  return doc;
}

inline Scenario scenario_from_json(const Json& doc) {
  if (!doc.is_object()) throw Error(Errc::Config, "scenario: expected an object");
  Scenario s;
  auto get_uint = [&doc](const char* name, auto& out) {
    if (!doc.contains(name)) return;
    const Json& v = doc.at(name);
    if (!v.is_number_unsigned()) throw Error(Errc::Config, std::string("scenario.") + name + ": expected a nonnegative integer");
    out = v.get<std::remove_reference_t<decltype(out)>>();
  };
  for (const auto& [key, _] : doc.items()) {
    static const std::vector<std::string> known{"params", "nodes",  "fanout", "readings", "max_reading",
                                                "attack", "strict", "seed",   "epoch"};
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw Error(Errc::Config, "scenario." + key + ": unknown field");
    }
  }
  if (doc.contains("params")) s.params = param_set_from_string(doc.at("params").get<std::string>());
  get_uint("nodes", s.nodes);
  get_uint("fanout", s.fanout);
  get_uint("max_reading", s.max_reading);
  get_uint("seed", s.seed);
  get_uint("epoch", s.epoch);
  if (doc.contains("attack")) {
    if (!doc.at("attack").is_string()) throw Error(Errc::Config, "scenario.attack: expected a string");
    s.attack = attack_from_string(doc.at("attack").get<std::string>());
  }
  if (doc.contains("strict")) {
    if (!doc.at("strict").is_boolean()) throw Error(Errc::Config, "scenario.strict: expected true or false");
    s.strict = doc.at("strict").get<bool>();
  }
  if (doc.contains("readings")) {
    const Json& r = doc.at("readings");
    if (r.is_string() && r.get<std::string>() == "uniform") {
      s.readings.reset();
    } else if (r.is_array()) {
      std::vector<std::uint64_t> values;
      for (const Json& v : r) {
        if (!v.is_number_unsigned()) throw Error(Errc::Config, "scenario.readings: values must be nonnegative integers");
        values.push_back(v.get<std::uint64_t>());
      }
      s.readings = std::move(values);
    } else {
      throw Error(Errc::Config, "scenario.readings: expected an array or \"uniform\"");
    }
  }
  s.validate();
  return s;
}

// --- setup ------------------------------------------------------------------

/// Keys and topology for one deployment. Only the simulator driver holds the
/// OU private key; it hands it to base_receive and nothing else.
struct Setup {
  ParamProfile profile;
  Topology topology;
  OuKeyPair ou;
  std::vector<NodeIdentity> nodes;  // indexed by id; nodes[0] is the base station
  Deployment deployment;
};

inline Setup make_setup(const Scenario& scenario, ParamProfile profile) {
  Rng root(scenario.seed);
  Topology topo = build_tree(scenario.nodes, scenario.fanout, scenario.seed);
  Rng ou_rng = root.derive("ou-keys");
  OuKeyPair ou = ou_keygen(profile.ou_bits, ou_rng);
  Rng key_rng = root.derive("node-keys");
  std::vector<NodeIdentity> nodes(topo.size());
  std::map<NodeId, VerifyKey> registry;
  nodes[0].role = Role::Base;
  for (std::size_t i = 1; i < topo.size(); ++i) {
    auto id = static_cast<NodeId>(i);
    SigKeyPair kp = keygen(profile.curve, key_rng);
    nodes[i] = {id, kp.signing, kp.verify, topo.is_leaf(id) ? Role::Leaf : Role::Aggregator};
    registry[id] = kp.verify;
  }
  Deployment dep = [&] {
    try {
      return make_deployment(profile.curve, ou.pk, std::move(registry),
                             BigInt(static_cast<unsigned long>(scenario.max_reading)), scenario.strict);
    } catch (const Error& e) {
      throw Error(Errc::Config, std::string("scenario.max_reading: ") + e.what());
    }
  }();
  return {std::move(profile), std::move(topo), std::move(ou), std::move(nodes), std::move(dep)};
}

/// Files written by `keygen` and read back by `run --keys`.
struct SetupFiles {
  static constexpr const char* kDeployment = "deployment.json";
  static constexpr const char* kOuPublic = "ou_public.json";
  static constexpr const char* kOuPrivate = "ou_private.json";
  static constexpr const char* kSigningKeys = "signing_keys.json";
};

inline void write_setup(const Setup& setup, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  DeploymentFile file{setup.profile.name, setup.profile.curve.record(), setup.deployment.max_reading,
                      setup.deployment.strict_mode, {}};
  std::map<NodeId, SigningKey> signing;
  for (const auto& node : setup.nodes) {
    DeploymentNode entry{node.id, node.role, setup.topology.parent[node.id], std::nullopt};
    if (node.role != Role::Base) {
      entry.verify_key = node.verify.Z;
      signing[node.id] = node.signing;
    }
    file.nodes.push_back(std::move(entry));
  }
  write_json_file(dir / SetupFiles::kDeployment, to_json(file, setup.profile.curve));
  write_json_file(dir / SetupFiles::kOuPublic, to_json(setup.ou.pk));
  write_json_file(dir / SetupFiles::kOuPrivate, to_json(setup.ou.sk));
  write_json_file(dir / SetupFiles::kSigningKeys, signing_keys_to_json(signing));
}

inline Setup load_setup(const std::filesystem::path& dir) {
  DeploymentFile file = deployment_from_json(read_json_file(dir / SetupFiles::kDeployment));
  OuKeyPair ou = ou_keypair_from_json(read_json_file(dir / SetupFiles::kOuPrivate));
  if (!(ou_public_from_json(read_json_file(dir / SetupFiles::kOuPublic)) == ou.pk)) {
    throw Error(Errc::Config, "ou_public.json does not match ou_private.json");
  }
  auto signing = signing_keys_from_json(read_json_file(dir / SetupFiles::kSigningKeys));
  CurveParams curve = load_curve(file.curve);

  std::sort(file.nodes.begin(), file.nodes.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  std::vector<std::optional<NodeId>> parents;
  for (std::size_t i = 0; i < file.nodes.size(); ++i) {
    if (file.nodes[i].id != i) throw Error(Errc::Config, "deployment.nodes: ids must be 0..n-1");
    parents.push_back(file.nodes[i].parent);
  }
  Topology topo = Topology::from_parents(std::move(parents));

  std::vector<NodeIdentity> nodes(topo.size());
  std::map<NodeId, VerifyKey> registry;
  nodes[0].role = Role::Base;
  for (std::size_t i = 1; i < topo.size(); ++i) {
    auto id = static_cast<NodeId>(i);
    auto it = signing.find(id);
    if (it == signing.end()) throw Error(Errc::Config, "signing_keys: no key for node " + std::to_string(id));
    VerifyKey vk{*file.nodes[i].verify_key};
    if (!(scalar_mul(curve, it->second.z, curve.base()) == vk.Z)) {
      throw Error(Errc::Config, "signing key for node " + std::to_string(id) + " does not match its verify key");
    }
    Role expected = topo.is_leaf(id) ? Role::Leaf : Role::Aggregator;
    if (file.nodes[i].role != expected) {
      throw Error(Errc::Config, "deployment.nodes[" + std::to_string(id) + "].role disagrees with the parent links");
    }
    nodes[i] = {id, it->second, vk, expected};
    registry[id] = vk;
  }
  ParamProfile profile{file.params, curve, (bit_length(ou.pk.n()) + 2) / 3};
  Deployment dep = make_deployment(curve, ou.pk, std::move(registry), file.max_reading, file.strict_mode);
  return {std::move(profile), std::move(topo), std::move(ou), std::move(nodes), std::move(dep)};
}

// --- attacks ----------------------------------------------------------------

struct AttackContext {
  const Deployment& deployment;
  const EpochNonce& nonce;
  Rng& rng;
  const AggMessage* prior = nullptr;  // replay source
};

/// Rewrites an in-flight message the way a compromised node on the path would.
///   tamper-ct     multiply ct by g, shifting the plaintext by +1
///   tamper-sig    s + 1 mod order
///   forge-subtree same contributors, but data signed under a fresh
///                 attacker key pair, with the forged key carried in Z
///   replay-epoch  the captured message from an earlier epoch
inline AggMessage inject_attack(Attack kind, const AggMessage& msg, AttackContext& ctx) {
  const Deployment& dep = ctx.deployment;
  AggMessage out = msg;
  switch (kind) {
    case Attack::None:
      break;
    case Attack::TamperCt:
      out.ct = ou_add(dep.ou_pk, msg.ct, OuCiphertext{dep.ou_pk.g()});
      break;
    case Attack::TamperSig:
      out.s.s = mod(msg.s.s + 1, dep.curve.order());
      break;
    case Attack::ForgeSubtree: {
      BigInt bound = BigInt(static_cast<unsigned long>(msg.contributors.size())) * dep.max_reading;
      for (;;) {
        SigKeyPair forged = keygen(dep.curve, ctx.rng);
        BigInt value = rand_range(ctx.rng, 0, bound + 1);
        try {
          out.s = {sign(dep.curve, forged.signing, value, ctx.nonce), msg.contributors.size()};
        } catch (const Error& e) {
          if (e.code() == Errc::DegenerateSignature) continue;
          throw;
        }
        out.ct = ou_encrypt(dep.ou_pk, value, ctx.rng);
        out.Z = forged.verify;
        break;
      }
      break;
    }
    case Attack::ReplayEpoch:
      if (!ctx.prior) throw Error(Errc::Parameter, "replay-epoch needs a captured message");
      out = *ctx.prior;
      break;
  }
  return out;
}

// --- reports ----------------------------------------------------------------

enum class Detection { NotApplicable, Detected, Missed };

constexpr std::string_view to_string(Detection d) {
  switch (d) {
    case Detection::NotApplicable: return "n/a";
    case Detection::Detected: return "detected";
    case Detection::Missed: return "missed";
  }
  return "unknown";
}

/// Permissive mode trusts the carried key, so a forged subtree is expected to
/// pass; every other attack is expected to be caught.
constexpr Detection expected_detection(Attack attack, bool strict) {
  if (attack == Attack::None) return Detection::NotApplicable;
  if (attack == Attack::ForgeSubtree && !strict) return Detection::Missed;
  return Detection::Detected;
}

struct LinkTraffic {
  NodeId from = 0;
  std::optional<NodeId> to;  // nullopt: root link into the verifier
  std::size_t bytes = 0;
};

struct RunReport {
  Scenario scenario;
  BigInt expected_sum;
  std::optional<BigInt> decrypted_sum;
  bool verified = false;
  Detection detection = Detection::NotApplicable;
  Detection expected = Detection::NotApplicable;
  std::optional<std::string> error;
  std::optional<NodeId> attack_target;
  std::size_t nonce_attempts = 0;
  std::vector<LinkTraffic> links;
  std::size_t root_packets_with_aggregation = 0;
  std::size_t root_packets_without_aggregation = 0;
  std::chrono::duration<double, std::milli> wall_clock{0};

  std::size_t upward_bytes() const {
    std::size_t total = 0;
    for (const auto& l : links) total += l.bytes;
    return total;
  }

  bool sum_correct() const { return decrypted_sum && *decrypted_sum == expected_sum; }

  /// The CLI exit status: honest runs must verify with the exact sum, attack
  /// runs must match their expected detection.
  bool as_expected() const {
    if (scenario.attack == Attack::None) return !error && verified && sum_correct();
    return detection == expected;
  }
};

/// Fills the communication metrics from the traffic actually observed.
inline void measure(RunReport& report, const Topology& topo, std::vector<LinkTraffic> links) {
  report.root_packets_with_aggregation =
      static_cast<std::size_t>(std::count_if(links.begin(), links.end(), [](const auto& l) { return !l.to; }));
  report.root_packets_without_aggregation = topo.leaves().size();
  report.links = std::move(links);
}

/// Stable field order; see docs/report-schema.md. Wall-clock time is left out
/// unless asked for, so identical scenarios serialize identically.
inline Json to_json(const RunReport& r, bool include_timing = false) {
  Json links = Json::array();
  for (const auto& l : r.links) {
    links.push_back(Json{{"from", l.from}, {"to", l.to ? Json(*l.to) : Json("verifier")}, {"bytes", l.bytes}});
  }
  Json doc{{"report_version", 1}, {"scenario", to_json(r.scenario)}};
  doc["expected_sum"] = r.expected_sum.get_str();
  doc["decrypted_sum"] = r.decrypted_sum ? Json(r.decrypted_sum->get_str()) : Json(nullptr);
  doc["sum_correct"] = r.sum_correct();
  doc["verified"] = r.verified;
  doc["detection"] = std::string(to_string(r.detection));
  doc["expected_detection"] = std::string(to_string(r.expected));
  doc["outcome_as_expected"] = r.as_expected();
  doc["error"] = r.error ? Json(*r.error) : Json(nullptr);
  doc["attack_target"] = r.attack_target ? Json(*r.attack_target) : Json(nullptr);
  doc["nonce_attempts"] = r.nonce_attempts;
  doc["root_packets_with_aggregation"] = r.root_packets_with_aggregation;
  doc["root_packets_without_aggregation"] = r.root_packets_without_aggregation;
  doc["upward_bytes_total"] = r.upward_bytes();
  doc["nonce_broadcast_counted"] = false;
  doc["links"] = std::move(links);
  if (include_timing) doc["wall_clock_ms"] = r.wall_clock.count();
  return doc;
}

inline std::string serialize(const RunReport& r, bool include_timing = false) {
  return to_json(r, include_timing).dump(2) + "\n";
}

inline std::string summary_table(const RunReport& r) {
  std::ostringstream out;
  auto row = [&out](std::string_view key, const std::string& value) {
    out << "  " << key << std::string(key.size() < 30 ? 30 - key.size() : 1, ' ') << value << '\n';
  };
  out << "scenario: " << to_string(r.scenario.params) << ", " << r.scenario.nodes << " nodes, fanout "
      << r.scenario.fanout << ", attack " << to_string(r.scenario.attack) << (r.scenario.strict ? ", strict" : "")
      << ", seed " << r.scenario.seed << '\n';
  row("expected sum", r.expected_sum.get_str());
  row("decrypted sum", r.decrypted_sum ? r.decrypted_sum->get_str() : "-");
  row("verified", r.verified ? "yes" : "no");
  row("detection", std::string(to_string(r.detection)) + " (expected " + std::string(to_string(r.expected)) + ")");
  if (r.error) row("error", *r.error);
  row("root packets (aggregated)", std::to_string(r.root_packets_with_aggregation));
  row("root packets (no aggregation)", std::to_string(r.root_packets_without_aggregation));
  row("upward bytes", std::to_string(r.upward_bytes()) + " over " + std::to_string(r.links.size()) + " links");
  row("wall clock", std::to_string(r.wall_clock.count()) + " ms");
  row("outcome", r.as_expected() ? "as expected" : "UNEXPECTED");
  return out.str();
}

// --- epoch driver -----------------------------------------------------------

namespace detail {

/// Link tap: sender id (0 = the root link) and the bytes about to be sent.
using LinkTap = std::function<void(NodeId, std::vector<std::uint8_t>&)>;

struct EpochTrace {
  std::vector<LinkTraffic> links;
  std::optional<AggMessage> root_message;
  std::optional<EpochResult> result;
};

/// Runs one epoch bottom-up. On error, `trace.links` keeps the traffic seen
/// so far and the error propagates.
inline void run_pipeline(const Setup& setup, const std::vector<BigInt>& readings, const EpochNonce& nonce,
                         Rng& enc_rng, const LinkTap& tap, EpochTrace& trace) {
  const Topology& topo = setup.topology;
  const Deployment& dep = setup.deployment;
  std::vector<std::vector<std::vector<std::uint8_t>>> inbox(topo.size());
  auto decode_all = [&dep](const std::vector<std::vector<std::uint8_t>>& frames) {
    std::vector<AggMessage> out;
    out.reserve(frames.size());
    for (const auto& f : frames) out.push_back(decode(f, dep));
    return out;
  };
  for (NodeId id : topo.upward_order()) {
    const NodeIdentity& node = setup.nodes[id];
    AggMessage msg = node.role == Role::Leaf
                         ? leaf_emit(node, readings[id], nonce, dep, enc_rng)
                         : aggregate(node, readings[id], decode_all(inbox[id]), nonce, dep, enc_rng);
    std::vector<std::uint8_t> frame = encode(msg, dep);
    if (tap) tap(id, frame);
    trace.links.push_back({id, topo.parent[id], frame.size()});
    inbox[*topo.parent[id]].push_back(std::move(frame));
  }
  // base station gateway: relay fold, then the single root-link frame
  AggMessage root = combine_messages(decode_all(inbox[0]), nonce, dep);
  std::vector<std::uint8_t> frame = encode(root, dep);
  if (tap) tap(0, frame);
  trace.links.push_back({0, std::nullopt, frame.size()});
  AggMessage received = decode(frame, dep);
  trace.root_message = received;
  trace.result = base_receive(dep, setup.ou.sk, nonce, received);
}

}  // namespace detail

inline constexpr std::size_t kMaxNonceAttempts = 16;

inline RunReport run_epoch(const Scenario& scenario, const Setup& setup) {
  auto started = std::chrono::steady_clock::now();
  scenario.validate();
  const Topology& topo = setup.topology;
  const Deployment& dep = setup.deployment;
  Rng root(scenario.seed);

  RunReport report;
  report.scenario = scenario;
  report.expected = expected_detection(scenario.attack, dep.strict_mode);

  std::vector<BigInt> readings(topo.size(), 0);
  if (scenario.readings) {
    if (scenario.readings->size() + 1 != topo.size()) {
      throw Error(Errc::Config, "scenario.readings: deployment has " + std::to_string(topo.size() - 1) + " nodes");
    }
    for (std::size_t i = 1; i < topo.size(); ++i) readings[i] = BigInt(static_cast<unsigned long>((*scenario.readings)[i - 1]));
  } else {
    Rng reading_rng = root.derive("readings");
    for (std::size_t i = 1; i < topo.size(); ++i) readings[i] = rand_range(reading_rng, 0, dep.max_reading + 1);
  }
  for (std::size_t i = 1; i < topo.size(); ++i) report.expected_sum += readings[i];

  Rng attack_rng = root.derive("attack");
  std::optional<AggMessage> captured;
  if (scenario.attack == Attack::TamperCt || scenario.attack == Attack::TamperSig) {
    // any upward link, the root link included
    report.attack_target = static_cast<NodeId>(rand_range(attack_rng, 0, topo.size()).get_ui());
  } else if (scenario.attack == Attack::ForgeSubtree) {
    report.attack_target = static_cast<NodeId>(rand_range(attack_rng, 1, topo.size()).get_ui());
  } else if (scenario.attack == Attack::ReplayEpoch) {
    report.attack_target = 0;
    Rng prior_nonce_rng = root.derive("replay-nonce");
    Rng prior_enc_rng = root.derive("replay-enc");
    EpochNonce prior = epoch_setup(dep.curve, scenario.epoch - 1, prior_nonce_rng);
    detail::EpochTrace prior_trace;
    detail::run_pipeline(setup, readings, prior, prior_enc_rng, {}, prior_trace);
    captured = prior_trace.root_message;
  }

  Rng nonce_rng = root.derive("nonce");
  detail::EpochTrace trace;
  for (std::size_t attempt = 1; attempt <= kMaxNonceAttempts; ++attempt) {
    report.nonce_attempts = attempt;
    EpochNonce nonce = epoch_setup(dep.curve, scenario.epoch, nonce_rng);
    Rng enc_rng = root.derive("enc-" + std::to_string(attempt));
    AttackContext ctx{dep, nonce, attack_rng, captured ? &*captured : nullptr};
    detail::LinkTap tap;
    if (scenario.attack != Attack::None) {
      tap = [&](NodeId from, std::vector<std::uint8_t>& frame) {
        if (from != *report.attack_target) return;
        frame = encode(inject_attack(scenario.attack, decode(frame, dep), ctx), dep);
      };
    }
    trace = detail::EpochTrace{};
    try {
      detail::run_pipeline(setup, readings, nonce, enc_rng, tap, trace);
      report.error.reset();
      break;
    } catch (const Error& e) {
      report.error = e.what();
      if (e.code() != Errc::EpochAbort) break;
    }
  }

  if (trace.result) {
    report.decrypted_sum = trace.result->sum;
    report.verified = trace.result->verified;
  }
  if (scenario.attack != Attack::None) {
    report.detection = (report.error || !report.verified) ? Detection::Detected : Detection::Missed;
  }
  measure(report, topo, std::move(trace.links));
  report.wall_clock = std::chrono::steady_clock::now() - started;
  return report;
}

inline RunReport run_epoch(const Scenario& scenario, const std::filesystem::path& params_dir = default_params_dir()) {
  auto started = std::chrono::steady_clock::now();
  scenario.validate();
  Setup setup = make_setup(scenario, load_profile(scenario.params, params_dir));
  RunReport report = run_epoch(scenario, setup);
  report.wall_clock = std::chrono::steady_clock::now() - started;
  return report;
}

}  // namespace secagg
