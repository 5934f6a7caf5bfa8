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

#include "secagg/records.hpp"

#include <filesystem>

#include "gtest/gtest.h"
#include "secagg/simnet.hpp"

namespace secagg {
namespace {

std::string config_error(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::Config) << e.what();
    return e.what();
  }
  ADD_FAILURE() << "expected a config error";
  return {};
}

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("secagg-records-" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

TEST(CurveRecord, JsonRoundTrip) {
  for (const char* file : {"toy17.json", "small24.json", "secp256r1.json"}) {
    Json doc = read_json_file(std::string(SECAGG_PARAMS_DIR) + "/" + file);
    CurveRecord rec = curve_record_from_json(doc);
    EXPECT_EQ(to_json(rec), doc) << file;
    EXPECT_EQ(load_curve(rec).record().order, rec.order);
  }
}

TEST(CurveRecord, MissingAndMalformedFields) {
  Json doc = to_json(toy_curve_record());
  Json missing = doc;
  missing.erase("Ty");
  EXPECT_NE(config_error([&] { curve_record_from_json(missing); }).find("'Ty'"), std::string::npos);
  Json bad = doc;
  bad["order"] = "zz";
  EXPECT_NE(config_error([&] { curve_record_from_json(bad); }).find("curve.order"), std::string::npos);
  bad["order"] = 19;
  EXPECT_NE(config_error([&] { curve_record_from_json(bad); }).find("curve.order"), std::string::npos);
}

TEST(Points, HexRoundTrip) {
  CurveParams c = load_curve(toy_curve_record());
  EXPECT_EQ(point_to_hex(c, Point(6, 3)), "040603");
  EXPECT_EQ(point_from_hex(c, "040603"), Point(6, 3));
  for (const auto& p : {Point(5, 1), scalar_mul(c, 7, c.base())}) EXPECT_EQ(point_from_hex(c, point_to_hex(c, p)), p);
  EXPECT_THROW(point_from_hex(c, "04060"), Error);
  EXPECT_THROW(point_from_hex(c, "040602"), Error);
}

TEST(OuKeys, JsonRoundTrip) {
  Rng rng(1);
  OuKeyPair kp = ou_keygen(64, rng);
  EXPECT_EQ(ou_public_from_json(to_json(kp.pk)), kp.pk);
  OuKeyPair back = ou_keypair_from_json(to_json(kp.sk));
  EXPECT_EQ(back.pk, kp.pk);
  EXPECT_EQ(back.sk.l_inv(), kp.sk.l_inv());

  Json pub = to_json(kp.pk);
  pub["h"] = "2";
  EXPECT_NE(config_error([&] { ou_public_from_json(pub); }).find("ou_public"), std::string::npos);
  Json priv = to_json(kp.sk);
  priv["p"] = "10";
  EXPECT_NE(config_error([&] { ou_keypair_from_json(priv); }).find("ou_private"), std::string::npos);
}

TEST(DeploymentFile, Errors) {
  Scenario s;
  s.nodes = 3;
  secagg::Setup setup = make_setup(s, load_profile(ParamSet::Toy, SECAGG_PARAMS_DIR));
  auto dir = scratch("errors");
  write_setup(setup, dir);
  Json doc = read_json_file(dir / SetupFiles::kDeployment);
  EXPECT_EQ(doc["nodes"].size(), 3u);
  EXPECT_TRUE(doc["nodes"][0]["parent"].is_null());
  EXPECT_FALSE(doc["nodes"][0].contains("verify_key"));

  Json bad = doc;
  bad["nodes"][1]["role"] = "relay";
  EXPECT_NE(config_error([&] { deployment_from_json(bad); }).find("role"), std::string::npos);
  bad = doc;
  bad["nodes"][2].erase("verify_key");
  EXPECT_NE(config_error([&] { deployment_from_json(bad); }).find("verify_key"), std::string::npos);
  bad = doc;
  bad["nodes"][2]["verify_key"] = "04" + std::string(14, '0');
  EXPECT_NE(config_error([&] { deployment_from_json(bad); }).find("verify_key"), std::string::npos);
  bad = doc;
  bad["max_reading"] = 10;
  EXPECT_NE(config_error([&] { deployment_from_json(bad); }).find("max_reading"), std::string::npos);
  bad = doc;
  bad.erase("strict");
  EXPECT_NE(config_error([&] { deployment_from_json(bad); }).find("strict"), std::string::npos);
}

TEST(SetupFiles, LoadedKeysReproduceTheSeededRun) {
  Scenario s;
  s.nodes = 9;
  s.fanout = 3;
  s.seed = 77;
  s.strict = true;
  secagg::Setup original = make_setup(s, load_profile(ParamSet::Toy, SECAGG_PARAMS_DIR));
  auto dir = scratch("roundtrip");
  write_setup(original, dir);
  secagg::Setup loaded = load_setup(dir);
  EXPECT_EQ(loaded.deployment.registry, original.deployment.registry);
  EXPECT_EQ(loaded.topology.parent, original.topology.parent);
  EXPECT_EQ(loaded.ou.pk, original.ou.pk);
  EXPECT_TRUE(loaded.deployment.strict_mode);
  EXPECT_EQ(serialize(run_epoch(s, loaded)), serialize(run_epoch(s, original)));
}

TEST(SetupFiles, InconsistentFilesAreRejected) {
  Scenario s;
  s.nodes = 4;
  secagg::Setup setup = make_setup(s, load_profile(ParamSet::Toy, SECAGG_PARAMS_DIR));
  auto dir = scratch("inconsistent");
  write_setup(setup, dir);

  Json keys = read_json_file(dir / SetupFiles::kSigningKeys);
  keys["nodes"][0]["z"] = "5";
  write_json_file(dir / SetupFiles::kSigningKeys, keys);
  EXPECT_NE(config_error([&] { load_setup(dir); }).find("does not match"), std::string::npos);

  write_setup(setup, dir);
  Scenario other = s;
  other.seed = 2;
  write_json_file(dir / SetupFiles::kOuPublic, to_json(make_setup(other, setup.profile).ou.pk));
  EXPECT_NE(config_error([&] { load_setup(dir); }).find("ou_public.json"), std::string::npos);

  std::filesystem::remove(dir / SetupFiles::kDeployment);
  EXPECT_NE(config_error([&] { load_setup(dir); }).find("cannot open"), std::string::npos);
}

}  // namespace
}  // namespace secagg
