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

#include "secagg/ou_phe.hpp"

#include <algorithm>
#include <set>
#include <vector>

#include "gtest/gtest.h"
#include "oracles.hpp"

namespace secagg {
namespace {

// p = 11, q = 7, g = 2. Capacity is p itself so every residue below p is
// admissible; see ToyKeys in the protocol tests for the same fixture.
OuKeyPair toy_keys() { return OuKeyPair::from_factors(11, 7, 2, BigInt(11)); }

Errc error_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an error";
  return Errc::Config;
}

TEST(OuToy, FixtureMatchesDirectArithmetic) {
  OuKeyPair keys = toy_keys();
  oracle::SmallOu ref{11, 7, 2};
  EXPECT_EQ(keys.pk.n(), 847);
  EXPECT_EQ(keys.pk.h(), ref.h());
  EXPECT_EQ(keys.sk.g_p(), 56);
  EXPECT_EQ(oracle::naive_pow_mod(2, 10, 121), 56u);
  EXPECT_EQ(oracle::naive_order(56, 121), 11u);
  EXPECT_EQ((56 - 1) / 11, 5);
  EXPECT_EQ(keys.sk.l_inv(), 9);
}

TEST(OuToy, EncryptionMatchesOracleForEveryNonce) {
  OuKeyPair keys = toy_keys();
  oracle::SmallOu ref{11, 7, 2};
  for (unsigned long m = 0; m < 11; ++m) {
    for (unsigned long r = 0; r < 847; r += 7) {
      OuCiphertext ct = ou_encrypt_with_nonce(keys.pk, m, r);
      ASSERT_EQ(ct.c, ref.enc(m, r));
      ASSERT_EQ(ou_decrypt(keys.sk, ct), ref.dec(ct.c.get_ui()));
      ASSERT_EQ(ou_decrypt(keys.sk, ct), m);
    }
  }
}

TEST(OuToy, WorkedSum) {
  OuKeyPair keys = toy_keys();
  oracle::SmallOu ref{11, 7, 2};
  Rng rng(1);
  OuCiphertext a = ou_encrypt(keys.pk, 3, rng);
  OuCiphertext b = ou_encrypt(keys.pk, 4, rng);
  EXPECT_EQ(ou_decrypt(keys.sk, a), 3);
  OuCiphertext sum{mod(a.c * b.c, 847)};
  EXPECT_EQ(ou_add(keys.pk, a, b), sum);
  EXPECT_EQ(ou_decrypt(keys.sk, sum), 7);
  EXPECT_EQ(ref.dec(sum.c.get_ui()), 7u);
}

TEST(OuToy, NoOpNonce) {
  OuKeyPair keys = toy_keys();
  OuCiphertext ct = ou_encrypt_with_nonce(keys.pk, 0, 0);
  EXPECT_EQ(ct.c, 1);
  EXPECT_EQ(ou_decrypt(keys.sk, ct), 0);
}

TEST(OuToy, WrapsModPWhenCapacityIsOverrun) {
  OuKeyPair keys = toy_keys();
  Rng rng(2);
  std::vector<OuCiphertext> cts;
  for (int i = 0; i < 4; ++i) cts.push_back(ou_encrypt(keys.pk, 10, rng));
  EXPECT_EQ(ou_decrypt(keys.sk, ou_add_many(keys.pk, cts)), 40 % 11);
  EXPECT_EQ(ou_decrypt(keys.sk, ou_add(keys.pk, cts[0], cts[1])), 20 % 11);
}

TEST(OuToy, MalformedCiphertexts) {
  OuKeyPair keys = toy_keys();
  for (unsigned long c : {0ul, 11ul, 7ul, 847ul, 121ul, 848ul}) {
    EXPECT_EQ(error_of([&] { ou_decrypt(keys.sk, {c}); }), Errc::MalformedCiphertext) << c;
  }
  EXPECT_FALSE(keys.pk.well_formed({0}));
  EXPECT_TRUE(keys.pk.well_formed({2}));
}

TEST(OuKeygen, ParameterErrors) {
  Rng rng(3);
  EXPECT_EQ(error_of([&] { ou_keygen(4, rng); }), Errc::Parameter);
  EXPECT_EQ(error_of([&] { ou_keygen(7, rng); }), Errc::Parameter);
  EXPECT_EQ(error_of([] { OuKeyPair::from_factors(11, 11, 2); }), Errc::Parameter);
  EXPECT_EQ(error_of([] { OuKeyPair::from_factors(12, 7, 2); }), Errc::Parameter);
  // 3^10 = 1 mod 121, so g = 3 has no order-p component
  EXPECT_EQ(oracle::naive_pow_mod(3, 10, 121), 1u);
  EXPECT_EQ(error_of([] { OuKeyPair::from_factors(11, 7, 3); }), Errc::Parameter);
  EXPECT_EQ(error_of([] { OuKeyPair::from_factors(11, 7, 2, BigInt(12)); }), Errc::Parameter);
}

TEST(OuKeygen, StructureAndDeterminism) {
  for (std::size_t bits : {8, 16, 64, 256}) {
    Rng a(40 + bits), b(40 + bits);
    OuKeyPair k1 = ou_keygen(bits, a);
    OuKeyPair k2 = ou_keygen(bits, b);
    EXPECT_EQ(k1.pk, k2.pk);
    EXPECT_EQ(k1.sk.p(), k2.sk.p());
    EXPECT_NE(k1.sk.p(), k1.sk.q());
    EXPECT_EQ(bit_length(k1.sk.p()), bits);
    EXPECT_EQ(bit_length(k1.sk.q()), bits);
    EXPECT_EQ(k1.pk.n(), k1.sk.p() * k1.sk.p() * k1.sk.q());
    EXPECT_EQ(k1.pk.h(), mod_exp(k1.pk.g(), k1.pk.n(), k1.pk.n()));
    EXPECT_EQ(k1.pk.capacity(), BigInt(1) << static_cast<mp_bitcnt_t>(bits - 2));
    EXPECT_LT(k1.pk.capacity(), k1.sk.p());
    // g_p has order exactly p: not 1, yet 1 mod p and g_p^p = 1 mod p^2
    EXPECT_NE(k1.sk.g_p(), 1);
    EXPECT_EQ(mod(k1.sk.g_p(), k1.sk.p()), 1);
    EXPECT_EQ(mod_exp(k1.sk.g_p(), k1.sk.p(), k1.sk.p_squared()), 1);
    // the public record alone recovers the same capacity
    EXPECT_EQ(OuPublicKey::from_record(k1.pk.n(), k1.pk.g(), k1.pk.h()), k1.pk);
  }
}

TEST(OuEncrypt, RangeCheck) {
  Rng rng(5);
  OuKeyPair keys = ou_keygen(16, rng);
  EXPECT_EQ(error_of([&] { ou_encrypt(keys.pk, keys.pk.capacity(), rng); }), Errc::PlaintextOutOfRange);
  EXPECT_EQ(error_of([&] { ou_encrypt(keys.pk, -1, rng); }), Errc::PlaintextOutOfRange);
  EXPECT_EQ(error_of([&] { ou_encrypt_with_nonce(keys.pk, 1, keys.pk.n()); }), Errc::Parameter);
  EXPECT_NO_THROW(ou_encrypt(keys.pk, keys.pk.capacity() - 1, rng));
}

TEST(OuEncrypt, RoundTrip) {
  Rng rng(6);
  OuKeyPair keys = ou_keygen(64, rng);
  for (int i = 0; i < 1000; ++i) {
    BigInt m = rand_range(rng, 0, keys.pk.capacity());
    OuCiphertext ct = ou_encrypt(keys.pk, m, rng);
    ASSERT_TRUE(keys.pk.well_formed(ct));
    ASSERT_EQ(ou_decrypt(keys.sk, ct), m);
  }
}

TEST(OuEncrypt, IsProbabilistic) {
  Rng rng(7);
  OuKeyPair keys = ou_keygen(64, rng);
  std::set<std::string> seen;
  for (int i = 0; i < 1000; ++i) {
    OuCiphertext a = ou_encrypt(keys.pk, 42, rng);
    OuCiphertext b = ou_encrypt(keys.pk, 42, rng);
    ASSERT_NE(a, b);
    seen.insert(a.c.get_str(16));
  }
  EXPECT_EQ(seen.size(), 1000u);
}

TEST(OuAdd, Homomorphism) {
  for (std::size_t bits : {0, 32, 128}) {
    Rng rng(8 + bits);
    OuKeyPair keys = bits == 0 ? toy_keys() : ou_keygen(bits, rng);
    for (int i = 0; i < 1000; ++i) {
      BigInt a = rand_range(rng, 0, keys.pk.capacity());
      BigInt b = rand_range(rng, 0, keys.pk.capacity() - a);
      OuCiphertext sum = ou_add(keys.pk, ou_encrypt(keys.pk, a, rng), ou_encrypt(keys.pk, b, rng));
      ASSERT_EQ(ou_decrypt(keys.sk, sum), a + b) << bits;
    }
  }
}

TEST(OuAdd, IdentityAndFolds) {
  Rng rng(9);
  OuKeyPair keys = ou_keygen(32, rng);
  OuCiphertext m = ou_encrypt(keys.pk, 1234, rng);
  EXPECT_EQ(ou_decrypt(keys.sk, ou_add(keys.pk, m, ou_encrypt(keys.pk, 0, rng))), 1234);

  std::vector<OuCiphertext> tens{ou_encrypt(keys.pk, 10, rng), ou_encrypt(keys.pk, 20, rng), ou_encrypt(keys.pk, 30, rng)};
  EXPECT_EQ(ou_decrypt(keys.sk, ou_add_many(keys.pk, tens)), 60);

  std::vector<OuCiphertext> single{m};
  EXPECT_EQ(ou_add_many(keys.pk, single), m);

  std::vector<OuCiphertext> ones;
  for (int i = 0; i < 5; ++i) ones.push_back(ou_encrypt(keys.pk, 1, rng));
  EXPECT_EQ(ou_decrypt(keys.sk, ou_add_many(keys.pk, ones)), 5);

  std::vector<OuCiphertext> mixed{ou_encrypt(keys.pk, 3, rng), ou_encrypt(keys.pk, 5, rng), ou_encrypt(keys.pk, 11, rng),
                                  ou_encrypt(keys.pk, 17, rng)};
  OuCiphertext reference = ou_add_many(keys.pk, mixed);
  std::sort(mixed.begin(), mixed.end(), [](const auto& x, const auto& y) { return x.c < y.c; });
  do {
    ASSERT_EQ(ou_add_many(keys.pk, mixed), reference);
  } while (std::next_permutation(mixed.begin(), mixed.end(), [](const auto& x, const auto& y) { return x.c < y.c; }));
  EXPECT_EQ(ou_decrypt(keys.sk, reference), 36);

  EXPECT_EQ(error_of([&] { ou_add_many(keys.pk, std::vector<OuCiphertext>{}); }), Errc::Parameter);
}

}  // namespace
}  // namespace secagg
