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

// Additively combinable ECDSA-style signatures.
//
// All signers in an epoch share one nonce k (R = kT, r = R.x mod order) and
// sign their raw reading: s_i = k^-1 (m_i + z_i r) mod order. Summing gives
// sum(s_i) = k^-1 (sum(m_i) + sum(z_i) r), which is an ordinary ECDSA
// signature on sum(m_i) under the summed key sum(Z_i).
//
// Security caveat: anyone who knows k and sees s_i recovers z_i. The epoch
// authority is trusted with k; readings are not hashed.

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "secagg/ec_group.hpp"
#include "secagg/error.hpp"
#include "secagg/numeric.hpp"

namespace secagg {

struct SigningKey {
  BigInt z;
};

struct VerifyKey {
  Point Z;
  friend bool operator==(const VerifyKey&, const VerifyKey&) = default;
};

struct SigKeyPair {
  SigningKey signing;
  VerifyKey verify;
};

struct EpochNonce {
  std::uint64_t epoch_id = 0;
  BigInt k;
  Point R;
  BigInt r_x;
};

struct AggSignature {
  BigInt s;
  std::size_t count = 0;
  friend bool operator==(const AggSignature&, const AggSignature&) = default;
};

inline SigKeyPair signing_key_from_scalar(const CurveParams& c, const BigInt& z) {
  if (z < 1 || z >= c.order()) throw Error(Errc::Parameter, "signing scalar must lie in [1, order)");
  return {{z}, {scalar_mul(c, z, c.base())}};
}

inline SigKeyPair keygen(const CurveParams& c, Rng& rng) {
  return signing_key_from_scalar(c, rand_range(rng, 1, c.order()));
}

/// Builds the nonce for a fixed k. Throws DegenerateSignature when R.x = 0 mod
/// order, since no signature can use that nonce.
inline EpochNonce epoch_nonce_from_scalar(const CurveParams& c, std::uint64_t epoch_id, const BigInt& k) {
  if (k < 1 || k >= c.order()) throw Error(Errc::Parameter, "nonce scalar must lie in [1, order)");
  Point r = scalar_mul(c, k, c.base());
  BigInt r_x = x_mod_order(c, r);
  if (r_x == 0) throw Error(Errc::DegenerateSignature, "nonce has r_x = 0");
  return {epoch_id, k, std::move(r), std::move(r_x)};
}

/// Draws k until r_x != 0.
inline EpochNonce epoch_setup(const CurveParams& c, std::uint64_t epoch_id, Rng& rng) {
  for (;;) {
    BigInt k = rand_range(rng, 1, c.order());
    Point r = scalar_mul(c, k, c.base());
    BigInt r_x = x_mod_order(c, r);
    if (r_x != 0) return {epoch_id, std::move(k), std::move(r), std::move(r_x)};
  }
}

inline BigInt sign(const CurveParams& c, const SigningKey& key, const BigInt& m, const EpochNonce& nonce) {
  if (m < 0 || m >= c.order()) throw Error(Errc::Parameter, "message scalar must lie in [0, order)");
  BigInt k_inv = mod_inv(nonce.k, c.order());
  BigInt s = mod(k_inv * (m + key.z * nonce.r_x), c.order());
  if (s == 0) throw Error(Errc::DegenerateSignature, "signature scalar is zero; a fresh nonce is required");
  return s;
}

inline AggSignature combine_sigs(const CurveParams& c, std::span<const BigInt> sigs) {
  if (sigs.empty()) throw Error(Errc::Parameter, "combine_sigs needs at least one signature");
  BigInt s = 0;
  for (const auto& si : sigs) {
    if (si < 1 || si >= c.order()) throw Error(Errc::Parameter, "signature scalar outside [1, order)");
    s += si;
  }
  s = mod(s, c.order());
  if (s == 0) throw Error(Errc::DegenerateAggregate, "aggregate signature is zero");
  return {std::move(s), sigs.size()};
}

/// Sums already-aggregated signatures; counts add up.
inline AggSignature combine_sigs(const CurveParams& c, std::span<const AggSignature> sigs) {
  if (sigs.empty()) throw Error(Errc::Parameter, "combine_sigs needs at least one signature");
  std::vector<BigInt> scalars;
  std::size_t count = 0;
  for (const auto& sig : sigs) {
    scalars.push_back(sig.s);
    count += sig.count;
  }
  AggSignature out = combine_sigs(c, std::span<const BigInt>(scalars));
  out.count = count;
  return out;
}

inline VerifyKey combine_keys(const CurveParams& c, std::span<const VerifyKey> keys) {
  if (keys.empty()) throw Error(Errc::Parameter, "combine_keys needs at least one key");
  Point sum;
  for (const auto& key : keys) sum = point_add(c, sum, key.Z);
  if (sum.is_infinity()) throw Error(Errc::DegenerateKeySum, "public keys sum to the point at infinity");
  return {std::move(sum)};
}

/// Accepts iff x(u1 T + u2 Z) mod order == r_x with w = s^-1, u1 = m w,
/// u2 = r_x w. Malformed inputs reject.
inline bool verify(const CurveParams& c, const BigInt& m, const AggSignature& sig, const VerifyKey& key,
                   const BigInt& r_x) {
  const BigInt& order = c.order();
  if (m < 0 || m >= order) return false;
  if (r_x <= 0 || r_x >= order) return false;
  if (sig.s <= 0 || sig.s >= order) return false;
  if (key.Z.is_infinity() || !on_curve(c, key.Z)) return false;
  BigInt w;
  if (mpz_invert(w.get_mpz_t(), sig.s.get_mpz_t(), order.get_mpz_t()) == 0) return false;
  BigInt u1 = mod(m * w, order);
  BigInt u2 = mod(r_x * w, order);
  Point x = detail::add_unchecked(c, scalar_mul(c, u1, c.base()), scalar_mul(c, u2, key.Z));
  if (x.is_infinity()) return false;
  return x_mod_order(c, x) == r_x;
}

}  // namespace secagg
