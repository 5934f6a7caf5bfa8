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

// Okamoto-Uchiyama public-key encryption over n = p^2 q.
//
//   Enc(m; r) = g^m * h^r mod n,           h = g^n mod n
//   Dec(c)    = L(c^(p-1) mod p^2) * L(g_p)^-1 mod p,   L(x) = (x - 1) / p
//
// Multiplying ciphertexts adds plaintexts mod p. Plaintexts are kept below
// the key's capacity B < p so that sums of in-range readings decrypt exactly.

#pragma once

#include <optional>
#include <span>
#include <utility>

#include "secagg/error.hpp"
#include "secagg/numeric.hpp"

namespace secagg {

struct OuCiphertext {
  BigInt c;
  friend bool operator==(const OuCiphertext&, const OuCiphertext&) = default;
};

class OuPublicKey {
 public:
  /// Rebuilds a key from its (n, g, h) record. Capacity is re-derived from
  /// the modulus size: ceil(bitlen(n) / 3) recovers the per-prime bit length.
  static OuPublicKey from_record(const BigInt& n, const BigInt& g, const BigInt& h) {
    std::size_t prime_bits = (bit_length(n) + 2) / 3;
    if (prime_bits < 4) throw Error(Errc::Parameter, "modulus too small");
    return OuPublicKey(n, g, h, BigInt(1) << static_cast<mp_bitcnt_t>(prime_bits - 2));
  }

  const BigInt& n() const { return n_; }
  const BigInt& g() const { return g_; }
  const BigInt& h() const { return h_; }
  /// Exclusive bound on plaintexts accepted by ou_encrypt.
  const BigInt& capacity() const { return capacity_; }
  std::size_t ciphertext_bytes() const { return byte_length(n_); }

  /// True when c is a residue in [1, n) coprime to n.
  bool well_formed(const OuCiphertext& ct) const { return ct.c >= 1 && ct.c < n_ && gcd(ct.c, n_) == 1; }

  friend bool operator==(const OuPublicKey&, const OuPublicKey&) = default;

 private:
  friend struct OuKeyPair;
  OuPublicKey(BigInt n, BigInt g, BigInt h, BigInt capacity)
      : n_(std::move(n)), g_(std::move(g)), h_(std::move(h)), capacity_(std::move(capacity)) {
    if (g_ <= 1 || g_ >= n_ || gcd(g_, n_) != 1) throw Error(Errc::Parameter, "g must be a unit in (1, n)");
    if (h_ != mod_exp(g_, n_, n_)) throw Error(Errc::Parameter, "h must equal g^n mod n");
    if (capacity_ < 1) throw Error(Errc::Parameter, "capacity must be positive");
  }

  BigInt n_, g_, h_, capacity_;
};

class OuPrivateKey {
 public:
  const BigInt& p() const { return p_; }
  const BigInt& q() const { return q_; }
  const BigInt& g() const { return g_; }
  /// g^(p-1) mod p^2, an element of order p.
  const BigInt& g_p() const { return g_p_; }
  /// L(g_p)^-1 mod p.
  const BigInt& l_inv() const { return l_inv_; }
  const BigInt& p_squared() const { return p2_; }

 private:
  friend struct OuKeyPair;
  OuPrivateKey() = default;

  BigInt p_, q_, g_, g_p_, l_inv_, p2_;
};

struct OuKeyPair {
  OuPublicKey pk;
  OuPrivateKey sk;

  /// Assembles both halves from the factors and generator. Throws unless p, q
  /// are distinct primes and g^(p-1) has order exactly p mod p^2. Capacity
  /// defaults to 2^(bitlen(p) - 2), the value keygen uses.
  static OuKeyPair from_factors(const BigInt& p, const BigInt& q, const BigInt& g,
                                std::optional<BigInt> capacity = std::nullopt) {
    if (p == q || !is_probable_prime(p) || !is_probable_prime(q)) {
      throw Error(Errc::Parameter, "p and q must be distinct primes");
    }
    if (bit_length(p) < 3) throw Error(Errc::Parameter, "p is too small");
    BigInt n = p * p * q;
    OuPrivateKey sk;
    sk.p_ = p;
    sk.q_ = q;
    sk.g_ = g;
    sk.p2_ = p * p;
    if (g <= 1 || g >= n || gcd(g, n) != 1) throw Error(Errc::Parameter, "g must be a unit in (1, n)");
    sk.g_p_ = mod_exp(g, p - 1, sk.p2_);
    if (sk.g_p_ == 1) throw Error(Errc::Parameter, "g^(p-1) mod p^2 must have order p");
    sk.l_inv_ = mod_inv(BigInt((sk.g_p_ - 1) / p), p);
    BigInt cap = capacity.value_or(BigInt(1) << static_cast<mp_bitcnt_t>(bit_length(p) - 2));
    if (cap > p) throw Error(Errc::Parameter, "capacity may not exceed p");
    return {OuPublicKey(n, g, mod_exp(g, n, n), std::move(cap)), std::move(sk)};
  }
};

/// Fresh `bits`-bit primes p != q; g resampled in [2, n-1] until the order
/// condition holds.
inline OuKeyPair ou_keygen(std::size_t bits, Rng& rng) {
  if (bits < 8) throw Error(Errc::Parameter, "ou_keygen needs at least 8 bits per prime");
  BigInt p = gen_prime(bits, rng);
  BigInt q = gen_prime(bits, rng);
  while (q == p) q = gen_prime(bits, rng);
  BigInt n = p * p * q;
  BigInt p2 = p * p;
  for (;;) {
    BigInt g = rand_range(rng, 2, n);
    if (gcd(g, n) != 1) continue;
    if (mod_exp(g, p - 1, p2) == 1) continue;
    return OuKeyPair::from_factors(p, q, g);
  }
}

/// Encryption with a caller-chosen randomizer r in [0, n). r = 0 gives the
/// deterministic g^m.
inline OuCiphertext ou_encrypt_with_nonce(const OuPublicKey& pk, const BigInt& m, const BigInt& r) {
  if (m < 0 || m >= pk.capacity()) {
    throw Error(Errc::PlaintextOutOfRange, "plaintext " + m.get_str() + " outside [0, " + pk.capacity().get_str() + ")");
  }
  if (r < 0 || r >= pk.n()) throw Error(Errc::Parameter, "randomizer must lie in [0, n)");
  return {mod(mod_exp(pk.g(), m, pk.n()) * mod_exp(pk.h(), r, pk.n()), pk.n())};
}

inline OuCiphertext ou_encrypt(const OuPublicKey& pk, const BigInt& m, Rng& rng) {
  if (m < 0 || m >= pk.capacity()) {
    throw Error(Errc::PlaintextOutOfRange, "plaintext " + m.get_str() + " outside [0, " + pk.capacity().get_str() + ")");
  }
  return ou_encrypt_with_nonce(pk, m, rand_range(rng, 1, pk.n()));
}

/// Recovers the plaintext mod p.
inline BigInt ou_decrypt(const OuPrivateKey& sk, const OuCiphertext& ct) {
  BigInt n = sk.p_squared() * sk.q();
  if (ct.c < 1 || ct.c >= n || gcd(ct.c, n) != 1) {
    throw Error(Errc::MalformedCiphertext, "ciphertext is not a unit mod n");
  }
  BigInt a = mod_exp(ct.c, sk.p() - 1, sk.p_squared());
  if (mod(a, sk.p()) != 1) throw Error(Errc::MalformedCiphertext, "c^(p-1) is not 1 mod p");
  BigInt l = (a - 1) / sk.p();
  return mod(l * sk.l_inv(), sk.p());
}

inline OuCiphertext ou_add(const OuPublicKey& pk, const OuCiphertext& lhs, const OuCiphertext& rhs) {
  return {mod(lhs.c * rhs.c, pk.n())};
}

inline OuCiphertext ou_add_many(const OuPublicKey& pk, std::span<const OuCiphertext> cts) {
  if (cts.empty()) throw Error(Errc::Parameter, "ou_add_many needs at least one ciphertext");
  OuCiphertext acc = cts.front();
  for (const auto& ct : cts.subspan(1)) acc = ou_add(pk, acc, ct);
  return acc;
}

}  // namespace secagg
