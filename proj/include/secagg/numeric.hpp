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

// Arbitrary-precision integer helpers shared by the curve and the
// Okamoto-Uchiyama code. Integers are GMP's mpz_class throughout.
//
// NOTE: Rng is a reproducible simulator PRNG, not a cryptographic one. Every
// key, nonce, and encryption randomizer in this library comes from it so runs
// can be replayed bit for bit from a seed. Do not deploy keys made with it.

#pragma once

#include <gmpxx.h>

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "secagg/error.hpp"

namespace secagg {

using BigInt = mpz_class;

inline std::size_t bit_length(const BigInt& x) {
  return x == 0 ? 0 : mpz_sizeinbase(x.get_mpz_t(), 2);
}

inline std::size_t byte_length(const BigInt& x) { return (bit_length(x) + 7) / 8; }

/// Keyed counter-mode generator: output i is the SplitMix64 finalizer applied
/// to key + i * golden. Same seed, same stream, on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : key_(seed) {}

  std::uint64_t next_u64() {
    ++counter_;
    return mix(key_ + counter_ * kGolden);
  }

  /// Independent stream keyed by this generator's key and a label. Does not
  /// advance this generator.
  Rng derive(std::string_view label) const {
    std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a over the label
    for (unsigned char c : label) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
    return Rng(mix(key_ ^ mix(h + kGolden)));
  }

  std::uint64_t key() const { return key_; }
  std::uint64_t position() const { return counter_; }

 private:
  static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// Uniform integer with exactly `bits` random bits (top bit may be zero).
inline BigInt random_bits(Rng& rng, std::size_t bits) {
  if (bits == 0) return 0;
  std::vector<std::uint64_t> words((bits + 63) / 64);
  for (auto& w : words) w = rng.next_u64();
  std::size_t spare = words.size() * 64 - bits;
  if (spare) words.back() >>= spare;
  BigInt out;
  // least-significant word first
  mpz_import(out.get_mpz_t(), words.size(), -1, sizeof(std::uint64_t), 0, 0, words.data());
  return out;
}

/// Uniform in [lo, hi) by rejection sampling on bit_length(hi - lo - 1) bits.
inline BigInt rand_range(Rng& rng, const BigInt& lo, const BigInt& hi) {
  if (lo >= hi) throw Error(Errc::Parameter, "rand_range requires lo < hi");
  BigInt width = hi - lo;
  if (width == 1) return lo;
  std::size_t bits = bit_length(BigInt(width - 1));
  for (;;) {
    BigInt x = random_bits(rng, bits);
    if (x < width) return lo + x;
  }
}

inline BigInt mod_exp(const BigInt& base, const BigInt& exp, const BigInt& modulus) {
  if (modulus < 2) throw Error(Errc::Parameter, "mod_exp modulus must be >= 2");
  if (exp < 0) throw Error(Errc::Parameter, "mod_exp exponent must be nonnegative");
  BigInt out;
  mpz_powm(out.get_mpz_t(), base.get_mpz_t(), exp.get_mpz_t(), modulus.get_mpz_t());
  return out;
}

inline BigInt mod_inv(const BigInt& a, const BigInt& m) {
  if (m < 2) throw Error(Errc::Parameter, "mod_inv modulus must be >= 2");
  BigInt out;
  if (mpz_invert(out.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0) {
    throw Error(Errc::NonInvertible, a.get_str() + " has no inverse mod " + m.get_str());
  }
  return out;
}

/// Nonnegative residue of x mod m (mpz's % keeps the dividend's sign).
inline BigInt mod(const BigInt& x, const BigInt& m) {
  BigInt r;
  mpz_mod(r.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
  return r;
}

inline BigInt gcd(const BigInt& a, const BigInt& b) {
  BigInt g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

namespace detail {

inline const std::vector<unsigned>& small_primes() {
  static const std::vector<unsigned> primes = [] {
    std::vector<unsigned> out;
    std::array<bool, 1000> composite{};
    for (unsigned i = 2; i < 1000; ++i) {
      if (composite[i]) continue;
      out.push_back(i);
      for (unsigned j = i * i; j < 1000; j += i) composite[j] = true;
    }
    return out;
  }();
  return primes;
}

}  // namespace detail

inline constexpr int kMillerRabinRounds = 40;

/// Trial division by the primes below 1000, then `rounds` Miller-Rabin rounds
/// with witnesses drawn from `rng`.
inline bool is_probable_prime(const BigInt& n, Rng& rng, int rounds = kMillerRabinRounds) {
  if (n < 2) return false;
  for (unsigned p : detail::small_primes()) {
    if (n == p) return true;
    if (mpz_divisible_ui_p(n.get_mpz_t(), p)) return false;
  }
  // n > 1000 from here on
  BigInt n_minus_1 = n - 1;
  BigInt d = n_minus_1;
  std::size_t s = 0;
  while (mpz_even_p(d.get_mpz_t())) {
    d /= 2;
    ++s;
  }
  for (int round = 0; round < rounds; ++round) {
    BigInt a = rand_range(rng, 2, n_minus_1);
    BigInt x = mod_exp(a, d, n);
    if (x == 1 || x == n_minus_1) continue;
    bool witness = true;
    for (std::size_t i = 1; i < s; ++i) {
      x = x * x % n;
      if (x == n_minus_1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

/// Primality check for public parameters; witnesses come from a fixed stream.
inline bool is_probable_prime(const BigInt& n) {
  Rng rng(0x5eca99e1d0000001ULL);
  return is_probable_prime(n, rng);
}

/// Random prime with exactly `bits` bits (top bit set).
inline BigInt gen_prime(std::size_t bits, Rng& rng) {
  if (bits < 4) throw Error(Errc::Parameter, "gen_prime needs at least 4 bits");
  BigInt top = BigInt(1) << static_cast<mp_bitcnt_t>(bits - 1);
  for (;;) {
    BigInt candidate = random_bits(rng, bits - 1) + top;
    mpz_setbit(candidate.get_mpz_t(), 0);
    if (is_probable_prime(candidate, rng)) return candidate;
  }
}

// Hex and byte conversions used by the record files and the wire codec.

inline std::string to_hex(const BigInt& x) { return x.get_str(16); }

inline BigInt from_hex(std::string_view text) {
  if (text.starts_with("0x") || text.starts_with("0X")) text.remove_prefix(2);
  if (text.empty()) throw Error(Errc::Config, "empty hex string");
  for (char c : text) {
    bool ok = (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f') || (c >= 'A' && c <= 'F');
    if (!ok) throw Error(Errc::Config, "invalid hex digit in '" + std::string(text) + "'");
  }
  return BigInt(std::string(text), 16);
}

/// Big-endian, left-padded to `width` bytes. x must fit.
inline void write_fixed(std::vector<std::uint8_t>& out, const BigInt& x, std::size_t width) {
  if (x < 0 || byte_length(x) > width) throw Error(Errc::Parameter, "integer does not fit field width");
  std::size_t start = out.size();
  out.resize(start + width, 0);
  std::size_t len = byte_length(x);
  if (len == 0) return;
  std::size_t written = 0;
  mpz_export(out.data() + start + (width - len), &written, 1, 1, 1, 0, x.get_mpz_t());
}

inline BigInt read_fixed(std::span<const std::uint8_t> bytes) {
  BigInt out = 0;
  if (!bytes.empty()) mpz_import(out.get_mpz_t(), bytes.size(), 1, 1, 1, 0, bytes.data());
  return out;
}

inline std::vector<std::uint8_t> to_bytes(const BigInt& x, std::size_t width) {
  std::vector<std::uint8_t> out;
  write_fixed(out, x, width);
  return out;
}

}  // namespace secagg
