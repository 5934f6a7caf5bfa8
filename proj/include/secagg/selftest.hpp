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

// Exhaustive checks over the toy parameters, runnable from the CLI without
// the test suite. Each check is self-contained and reports pass/fail.

#pragma once

#include <chrono>
#include <functional>
#include <string>
#include <vector>

#include "secagg/agg_sig.hpp"
#include "secagg/ec_group.hpp"
#include "secagg/ou_phe.hpp"

namespace secagg {

struct SelftestResult {
  std::string name;
  bool passed = false;
  std::string detail;
  double millis = 0;
};

namespace selftest {

/// All affine solutions over the toy field plus infinity.
inline std::vector<Point> enumerate_points(const CurveParams& c) {
  std::vector<Point> pts{Point::infinity()};
  for (unsigned long x = 0; x < c.q(); ++x) {
    for (unsigned long y = 0; y < c.q(); ++y) {
      Point p(x, y);
      if (on_curve(c, p)) pts.push_back(p);
    }
  }
  return pts;
}

inline std::string check_points(const CurveParams& c) {
  auto pts = enumerate_points(c);
  if (pts.size() != 19) return "expected 19 group elements, found " + std::to_string(pts.size());
  if (!(scalar_mul(c, 2, c.base()) == Point(6, 3))) return "2T != (6,3)";
  if (!scalar_mul(c, 19, c.base()).is_infinity()) return "19T != infinity";
  // T generates the whole group
  for (const auto& p : pts) {
    bool found = false;
    for (unsigned k = 0; k < 19 && !found; ++k) found = scalar_mul(c, k, c.base()) == p;
    if (!found) return "a point is not a multiple of T";
  }
  return {};
}

inline std::string check_group_law(const CurveParams& c) {
  auto pts = enumerate_points(c);
  for (const auto& p : pts) {
    if (!(point_add(c, p, Point::infinity()) == p)) return "identity law fails";
    if (!point_add(c, p, negate(c, p)).is_infinity()) return "inverse law fails";
    for (const auto& q : pts) {
      Point pq = point_add(c, p, q);
      if (!on_curve(c, pq)) return "sum left the curve";
      if (!(pq == point_add(c, q, p))) return "addition is not commutative";
      for (const auto& r : pts) {
        if (!(point_add(c, pq, r) == point_add(c, p, point_add(c, q, r)))) return "addition is not associative";
      }
    }
  }
  return {};
}

/// Every admissible (z1, z2, k, m1, m2): the summed signature verifies under
/// the summed key. Returns the number of tuples checked through `checked`.
inline std::string check_aggregate_completeness(const CurveParams& c, std::size_t& checked) {
  const unsigned long order = c.order().get_ui();
  checked = 0;
  std::vector<VerifyKey> keys(order);
  for (unsigned long z = 1; z < order; ++z) keys[z] = {scalar_mul(c, z, c.base())};
  for (unsigned long k = 1; k < order; ++k) {
    EpochNonce nonce;
    try {
      nonce = epoch_nonce_from_scalar(c, 1, k);
    } catch (const Error&) {
      continue;  // r_x = 0
    }
    for (unsigned long z1 = 1; z1 < order; ++z1) {
      for (unsigned long z2 = 1; z2 < order; ++z2) {
        if ((z1 + z2) % order == 0) continue;  // keys cancel
        std::vector<VerifyKey> pair{keys[z1], keys[z2]};
        VerifyKey sum = combine_keys(c, pair);
        for (unsigned long m1 = 0; m1 < order; ++m1) {
          BigInt s1;
          try {
            s1 = sign(c, {z1}, m1, nonce);
          } catch (const Error&) {
            continue;
          }
          for (unsigned long m2 = 0; m2 < order; ++m2) {
            BigInt s2;
            try {
              s2 = sign(c, {z2}, m2, nonce);
            } catch (const Error&) {
              continue;
            }
            if ((s1 + s2) % order == 0) continue;
            std::vector<BigInt> sigs{s1, s2};
            AggSignature agg = combine_sigs(c, std::span<const BigInt>(sigs));
            ++checked;
            if (!verify(c, (m1 + m2) % order, agg, sum, nonce.r_x)) {
              return "reject at z1=" + std::to_string(z1) + " z2=" + std::to_string(z2) + " k=" + std::to_string(k) +
                     " m1=" + std::to_string(m1) + " m2=" + std::to_string(m2);
            }
          }
        }
      }
    }
  }
  return {};
}

inline std::string check_toy_ou() {
  OuKeyPair keys = OuKeyPair::from_factors(11, 7, 2, BigInt(11));
  if (keys.pk.n() != 847) return "n != 847";
  if (keys.sk.g_p() != 56) return "g_p != 56";
  if (keys.sk.l_inv() != 9) return "L(g_p)^-1 != 9";
  Rng rng(7);
  OuCiphertext sum = ou_add(keys.pk, ou_encrypt(keys.pk, 3, rng), ou_encrypt(keys.pk, 4, rng));
  if (ou_decrypt(keys.sk, sum) != 7) return "Dec(Enc(3) Enc(4)) != 7";
  for (unsigned long a = 0; a < 11; ++a) {
    for (unsigned long b = 0; a + b < 11; ++b) {
      if (ou_decrypt(keys.sk, ou_add(keys.pk, ou_encrypt(keys.pk, a, rng), ou_encrypt(keys.pk, b, rng))) != a + b) {
        return "homomorphism fails at " + std::to_string(a) + " + " + std::to_string(b);
      }
    }
  }
  return {};
}

}  // namespace selftest

inline std::vector<SelftestResult> run_selftest() {
  const CurveParams toy = load_curve(toy_curve_record());
  std::vector<SelftestResult> results;
  auto run = [&results](std::string name, const std::function<std::string(std::string&)>& check) {
    auto t0 = std::chrono::steady_clock::now();
    std::string info;
    std::string failure = check(info);
    auto dt = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0);
    results.push_back({std::move(name), failure.empty(), failure.empty() ? info : failure, dt.count()});
  };
  run("toy curve points and multiples", [&](std::string& info) {
    info = "19 elements, 2T = (6,3), 19T = inf";
    return selftest::check_points(toy);
  });
  run("toy curve group law (19^3 triples)", [&](std::string& info) {
    info = "closure, identity, inverse, commutativity, associativity";
    return selftest::check_group_law(toy);
  });
  run("toy aggregate signature completeness", [&](std::string& info) {
    std::size_t checked = 0;
    std::string failure = selftest::check_aggregate_completeness(toy, checked);
    info = std::to_string(checked) + " tuples accepted";
    return failure;
  });
  run("toy Okamoto-Uchiyama worked example", [&](std::string& info) {
    info = "p=11 q=7 g=2: g_p=56, L^-1=9, 3+4=7";
    return selftest::check_toy_ou();
  });
  return results;
}

}  // namespace secagg
