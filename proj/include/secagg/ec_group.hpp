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

// Short-Weierstrass curves y^2 = x^3 + ax + b over a prime field, affine
// coordinates, one modular inversion per group operation.

#pragma once

#include <string>
#include <utility>

#include "secagg/error.hpp"
#include "secagg/numeric.hpp"

namespace secagg {

inline constexpr std::string_view kPrimeFieldTag = "prime-field";

class Point {
 public:
  Point() = default;  // point at infinity
  Point(BigInt x, BigInt y) : infinity_(false), x_(std::move(x)), y_(std::move(y)) {}

  static Point infinity() { return Point(); }

  bool is_infinity() const { return infinity_; }
  const BigInt& x() const { return x_; }
  const BigInt& y() const { return y_; }

  friend bool operator==(const Point& lhs, const Point& rhs) {
    if (lhs.infinity_ || rhs.infinity_) return lhs.infinity_ == rhs.infinity_;
    return lhs.x_ == rhs.x_ && lhs.y_ == rhs.y_;
  }

 private:
  bool infinity_ = true;
  BigInt x_;
  BigInt y_;
};

/// Unvalidated curve parameters as read from a config file.
struct CurveRecord {
  std::string name;
  std::string fr = std::string(kPrimeFieldTag);
  BigInt q;
  BigInt a;
  BigInt b;
  BigInt tx;
  BigInt ty;
  BigInt order;
  BigInt cofactor = 1;
};

/// Validated domain parameters (q, FR, a, b, T, order, h). Only load_curve
/// creates these, so holding one means the checks below all passed.
class CurveParams {
 public:
  const std::string& name() const { return name_; }
  const BigInt& q() const { return q_; }
  const BigInt& a() const { return a_; }
  const BigInt& b() const { return b_; }
  const Point& base() const { return base_; }
  const BigInt& order() const { return order_; }
  const BigInt& cofactor() const { return cofactor_; }

  /// Byte width of a field element / of a scalar on the wire.
  std::size_t field_bytes() const { return byte_length(q_); }
  std::size_t scalar_bytes() const { return byte_length(order_); }

  CurveRecord record() const {
    return {name_, std::string(kPrimeFieldTag), q_, a_, b_, base_.x(), base_.y(), order_, cofactor_};
  }

 private:
  friend CurveParams load_curve(const CurveRecord& rec);
  CurveParams() = default;

  std::string name_;
  BigInt q_, a_, b_;
  Point base_;
  BigInt order_;
  BigInt cofactor_;
};

inline bool on_curve(const CurveParams& c, const Point& p) {
  if (p.is_infinity()) return true;
  const BigInt& q = c.q();
  if (p.x() < 0 || p.x() >= q || p.y() < 0 || p.y() >= q) return false;
  BigInt lhs = p.y() * p.y() % q;
  BigInt rhs = ((p.x() * p.x() % q + c.a()) * p.x() + c.b()) % q;
  return lhs == rhs;
}

inline void require_on_curve(const CurveParams& c, const Point& p) {
  if (!on_curve(c, p)) throw Error(Errc::OffCurve, "point is not on curve " + c.name());
}

namespace detail {

inline Point add_unchecked(const CurveParams& c, const Point& p1, const Point& p2) {
  if (p1.is_infinity()) return p2;
  if (p2.is_infinity()) return p1;
  const BigInt& q = c.q();
  BigInt lambda;
  if (p1.x() == p2.x()) {
    if (mod(p1.y() + p2.y(), q) == 0) return Point::infinity();
    // tangent: (3x^2 + a) / 2y
    lambda = mod((3 * p1.x() * p1.x() + c.a()) * mod_inv(2 * p1.y(), q), q);
  } else {
    lambda = mod((p2.y() - p1.y()) * mod_inv(mod(p2.x() - p1.x(), q), q), q);
  }
  BigInt x3 = mod(lambda * lambda - p1.x() - p2.x(), q);
  BigInt y3 = mod(lambda * (p1.x() - x3) - p1.y(), q);
  return {std::move(x3), std::move(y3)};
}

inline Point mul_unchecked(const CurveParams& c, const BigInt& k, const Point& p) {
  Point acc;
  for (std::size_t i = bit_length(k); i-- > 0;) {
    acc = add_unchecked(c, acc, acc);
    if (mpz_tstbit(k.get_mpz_t(), i)) acc = add_unchecked(c, acc, p);
  }
  return acc;
}

}  // namespace detail

inline Point point_add(const CurveParams& c, const Point& p1, const Point& p2) {
  require_on_curve(c, p1);
  require_on_curve(c, p2);
  return detail::add_unchecked(c, p1, p2);
}

inline Point negate(const CurveParams& c, const Point& p) {
  require_on_curve(c, p);
  if (p.is_infinity()) return p;
  return {p.x(), mod(c.q() - p.y(), c.q())};
}

/// k * P by double-and-add. With cofactor 1 every point has order dividing
/// the group order, so k is reduced mod order first.
inline Point scalar_mul(const CurveParams& c, const BigInt& k, const Point& p) {
  if (k < 0) throw Error(Errc::Parameter, "scalar must be nonnegative");
  require_on_curve(c, p);
  if (c.cofactor() == 1) return detail::mul_unchecked(c, mod(k, c.order()), p);
  return detail::mul_unchecked(c, k, p);
}

/// Subgroup membership (order * P == infinity). The strict validation path.
inline bool in_subgroup(const CurveParams& c, const Point& p) {
  return on_curve(c, p) && detail::mul_unchecked(c, c.order(), p).is_infinity();
}

inline BigInt x_mod_order(const CurveParams& c, const Point& p) {
  if (p.is_infinity()) throw Error(Errc::InfinityHasNoX, "the point at infinity has no x coordinate");
  return mod(p.x(), c.order());
}

inline CurveParams load_curve(const CurveRecord& rec) {
  if (rec.fr != kPrimeFieldTag) {
    throw Error(Errc::BadFieldTag, "field representation must be '" + std::string(kPrimeFieldTag) + "', got '" +
                                       rec.fr + "'");
  }
  if (rec.q < 5 || !is_probable_prime(rec.q)) throw Error(Errc::FieldNotPrime, "q is not an odd prime > 3");
  if (rec.a < 0 || rec.a >= rec.q || rec.b < 0 || rec.b >= rec.q) {
    throw Error(Errc::CoefficientRange, "a and b must lie in [0, q)");
  }
  BigInt disc = mod(4 * rec.a * rec.a * rec.a + 27 * rec.b * rec.b, rec.q);
  if (disc == 0) throw Error(Errc::SingularCurve, "4a^3 + 27b^2 = 0 mod q");
  if (rec.cofactor < 1) throw Error(Errc::BadCofactor, "cofactor must be a positive integer");

  CurveParams c;
  c.name_ = rec.name;
  c.q_ = rec.q;
  c.a_ = rec.a;
  c.b_ = rec.b;
  c.order_ = rec.order;
  c.cofactor_ = rec.cofactor;
  c.base_ = Point(rec.tx, rec.ty);
  if (!on_curve(c, c.base_)) throw Error(Errc::BaseOffCurve, "base point T is not on the curve");
  if (rec.order < 2 || !is_probable_prime(rec.order)) throw Error(Errc::CompositeOrder, "order of T is not prime");
  if (!detail::mul_unchecked(c, rec.order, c.base_).is_infinity()) {
    throw Error(Errc::BadBaseOrder, "order * T is not the point at infinity");
  }
  return c;
}

/// y^2 = x^3 + 2x + 2 over F_17, T = (5, 1) of order 19. Small enough to
/// enumerate, used by the exhaustive tests and `selftest`.
inline CurveRecord toy_curve_record() { return {"toy17", std::string(kPrimeFieldTag), 17, 2, 2, 5, 1, 19, 1}; }

}  // namespace secagg
