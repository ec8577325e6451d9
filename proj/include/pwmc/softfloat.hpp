/*========================================================================
  Copyright (c) 2026 The pwmc Authors

  Permission is hereby granted, free of
  charge, to any person obtaining a copy of this software and
  associated documentation files (the "Software"), to deal in the
  Software without restriction, including without limitation the
  rights to use, copy, modify, merge, publish, distribute, sublicense,
  and/or sell copies of the Software, and to permit persons to whom
  the Software is furnished to do so, subject to the following
  conditions:

  The above copyright notice and this permission notice shall be
  included in all copies or substantial portions of the Software.

  THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND,
  EXPRESS OR IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF
  MERCHANTABILITY, FITNESS FOR A PARTICULAR PURPOSE AND
  NONINFRINGEMENT. IN NO EVENT SHALL THE AUTHORS OR COPYRIGHT HOLDERS
  BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER LIABILITY, WHETHER IN AN
  ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING FROM, OUT OF OR IN
  CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS IN THE
  SOFTWARE.
========================================================================*/

// Configurable-precision binary floating point.
//
// A SoftFloat holds (-1)^s * f * 2^e where f is a p-bit binary fraction with
// 1/2 <= f < 1 (or f = 0 for zero) and e is a signed 64-bit exponent. Every
// operation computes the exact result and rounds it once, in one of three
// modes, so results are identical to rounding the exact rational result.
//
// There are no subnormals, infinities or NaN; exponent overflow throws.

#pragma once

#include <algorithm>
#include <bit>
#include <cassert>
#include <cmath>
#include <compare>
#include <cstdint>
#include <string>

#include <boost/container/small_vector.hpp>
#include <gmpxx.h>

#include "pwmc/error.hpp"
#include "pwmc/rational.hpp"

namespace pwmc {

enum class Round { nearest_even, toward_neg_inf, toward_pos_inf };

inline const char* to_string(Round r) {
  switch (r) {
    case Round::nearest_even: return "nearest-even";
    case Round::toward_neg_inf: return "toward-neg-inf";
    case Round::toward_pos_inf: return "toward-pos-inf";
  }
  return "?";
}

namespace detail {

using Limb = std::uint64_t;
using u128 = unsigned __int128;
using i128 = __int128;

template <std::size_t N>
using LimbVec = boost::container::small_vector<Limb, N>;

// Scratch naturals: little-endian limbs, no leading zero limbs.
using Nat = LimbVec<10>;

inline void trim(Nat& x) {
  while (!x.empty() && x.back() == 0) x.pop_back();
}

inline std::size_t bit_length(const Nat& x) {
  if (x.empty()) return 0;
  return 64 * (x.size() - 1) + static_cast<std::size_t>(std::bit_width(x.back()));
}

inline bool test_bit(const Nat& x, std::size_t i) {
  const std::size_t w = i / 64;
  return w < x.size() && ((x[w] >> (i % 64)) & 1U) != 0;
}

/// True when any of bits [0, k) is set.
inline bool any_bits_below(const Nat& x, std::size_t k) {
  const std::size_t full = std::min(k / 64, x.size());
  for (std::size_t i = 0; i < full; ++i)
    if (x[i] != 0) return true;
  if (full < x.size() && k % 64 != 0) return (x[full] & ((Limb{1} << (k % 64)) - 1)) != 0;
  return false;
}

inline Nat shl(const Nat& x, std::size_t k) {
  if (x.empty()) return {};
  const std::size_t words = k / 64, bits = k % 64;
  Nat r(words, 0);
  r.reserve(words + x.size() + 1);
  Limb carry = 0;
  for (Limb v : x) {
    r.push_back(bits == 0 ? v : (v << bits) | carry);
    carry = bits == 0 ? 0 : v >> (64 - bits);
  }
  if (carry != 0) r.push_back(carry);
  return r;
}

inline Nat shr(const Nat& x, std::size_t k) {
  const std::size_t words = k / 64, bits = k % 64;
  if (words >= x.size()) return {};
  Nat r;
  r.reserve(x.size() - words);
  for (std::size_t i = words; i < x.size(); ++i) {
    Limb v = x[i] >> bits;
    if (bits != 0 && i + 1 < x.size()) v |= x[i + 1] << (64 - bits);
    r.push_back(v);
  }
  trim(r);
  return r;
}

inline int compare(const Nat& a, const Nat& b) {
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  for (std::size_t i = a.size(); i-- > 0;)
    if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
  return 0;
}

inline Nat add(const Nat& a, const Nat& b) {
  const Nat& lo = a.size() < b.size() ? a : b;
  const Nat& hi = a.size() < b.size() ? b : a;
  Nat r;
  r.reserve(hi.size() + 1);
  Limb carry = 0;
  for (std::size_t i = 0; i < hi.size(); ++i) {
    const u128 s = static_cast<u128>(hi[i]) + (i < lo.size() ? lo[i] : 0) + carry;
    r.push_back(static_cast<Limb>(s));
    carry = static_cast<Limb>(s >> 64);
  }
  if (carry != 0) r.push_back(carry);
  return r;
}

/// a - b, requires a >= b.
inline Nat sub(const Nat& a, const Nat& b) {
  Nat r;
  r.reserve(a.size());
  Limb borrow = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const Limb bi = i < b.size() ? b[i] : 0;
    const Limb d1 = a[i] - bi;
    const Limb b1 = a[i] < bi ? 1 : 0;
    const Limb d2 = d1 - borrow;
    const Limb b2 = d1 < borrow ? 1 : 0;
    r.push_back(d2);
    borrow = b1 | b2;
  }
  assert(borrow == 0);
  trim(r);
  return r;
}

inline Nat mul(const Nat& a, const Nat& b) {
  if (a.empty() || b.empty()) return {};
  Nat r(a.size() + b.size(), 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    Limb carry = 0;
    for (std::size_t j = 0; j < b.size(); ++j) {
      const u128 t = static_cast<u128>(a[i]) * b[j] + r[i + j] + carry;
      r[i + j] = static_cast<Limb>(t);
      carry = static_cast<Limb>(t >> 64);
    }
    r[i + b.size()] = carry;
  }
  trim(r);
  return r;
}

inline void increment(Nat& x) {
  for (Limb& v : x)
    if (++v != 0) return;
  x.push_back(1);
}

inline Nat nat_from_mpz(const mpz_class& z) {
  Nat r((mpz_sizeinbase(z.get_mpz_t(), 2) + 63) / 64, 0);
  std::size_t count = 0;
  mpz_export(r.data(), &count, -1, sizeof(Limb), 0, 0, z.get_mpz_t());
  r.resize(count);
  trim(r);
  return r;
}

template <class V>
mpz_class mpz_from_limbs(const V& x) {
  mpz_class z;
  if (!x.empty()) mpz_import(z.get_mpz_t(), x.size(), -1, sizeof(Limb), 0, 0, x.data());
  return z;
}

inline std::int64_t checked_exponent(i128 e) {
  if (e > INT64_MAX || e < INT64_MIN) throw RangeError("softfloat exponent overflow");
  return static_cast<std::int64_t>(e);
}

}  // namespace detail

inline constexpr int kMinPrecision = 2;
inline constexpr int kMaxPrecision = 1 << 16;

class SoftFloat {
 public:
  using Mantissa = detail::LimbVec<4>;

  /// Zero at precision p.
  explicit SoftFloat(int precision = 64) : prec_(check_precision(precision)) {}

  static int check_precision(int p) {
    if (p < kMinPrecision || p > kMaxPrecision)
      throw ConfigError("unsupported softfloat precision " + std::to_string(p));
    return p;
  }

  static SoftFloat from_rational(const Rational& v, int p, Round mode = Round::nearest_even);

  /// Builds +-m * 2^lsb_exp exactly; m must fit in p bits.
  static SoftFloat from_parts(bool negative, const mpz_class& m, std::int64_t lsb_exp, int p) {
    SoftFloat r(p);
    if (m == 0) return r;
    detail::Nat x = detail::nat_from_mpz(m);
    if (detail::bit_length(x) > static_cast<std::size_t>(p)) throw ConfigError("mantissa wider than precision");
    return round(p, negative, std::move(x), lsb_exp, false, Round::nearest_even);
  }

  int precision() const { return prec_; }
  bool is_zero() const { return mant_.empty(); }
  bool is_negative() const { return neg_; }
  int sign() const { return is_zero() ? 0 : neg_ ? -1 : 1; }

  /// e in (-1)^s * f * 2^e with 1/2 <= f < 1.
  std::int64_t exponent() const { return exp_; }

  /// The p-bit integer f * 2^p, little-endian limbs; empty for zero.
  const Mantissa& mantissa() const { return mant_; }

  Rational to_rational() const {
    if (is_zero()) return {};
    mpz_class m = detail::mpz_from_limbs(mant_);
    if (neg_) m = -m;
    const detail::i128 lsb = static_cast<detail::i128>(exp_) - prec_;
    if (lsb >= 0) {
      mpz_mul_2exp(m.get_mpz_t(), m.get_mpz_t(), static_cast<unsigned long>(lsb));
      return Rational(m, 1);
    }
    mpz_class den = 1;
    mpz_mul_2exp(den.get_mpz_t(), den.get_mpz_t(), static_cast<unsigned long>(-lsb));
    return Rational(m, den);
  }

  /// Approximate value; saturates outside the double range.
  double to_double() const {
    if (is_zero()) return 0.0;
    const int top_bits = prec_ % 64 == 0 ? 64 : prec_ % 64;
    const double f = std::ldexp(static_cast<double>(mant_.back()), -top_bits);
    const double v = std::ldexp(f, static_cast<int>(std::clamp<std::int64_t>(exp_, -100000, 100000)));
    return neg_ ? -v : v;
  }

  /// "+0x.c0p2": sign, fraction digits in hex with the point on the left, decimal exponent.
  std::string to_debug_string() const {
    static constexpr char hex[] = "0123456789abcdef";
    std::string out(1, neg_ ? '-' : '+');
    out += "0x.";
    if (is_zero()) return out + "0p0";
    const int hex_digits = (prec_ + 3) / 4;
    detail::Nat m(mant_.begin(), mant_.end());
    m = detail::shl(m, static_cast<std::size_t>(4 * hex_digits - prec_));
    for (int i = hex_digits - 1; i >= 0; --i) {
      const std::size_t bit = static_cast<std::size_t>(4 * i);
      const std::size_t w = bit / 64;
      const unsigned nib = w < m.size() ? static_cast<unsigned>((m[w] >> (bit % 64)) & 0xF) : 0;
      out += hex[nib];
    }
    return out + "p" + std::to_string(exp_);
  }

  SoftFloat operator-() const {
    SoftFloat r = *this;
    if (!r.is_zero()) r.neg_ = !r.neg_;
    return r;
  }

  friend SoftFloat add(const SoftFloat& a, const SoftFloat& b, Round mode);
  friend SoftFloat mul(const SoftFloat& a, const SoftFloat& b, Round mode);
  friend std::strong_ordering compare(const SoftFloat& a, const SoftFloat& b);

  friend SoftFloat operator+(const SoftFloat& a, const SoftFloat& b) { return add(a, b, Round::nearest_even); }
  friend SoftFloat operator*(const SoftFloat& a, const SoftFloat& b) { return mul(a, b, Round::nearest_even); }
  friend bool operator==(const SoftFloat& a, const SoftFloat& b) {
    return a.prec_ == b.prec_ && a.neg_ == b.neg_ && a.exp_ == b.exp_ && a.mant_ == b.mant_;
  }

 private:
  // Rounds the magnitude (x + s) * 2^lsb_exp, where s in [0, 1) is nonzero
  // exactly when `sticky` is set. A sticky input must have more than p bits.
  static SoftFloat round(int p, bool neg, detail::Nat x, detail::i128 lsb_exp, bool sticky, Round mode) {
    using namespace detail;
    trim(x);
    SoftFloat r(p);
    if (x.empty()) return r;
    const std::size_t width = static_cast<std::size_t>(p);
    std::size_t bl = bit_length(x);
    assert(!sticky || bl > width);
    if (bl <= width) {
      x = shl(x, width - bl);
      lsb_exp -= static_cast<i128>(width - bl);
    } else {
      const std::size_t k = bl - width;
      const bool round_bit = test_bit(x, k - 1);
      const bool rest = sticky || any_bits_below(x, k - 1);
      Nat q = shr(x, k);
      lsb_exp += static_cast<i128>(k);
      bool up = false;
      switch (mode) {
        case Round::nearest_even: up = round_bit && (rest || (q[0] & 1U) != 0); break;
        case Round::toward_neg_inf: up = neg && (round_bit || rest); break;
        case Round::toward_pos_inf: up = !neg && (round_bit || rest); break;
      }
      if (up) {
        increment(q);
        if (bit_length(q) > width) {
          q = shr(q, 1);
          lsb_exp += 1;
        }
      }
      x = std::move(q);
    }
    r.mant_.assign(x.begin(), x.end());
    r.exp_ = checked_exponent(lsb_exp + p);
    r.neg_ = neg;
    return r;
  }

  detail::Nat nat() const { return detail::Nat(mant_.begin(), mant_.end()); }
  detail::i128 lsb_exponent() const { return static_cast<detail::i128>(exp_) - prec_; }

  Mantissa mant_;
  std::int64_t exp_ = 0;
  int prec_;
  bool neg_ = false;
};

inline SoftFloat SoftFloat::from_rational(const Rational& v, int p, Round mode) {
  check_precision(p);
  if (v.is_zero()) return SoftFloat(p);
  mpz_class n = v.num();
  const bool neg = n < 0;
  if (neg) n = -n;
  const mpz_class& d = v.den();
  // Scale so the quotient carries at least p + 2 bits; the remainder becomes the sticky bit.
  const long diff = static_cast<long>(mpz_sizeinbase(n.get_mpz_t(), 2)) - static_cast<long>(mpz_sizeinbase(d.get_mpz_t(), 2));
  const long s = p + 3 - diff;
  mpz_class q, r, t;
  if (s >= 0) {
    mpz_mul_2exp(t.get_mpz_t(), n.get_mpz_t(), static_cast<unsigned long>(s));
    mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), t.get_mpz_t(), d.get_mpz_t());
  } else {
    mpz_mul_2exp(t.get_mpz_t(), d.get_mpz_t(), static_cast<unsigned long>(-s));
    mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), n.get_mpz_t(), t.get_mpz_t());
  }
  return round(p, neg, detail::nat_from_mpz(q), -static_cast<detail::i128>(s), r != 0, mode);
}

inline SoftFloat add(const SoftFloat& a, const SoftFloat& b, Round mode) {
  using namespace detail;
  if (a.prec_ != b.prec_) throw ConfigError("softfloat precision mismatch");
  const int p = a.prec_;
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  const bool a_big = a.exp_ > b.exp_ || (a.exp_ == b.exp_ && compare(a.nat(), b.nat()) >= 0);
  const SoftFloat& big = a_big ? a : b;
  const SoftFloat& small = a_big ? b : a;
  const i128 gap = static_cast<i128>(big.exp_) - small.exp_;
  const bool same_sign = big.neg_ == small.neg_;
  if (gap >= p + 2) {
    // |small| < ulp(big)/4: it only decides the rounding direction, so it
    // collapses into a sticky bit two places below big's last bit.
    Nat x = shl(big.nat(), 2);
    if (!same_sign) x = sub(x, Nat{1});
    return SoftFloat::round(p, big.neg_, std::move(x), big.lsb_exponent() - 2, true, mode);
  }
  const Nat xb = shl(big.nat(), static_cast<std::size_t>(gap));
  const Nat xs = small.nat();
  if (same_sign) return SoftFloat::round(p, big.neg_, add(xb, xs), small.lsb_exponent(), false, mode);
  const int c = compare(xb, xs);
  if (c == 0) return SoftFloat(p);
  return c > 0 ? SoftFloat::round(p, big.neg_, sub(xb, xs), small.lsb_exponent(), false, mode)
               : SoftFloat::round(p, small.neg_, sub(xs, xb), small.lsb_exponent(), false, mode);
}

inline SoftFloat mul(const SoftFloat& a, const SoftFloat& b, Round mode) {
  using namespace detail;
  if (a.prec_ != b.prec_) throw ConfigError("softfloat precision mismatch");
  if (a.is_zero() || b.is_zero()) return SoftFloat(a.prec_);
  return SoftFloat::round(a.prec_, a.neg_ != b.neg_, mul(a.nat(), b.nat()), a.lsb_exponent() + b.lsb_exponent(), false, mode);
}

inline std::strong_ordering compare(const SoftFloat& a, const SoftFloat& b) {
  if (a.prec_ != b.prec_) throw ConfigError("softfloat precision mismatch");
  const int sa = a.sign(), sb = b.sign();
  if (sa != sb) return sa <=> sb;
  if (sa == 0) return std::strong_ordering::equal;
  int mag = 0;
  if (a.exp_ != b.exp_) mag = a.exp_ < b.exp_ ? -1 : 1;
  else mag = detail::compare(a.nat(), b.nat());
  if (sa < 0) mag = -mag;
  return mag <=> 0;
}

/// The unit of relative rounding error, 2^-p.
struct Epsilon {
  int p;
  Rational value;

  double approx() const { return std::ldexp(1.0, -p); }
  /// Decimal digits guaranteed by one correctly rounded conversion: p * log10(2).
  double digit_floor() const { return p * detail::kLog10Of2; }
};

inline Epsilon sf_epsilon(int p) {
  SoftFloat::check_precision(p);
  return Epsilon{p, Rational::pow2(-p)};
}

}  // namespace pwmc
