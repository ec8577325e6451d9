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

// Extended-range double: an IEEE binary64 value paired with a separate
// signed 64-bit exponent.
//
// A normalized Erd <d, e> is either <0.0, 0> or has 1.0 <= |d| < 2.0, so its
// value is d * 2^e. Hardware double arithmetic does the rounding; the
// exponent field only ever absorbs powers of two. Exponents are read and
// written by direct bit manipulation of the binary64 encoding.

#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <span>
#include <string>

#include <gmpxx.h>

#include "pwmc/error.hpp"
#include "pwmc/rational.hpp"

namespace pwmc {

namespace dbl {

inline constexpr int kExpOffset = 52;
inline constexpr std::uint64_t kExpMask = 0x7ff;
inline constexpr int kBias = 0x3ff;
inline constexpr std::uint64_t kFracMask = (std::uint64_t{1} << kExpOffset) - 1;
inline constexpr std::uint64_t kSignBit = std::uint64_t{1} << 63;

inline std::uint64_t bits(double x) { return std::bit_cast<std::uint64_t>(x); }

/// Biased exponent field.
inline int biased_exponent(double x) { return static_cast<int>((bits(x) >> kExpOffset) & kExpMask); }

/// Unbiased exponent of a normal double.
inline int exponent(double x) { return biased_exponent(x) - kBias; }

inline std::uint64_t fraction(double x) { return bits(x) & kFracMask; }

/// x with its unbiased exponent field replaced; x must be normal and exp in [-1022, 1023].
inline double replace_exponent(double x, int exp) {
  const std::uint64_t b = (bits(x) & (kSignBit | kFracMask)) | (static_cast<std::uint64_t>(exp + kBias) << kExpOffset);
  return std::bit_cast<double>(b);
}

}  // namespace dbl

class Erd {
 public:
  /// Addition short-circuits when exponents differ by more than this.
  static constexpr std::int64_t kAddGap = 54;
  /// Factors accumulated in a raw double before renormalizing a long product.
  static constexpr std::size_t kProductCadence = 512;

  constexpr Erd() = default;

  /// Normalizes <d, e>; throws RangeError for non-finite d or exponent overflow.
  static Erd normalize(double d, std::int64_t e) {
    if (!std::isfinite(d)) throw RangeError("erd: non-finite double");
    if (d == 0.0) return Erd();
    if (dbl::biased_exponent(d) == 0) {
      // Subnormal: scale into the normal range first.
      d = std::ldexp(d, 64);
      e = sub_checked(e, 64);
    }
    Erd r;
    r.e_ = add_checked(e, dbl::exponent(d));
    r.d_ = dbl::replace_exponent(d, 0);
    return r;
  }

  static Erd from_double(double d) { return normalize(d, 0); }

  /// Nearest (ties to even) 53-bit value of v.
  static Erd from_rational(const Rational& v);

  double fraction() const { return d_; }
  std::int64_t exponent() const { return e_; }
  bool is_zero() const { return d_ == 0.0; }
  bool is_negative() const { return d_ < 0.0; }

  Rational to_rational() const {
    if (is_zero()) return {};
    const std::uint64_t m = dbl::fraction(d_) | (std::uint64_t{1} << dbl::kExpOffset);
    mpz_class num(static_cast<unsigned long>(m));
    if (is_negative()) num = -num;
    const __int128 shift = static_cast<__int128>(e_) - dbl::kExpOffset;
    mpz_class scale = 1;
    mpz_mul_2exp(scale.get_mpz_t(), scale.get_mpz_t(), static_cast<unsigned long>(shift < 0 ? -shift : shift));
    return shift >= 0 ? Rational(num * scale, 1) : Rational(num, scale);
  }

  /// Value as a plain double, or +-inf / 0 when outside its range.
  double to_double() const { return is_zero() ? 0.0 : std::ldexp(d_, static_cast<int>(std::clamp<std::int64_t>(e_, -5000, 5000))); }

  /// "1.5*2^7"
  std::string to_string() const {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g*2^%lld", d_, static_cast<long long>(e_));
    return buf;
  }

  /// Approximate decimal "m x 10^k" form, e.g. "1.234e-1000"; k may exceed the double range.
  std::string to_decimal_string(int digits = 6) const {
    if (is_zero()) return "0";
    const long double l = std::log10(static_cast<long double>(std::fabs(d_))) + static_cast<long double>(e_) * 0.30102999566398119521L;
    const long double k = std::floor(l);
    long double m = std::pow(10.0L, l - k);
    if (m >= 9.9999999999L) m = 9.9999999999L;
    char buf[96];
    std::snprintf(buf, sizeof buf, "%s%.*Lfe%lld", is_negative() ? "-" : "", digits - 1, m, static_cast<long long>(k));
    return buf;
  }

  friend Erd operator*(const Erd& a, const Erd& b) {
    if (a.is_zero() || b.is_zero()) return Erd();
    return normalize(a.d_ * b.d_, add_checked(a.e_, b.e_));
  }

  friend Erd operator+(const Erd& a, const Erd& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    const __int128 gap = static_cast<__int128>(a.e_) - b.e_;
    if (gap > kAddGap) return a;
    if (-gap > kAddGap) return b;
    const double a_shifted = dbl::replace_exponent(a.d_, static_cast<int>(gap));
    return normalize(a_shifted + b.d_, b.e_);
  }

  friend bool operator==(const Erd& a, const Erd& b) { return a.d_ == b.d_ && a.e_ == b.e_; }

  /// Product of a sequence, renormalizing the running double every kProductCadence factors.
  static Erd product(std::span<const Erd> xs) {
    double d = 1.0;
    std::int64_t e = 0;
    std::size_t pending = 0;
    for (const Erd& x : xs) {
      if (x.is_zero()) return Erd();
      d *= x.d_;
      e = add_checked(e, x.e_);
      if (++pending == kProductCadence) {
        const Erd n = normalize(d, e);
        d = n.d_;
        e = n.e_;
        pending = 0;
      }
    }
    return normalize(d, e);
  }

 private:
  static std::int64_t add_checked(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_add_overflow(a, b, &r)) throw RangeError("erd exponent overflow");
    return r;
  }
  static std::int64_t sub_checked(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_sub_overflow(a, b, &r)) throw RangeError("erd exponent overflow");
    return r;
  }

  double d_ = 0.0;
  std::int64_t e_ = 0;
};

inline Erd Erd::from_rational(const Rational& v) {
  if (v.is_zero()) return Erd();
  mpz_class n = v.num();
  const bool neg = n < 0;
  if (neg) n = -n;
  const mpz_class& den = v.den();
  // q = floor(n * 2^s / den) with at least 55 bits; remainder is sticky.
  const long diff = static_cast<long>(mpz_sizeinbase(n.get_mpz_t(), 2)) - static_cast<long>(mpz_sizeinbase(den.get_mpz_t(), 2));
  const long s = 56 - diff;
  mpz_class q, r, t;
  if (s >= 0) {
    mpz_mul_2exp(t.get_mpz_t(), n.get_mpz_t(), static_cast<unsigned long>(s));
    mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), t.get_mpz_t(), den.get_mpz_t());
  } else {
    mpz_mul_2exp(t.get_mpz_t(), den.get_mpz_t(), static_cast<unsigned long>(-s));
    mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), n.get_mpz_t(), t.get_mpz_t());
  }
  const long drop = static_cast<long>(mpz_sizeinbase(q.get_mpz_t(), 2)) - 53;
  mpz_class kept, lost;
  mpz_fdiv_q_2exp(kept.get_mpz_t(), q.get_mpz_t(), static_cast<unsigned long>(drop));
  mpz_fdiv_r_2exp(lost.get_mpz_t(), q.get_mpz_t(), static_cast<unsigned long>(drop));
  mpz_class half = 1;
  mpz_mul_2exp(half.get_mpz_t(), half.get_mpz_t(), static_cast<unsigned long>(drop - 1));
  const int c = cmp(lost, half);
  if (c > 0 || (c == 0 && (r != 0 || mpz_odd_p(kept.get_mpz_t())))) kept += 1;
  // kept <= 2^53, so the conversion to double is exact.
  const double m = static_cast<double>(kept.get_ui());
  const Erd out = normalize(m, static_cast<std::int64_t>(drop - s));
  return neg ? Erd::normalize(-out.d_, out.e_) : out;
}

}  // namespace pwmc
