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

// Exact rational arithmetic.
//
// Rational is a thin value type over GMP's mpq_class that keeps every value
// in canonical form (positive denominator, reduced fraction, zero as 0/1).
// It is the ground-truth number type: weights are parsed into it, the
// rescaling plan is computed in it, and every approximate result is scored
// against a Rational oracle.

#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>

#include <gmpxx.h>

#include "pwmc/error.hpp"

namespace pwmc {

namespace detail {

inline constexpr double kLog10Of2 = 0.30102999566398119521373889472449302676818988146211;

/// log10 of a positive integer, accurate to ~1e-15 regardless of its size.
inline double log10_mpz(const mpz_class& z) {
  long exp2 = 0;
  const double mant = mpz_get_d_2exp(&exp2, z.get_mpz_t());
  return std::log10(mant) + static_cast<double>(exp2) * kLog10Of2;
}

inline mpz_class pow10_mpz(unsigned long k) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), 10, k);
  return r;
}

}  // namespace detail

class Rational {
 public:
  Rational() = default;
  Rational(long v) : v_(v) {}  // NOLINT: implicit on purpose, integers are rationals

  /// num/den, reduced. Throws ConfigError when den == 0.
  Rational(const mpz_class& num, const mpz_class& den) {
    if (den == 0) throw ConfigError("rational with zero denominator");
    v_ = mpq_class(num, den);
    v_.canonicalize();
  }

  explicit Rational(const mpq_class& q) : v_(q) { v_.canonicalize(); }

  /// Exact value of a decimal literal: [+-] digits [. digits] [(e|E) [+-] digits].
  static Rational from_decimal(std::string_view text);

  /// Accepts either a decimal literal or an integer fraction "a/b".
  static Rational parse(std::string_view text);

  /// 2^k for any 64-bit k.
  static Rational pow2(std::int64_t k) {
    mpz_class one = 1;
    mpz_class big;
    const unsigned long mag = k < 0 ? static_cast<unsigned long>(-(k + 1)) + 1 : static_cast<unsigned long>(k);
    mpz_mul_2exp(big.get_mpz_t(), one.get_mpz_t(), mag);
    return k < 0 ? from_coprime(1, big) : from_coprime(big, 1);
  }

  static Rational pow10(std::int64_t k) {
    const unsigned long mag = static_cast<unsigned long>(k < 0 ? -k : k);
    return k < 0 ? from_coprime(1, detail::pow10_mpz(mag)) : from_coprime(detail::pow10_mpz(mag), 1);
  }

  const mpz_class& num() const { return v_.get_num(); }
  const mpz_class& den() const { return v_.get_den(); }
  const mpq_class& mpq() const { return v_; }

  int sign() const { return sgn(v_); }
  bool is_zero() const { return sign() == 0; }

  /// True when the stored representation is reduced with positive denominator.
  bool is_canonical() const {
    if (den() <= 0) return false;
    if (num() == 0) return den() == 1;
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), num().get_mpz_t(), den().get_mpz_t());
    return g == 1;
  }

  /// Bits needed to store numerator and denominator together.
  std::size_t bit_size() const {
    return mpz_sizeinbase(num().get_mpz_t(), 2) + mpz_sizeinbase(den().get_mpz_t(), 2);
  }

  Rational abs() const { return sign() < 0 ? -*this : *this; }

  /// this^n. Powers of a reduced fraction stay reduced, so no gcd is taken.
  Rational pow(unsigned long n) const {
    mpz_class pn, pd;
    mpz_pow_ui(pn.get_mpz_t(), num().get_mpz_t(), n);
    mpz_pow_ui(pd.get_mpz_t(), den().get_mpz_t(), n);
    return from_coprime(pn, pd);
  }

  /// log10|v|; -inf for zero.
  double log10_abs() const {
    if (is_zero()) return -std::numeric_limits<double>::infinity();
    mpz_class a = num();
    if (a < 0) a = -a;
    return detail::log10_mpz(a) - detail::log10_mpz(den());
  }

  /// Nearest double for values in the normal range; saturates to inf/0 outside it.
  double to_double() const;

  /// "p/q", or "p" when the denominator is 1.
  std::string to_string() const {
    return den() == 1 ? num().get_str() : num().get_str() + "/" + den().get_str();
  }

  /// Decimal with exactly `frac_digits` digits after the point, rounded half to even.
  std::string to_fixed(int frac_digits) const;

  /// Scientific notation with `sig_digits` significant digits, e.g. "1.00e-27".
  std::string to_scientific(int sig_digits) const;

  friend Rational operator+(const Rational& a, const Rational& b) { return Rational(mpq_class(a.v_ + b.v_), Canonical{}); }
  friend Rational operator-(const Rational& a, const Rational& b) { return Rational(mpq_class(a.v_ - b.v_), Canonical{}); }
  friend Rational operator*(const Rational& a, const Rational& b) { return Rational(mpq_class(a.v_ * b.v_), Canonical{}); }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.is_zero()) throw ConfigError("rational division by zero");
    return Rational(mpq_class(a.v_ / b.v_), Canonical{});
  }
  Rational operator-() const { return Rational(mpq_class(-v_), Canonical{}); }
  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }

  friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const int c = cmp(a.v_, b.v_);
    return c < 0 ? std::strong_ordering::less : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
  }

 private:
  struct Canonical {};
  // GMP's mpq arithmetic already returns canonical results.
  Rational(mpq_class q, Canonical) : v_(std::move(q)) {}

  static Rational from_coprime(const mpz_class& n, const mpz_class& d) {
    mpq_class q;
    q.get_num() = n;
    q.get_den() = d;
    return Rational(std::move(q), Canonical{});
  }

  mpq_class v_;
};

inline Rational abs(const Rational& r) { return r.abs(); }

namespace detail {

/// Round a nonnegative rational to the nearest integer, ties to even.
inline mpz_class round_half_even(const Rational& r) {
  mpz_class q, rem;
  mpz_fdiv_qr(q.get_mpz_t(), rem.get_mpz_t(), r.num().get_mpz_t(), r.den().get_mpz_t());
  const int c = cmp(mpz_class(rem * 2), r.den());
  if (c > 0 || (c == 0 && mpz_odd_p(q.get_mpz_t()))) q += 1;
  return q;
}

inline bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  return true;
}

}  // namespace detail

inline Rational Rational::from_decimal(std::string_view text) {
  const auto fail = [&]() -> ParseError { return ParseError("malformed decimal literal '" + std::string(text) + "'"); };
  std::string_view s = text;
  bool negative = false;
  if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  long exponent = 0;
  if (const auto epos = s.find_first_of("eE"); epos != std::string_view::npos) {
    std::string_view es = s.substr(epos + 1);
    s = s.substr(0, epos);
    bool eneg = false;
    if (!es.empty() && (es.front() == '+' || es.front() == '-')) {
      eneg = es.front() == '-';
      es.remove_prefix(1);
    }
    if (!detail::all_digits(es) || es.size() > 8) throw fail();
    exponent = std::stol(std::string(es));
    if (eneg) exponent = -exponent;
  }
  std::string_view int_part = s, frac_part;
  if (const auto dot = s.find('.'); dot != std::string_view::npos) {
    int_part = s.substr(0, dot);
    frac_part = s.substr(dot + 1);
    if (!frac_part.empty() && !detail::all_digits(frac_part)) throw fail();
  }
  if (!int_part.empty() && !detail::all_digits(int_part)) throw fail();
  if (int_part.empty() && frac_part.empty()) throw fail();

  std::string digits = std::string(int_part) + std::string(frac_part);
  mpz_class mantissa(digits.empty() ? std::string("0") : digits, 10);
  if (negative) mantissa = -mantissa;
  const long scale = exponent - static_cast<long>(frac_part.size());
  if (scale >= 0) return Rational(mantissa * detail::pow10_mpz(static_cast<unsigned long>(scale)), 1);
  return Rational(mantissa, detail::pow10_mpz(static_cast<unsigned long>(-scale)));
}

inline Rational Rational::parse(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return from_decimal(text);
  std::string_view a = text.substr(0, slash), b = text.substr(slash + 1);
  std::string_view a_digits = a;
  if (!a_digits.empty() && (a_digits.front() == '-' || a_digits.front() == '+')) a_digits.remove_prefix(1);
  if (!detail::all_digits(a_digits) || !detail::all_digits(b))
    throw ParseError("malformed fraction '" + std::string(text) + "'");
  std::string as(a);
  if (as.front() == '+') as.erase(0, 1);
  mpz_class den(std::string(b), 10);
  if (den == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
  return Rational(mpz_class(as, 10), den);
}

inline double Rational::to_double() const {
  if (is_zero()) return 0.0;
  mpz_class n = num();
  const bool neg = n < 0;
  if (neg) n = -n;
  // q = floor(n * 2^s / d) carries at least 55 significant bits.
  const long bits = static_cast<long>(mpz_sizeinbase(n.get_mpz_t(), 2)) - static_cast<long>(mpz_sizeinbase(den().get_mpz_t(), 2));
  const long s = 56 - bits;
  mpz_class q, r;
  if (s >= 0) {
    mpz_class shifted;
    mpz_mul_2exp(shifted.get_mpz_t(), n.get_mpz_t(), static_cast<unsigned long>(s));
    mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), shifted.get_mpz_t(), den().get_mpz_t());
  } else {
    mpz_class shifted;
    mpz_mul_2exp(shifted.get_mpz_t(), den().get_mpz_t(), static_cast<unsigned long>(-s));
    mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), n.get_mpz_t(), shifted.get_mpz_t());
  }
  // Fold the remainder into a sticky bit below the quotient so that the
  // hardware conversion (round to nearest even) sees the correct tie state.
  mpz_class qs = q * 2 + (r != 0 ? 1 : 0);
  const long bl = static_cast<long>(mpz_sizeinbase(qs.get_mpz_t(), 2));
  const long drop = bl - 62;
  long exp2 = -s - 1;
  if (drop > 0) {
    mpz_class lost;
    mpz_fdiv_r_2exp(lost.get_mpz_t(), qs.get_mpz_t(), static_cast<unsigned long>(drop));
    mpz_fdiv_q_2exp(qs.get_mpz_t(), qs.get_mpz_t(), static_cast<unsigned long>(drop));
    if (lost != 0) qs |= 1;
    exp2 += drop;
  }
  const double mant = static_cast<double>(qs.get_ui());  // < 2^62, rounds once
  const double v = std::ldexp(mant, static_cast<int>(std::clamp<long>(exp2, -100000, 100000)));
  return neg ? -v : v;
}

inline std::string Rational::to_fixed(int frac_digits) const {
  if (frac_digits < 0) frac_digits = 0;
  const Rational scaled = abs() * pow10(frac_digits);
  std::string digits = detail::round_half_even(scaled).get_str();
  if (static_cast<int>(digits.size()) <= frac_digits) digits.insert(0, static_cast<std::size_t>(frac_digits) - digits.size() + 1, '0');
  std::string out = (sign() < 0 && digits.find_first_not_of('0') != std::string::npos) ? "-" : "";
  out += digits.substr(0, digits.size() - static_cast<std::size_t>(frac_digits));
  if (frac_digits > 0) out += "." + digits.substr(digits.size() - static_cast<std::size_t>(frac_digits));
  return out;
}

inline std::string Rational::to_scientific(int sig_digits) const {
  if (sig_digits < 1) sig_digits = 1;
  std::int64_t k = 0;
  mpz_class n;
  if (is_zero()) {
    n = 0;
  } else {
    const Rational a = abs();
    k = static_cast<std::int64_t>(std::floor(log10_abs()));
    // The estimate can be off by one near exact powers of ten.
    while (a < pow10(k)) --k;
    while (a >= pow10(k + 1)) ++k;
    n = detail::round_half_even(a * pow10(sig_digits - 1 - k));
    if (n == detail::pow10_mpz(static_cast<unsigned long>(sig_digits))) {
      n /= 10;
      ++k;
    }
  }
  std::string digits = n.get_str();
  if (static_cast<int>(digits.size()) < sig_digits) digits.insert(0, static_cast<std::size_t>(sig_digits) - digits.size(), '0');
  std::string out = sign() < 0 ? "-" : "";
  out += digits.substr(0, 1);
  if (sig_digits > 1) out += "." + digits.substr(1);
  const std::int64_t ak = k < 0 ? -k : k;
  out += (k < 0 ? "e-" : "e+");
  if (ak < 10) out += "0";
  out += std::to_string(ak);
  return out;
}

}  // namespace pwmc
