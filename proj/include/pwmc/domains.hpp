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

// Numeric domains for circuit evaluation.

#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "pwmc/erd.hpp"
#include "pwmc/error.hpp"
#include "pwmc/interval.hpp"
#include "pwmc/rational.hpp"
#include "pwmc/softfloat.hpp"

namespace pwmc {

/// Exact arithmetic. A nonzero max_bits bounds the size of every value and
/// raises ResourceExhausted beyond it.
struct RationalDomain {
  using value_type = Rational;
  std::size_t max_bits = 0;

  std::string tag() const { return "rational"; }
  Rational from_rational(const Rational& v) const { return checked(v); }
  Rational add(const Rational& a, const Rational& b) const { return checked(a + b); }
  Rational mul(const Rational& a, const Rational& b) const { return checked(a * b); }

  /// Balanced product tree; exact, so the association only affects speed.
  Rational product(std::span<const Rational* const> xs) const {
    std::vector<Rational> level;
    level.reserve((xs.size() + 1) / 2);
    for (std::size_t i = 0; i + 1 < xs.size(); i += 2) level.push_back(mul(*xs[i], *xs[i + 1]));
    if (xs.size() % 2 == 1) level.push_back(*xs.back());
    while (level.size() > 1) {
      std::vector<Rational> next;
      next.reserve((level.size() + 1) / 2);
      for (std::size_t i = 0; i + 1 < level.size(); i += 2) next.push_back(mul(level[i], level[i + 1]));
      if (level.size() % 2 == 1) next.push_back(std::move(level.back()));
      level.swap(next);
    }
    return std::move(level.front());
  }

 private:
  Rational checked(Rational v) const {
    if (max_bits != 0 && v.bit_size() > max_bits) {
      throw ResourceExhausted("rational value exceeds " + std::to_string(max_bits) + " bits");
    }
    return v;
  }
};

struct SoftFloatDomain {
  using value_type = SoftFloat;
  int precision = 64;
  Round mode = Round::nearest_even;

  std::string tag() const { return "softfloat-" + std::to_string(precision); }
  SoftFloat from_rational(const Rational& v) const { return SoftFloat::from_rational(v, precision, mode); }
  SoftFloat add(const SoftFloat& a, const SoftFloat& b) const { return pwmc::add(a, b, mode); }
  SoftFloat mul(const SoftFloat& a, const SoftFloat& b) const { return pwmc::mul(a, b, mode); }
};

struct IntervalDomain {
  using value_type = Interval;
  int precision = 64;

  std::string tag() const { return "interval-" + std::to_string(precision); }
  Interval from_rational(const Rational& v) const { return Interval::from_rational(v, precision); }
  Interval add(const Interval& a, const Interval& b) const { return a + b; }
  Interval mul(const Interval& a, const Interval& b) const { return a * b; }
};

struct ErdDomain {
  using value_type = Erd;

  std::string tag() const { return "erd"; }
  Erd from_rational(const Rational& v) const { return Erd::from_rational(v); }
  Erd add(const Erd& a, const Erd& b) const { return a + b; }
  Erd mul(const Erd& a, const Erd& b) const { return a * b; }
  Erd product(std::span<const Erd* const> xs) const {
    std::vector<Erd> vals;
    vals.reserve(xs.size());
    for (const Erd* x : xs) vals.push_back(*x);
    return Erd::product(vals);
  }
};

/// Plain binary64. Results leaving the normal range are kept, not thrown,
/// and recorded in the overflow/underflow flags.
struct DoubleDomain {
  using value_type = double;
  bool overflow = false;
  bool underflow = false;

  std::string tag() const { return "double-53"; }
  double from_rational(const Rational& v) { return note(v.to_double(), !v.is_zero()); }
  double add(double a, double b) { return note(a + b, false); }
  double mul(double a, double b) { return note(a * b, a != 0.0 && b != 0.0); }

 private:
  double note(double r, bool nonzero_expected) {
    if (std::isinf(r)) overflow = true;
    if ((r == 0.0 && nonzero_expected) || (r != 0.0 && !std::isnormal(r) && std::isfinite(r))) underflow = true;
    return r;
  }
};

}  // namespace pwmc
