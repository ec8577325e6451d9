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

// Closed intervals [lo, hi] with SoftFloat endpoints and outward rounding.

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "pwmc/error.hpp"
#include "pwmc/rational.hpp"
#include "pwmc/softfloat.hpp"

namespace pwmc {

class Interval {
 public:
  explicit Interval(int p = 64) : lo_(p), hi_(p) {}

  /// [lo, hi]; both endpoints must share a precision and satisfy lo <= hi.
  Interval(SoftFloat lo, SoftFloat hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
    if (lo_.precision() != hi_.precision()) throw ConfigError("interval endpoints differ in precision");
    if (compare(lo_, hi_) > 0) throw ConfigError("interval with lo > hi");
  }

  static Interval from_rational(const Rational& v, int p) {
    return Interval(SoftFloat::from_rational(v, p, Round::toward_neg_inf), SoftFloat::from_rational(v, p, Round::toward_pos_inf));
  }

  const SoftFloat& lo() const { return lo_; }
  const SoftFloat& hi() const { return hi_; }
  int precision() const { return lo_.precision(); }
  bool is_point() const { return lo_ == hi_; }

  bool contains(const Rational& v) const { return lo_.to_rational() <= v && v <= hi_.to_rational(); }

  /// Relative width: 0 for [0,0], 1 whenever 0 lies in [lo, hi] with lo < hi.
  Rational error() const {
    if (is_point()) return {};
    if (lo_.sign() <= 0 && hi_.sign() >= 0) return 1;
    const Rational l = lo_.to_rational();
    const Rational h = hi_.to_rational();
    return (h - l) / std::min(abs(l), abs(h));
  }

  /// max(0, -log10 error()); +inf for a point interval.
  double decimal_precision() const {
    const Rational err = error();
    if (err.is_zero()) return std::numeric_limits<double>::infinity();
    return std::max(0.0, -err.log10_abs());
  }

  /// Nearest SoftFloat to (lo + hi) / 2; never -0.
  SoftFloat midpoint() const {
    return SoftFloat::from_rational((lo_.to_rational() + hi_.to_rational()) / Rational(2), precision(), Round::nearest_even);
  }

  /// "[lo, hi] (>= k digits)" with endpoints in scientific notation.
  std::string to_string(int sig = 6) const {
    const double k = decimal_precision();
    std::string digits = std::isinf(k) ? "inf" : std::to_string(static_cast<long>(std::floor(k)));
    return "[" + lo_.to_rational().to_scientific(sig) + ", " + hi_.to_rational().to_scientific(sig) + "] (>= " + digits + " digits)";
  }

  friend Interval operator+(const Interval& a, const Interval& b) {
    return Interval(add(a.lo_, b.lo_, Round::toward_neg_inf), add(a.hi_, b.hi_, Round::toward_pos_inf));
  }

  friend Interval operator*(const Interval& a, const Interval& b) {
    if (a.lo_.sign() >= 0 && b.lo_.sign() >= 0) {
      return Interval(mul(a.lo_, b.lo_, Round::toward_neg_inf), mul(a.hi_, b.hi_, Round::toward_pos_inf));
    }
    const SoftFloat* xs[2] = {&a.lo_, &a.hi_};
    const SoftFloat* ys[2] = {&b.lo_, &b.hi_};
    SoftFloat lo = mul(a.lo_, b.lo_, Round::toward_neg_inf);
    SoftFloat hi = mul(a.lo_, b.lo_, Round::toward_pos_inf);
    for (const SoftFloat* x : xs) {
      for (const SoftFloat* y : ys) {
        SoftFloat d = mul(*x, *y, Round::toward_neg_inf);
        SoftFloat u = mul(*x, *y, Round::toward_pos_inf);
        if (compare(d, lo) < 0) lo = std::move(d);
        if (compare(u, hi) > 0) hi = std::move(u);
      }
    }
    return Interval(std::move(lo), std::move(hi));
  }

  friend bool operator==(const Interval& a, const Interval& b) { return a.lo_ == b.lo_ && a.hi_ == b.hi_; }

 private:
  SoftFloat lo_;
  SoftFloat hi_;
};

}  // namespace pwmc
