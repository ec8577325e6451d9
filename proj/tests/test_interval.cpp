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

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "pwmc/error.hpp"
#include "pwmc/generators.hpp"
#include "pwmc/interval.hpp"
#include "pwmc/metrics.hpp"

using pwmc::Interval;
using pwmc::Rational;
using pwmc::SoftFloat;

namespace {

Interval iv(const Rational& lo, const Rational& hi, int p = 64) {
  return Interval(SoftFloat::from_rational(lo, p), SoftFloat::from_rational(hi, p));
}

/// Random expression tree over + and *, evaluated exactly and over intervals side by side.
struct Expr {
  Rational exact;
  Interval enclosure;
};

Expr random_expr(pwmc::SplitMix64& rng, int p, int depth) {
  if (depth == 0 || rng.chance(1, 4)) {
    const Rational v = oracle::random_rational(rng, 64);
    return {v, Interval::from_rational(v, p)};
  }
  Expr a = random_expr(rng, p, depth - 1);
  Expr b = random_expr(rng, p, depth - 1);
  if (rng.coin()) return {a.exact + b.exact, a.enclosure + b.enclosure};
  return {a.exact * b.exact, a.enclosure * b.enclosure};
}

}  // namespace

TEST(Interval, FromRationalExamples) {
  const Interval half = Interval::from_rational(Rational(1, 2), 64);
  EXPECT_TRUE(half.is_point());
  EXPECT_EQ(half.lo().to_rational(), Rational(1, 2));
  const Interval third = Interval::from_rational(Rational(1, 3), 2);
  EXPECT_EQ(third.lo().to_rational(), Rational(1, 4));
  EXPECT_EQ(third.hi().to_rational(), Rational(3, 8));
  const Interval zero = Interval::from_rational(Rational(0), 64);
  EXPECT_TRUE(zero.is_point());
  EXPECT_TRUE(zero.lo().is_zero());
}

TEST(Interval, ConstructorChecks) {
  EXPECT_THROW(iv(Rational(2), Rational(1)), pwmc::ConfigError);
  EXPECT_THROW(Interval(SoftFloat::from_rational(1, 64), SoftFloat::from_rational(2, 128)), pwmc::ConfigError);
}

TEST(Interval, ArithmeticExamples) {
  const Interval s = iv(1, 1) + iv(2, 2);
  EXPECT_EQ(s, iv(3, 3));
  const Interval m = iv(-1, 2) * iv(3, 3);
  EXPECT_EQ(m.lo().to_rational(), Rational(-3));
  EXPECT_EQ(m.hi().to_rational(), Rational(6));
  const Interval ab = iv(Rational(1, 3), Rational(5, 7));
  EXPECT_EQ(ab + iv(0, 0), ab);
  const Interval nn = iv(-2, -1) * iv(-5, 3);
  EXPECT_EQ(nn.lo().to_rational(), Rational(-6));
  EXPECT_EQ(nn.hi().to_rational(), Rational(10));
}

TEST(Interval, ErrorExamples) {
  EXPECT_EQ(iv(1, 1).error(), Rational(0));
  EXPECT_EQ(iv(0, 0).error(), Rational(0));
  EXPECT_EQ(iv(-1, 2).error(), Rational(1));
  EXPECT_EQ(iv(0, 1).error(), Rational(1));
  // 999/1000 and 1001/1000 are not representable; the rounded enclosure still scores about 2/999.
  const Interval w(SoftFloat::from_rational(Rational(999, 1000), 64, pwmc::Round::toward_neg_inf),
                   SoftFloat::from_rational(Rational(1001, 1000), 64, pwmc::Round::toward_pos_inf));
  const Rational l = w.lo().to_rational(), h = w.hi().to_rational();
  EXPECT_EQ(w.error(), (h - l) / l);
  EXPECT_NEAR(w.decimal_precision(), -std::log10(2.0 / 999.0), 1e-6);
}

TEST(Interval, DecimalPrecisionExamples) {
  EXPECT_TRUE(std::isinf(iv(1, 1).decimal_precision()));
  EXPECT_EQ(iv(-1, 2).decimal_precision(), 0.0);
}

TEST(Interval, MidpointExamples) {
  EXPECT_EQ(iv(1, 1).midpoint().to_rational(), Rational(1));
  const Interval q(SoftFloat::from_rational(Rational(1, 4), 2), SoftFloat::from_rational(Rational(3, 8), 2));
  EXPECT_EQ(q.midpoint().to_rational(), oracle::round(Rational(5, 16), 2, pwmc::Round::nearest_even));
  const SoftFloat z = iv(-1, 1).midpoint();
  EXPECT_TRUE(z.is_zero());
  EXPECT_FALSE(z.is_negative());
}

TEST(Interval, Rendering) {
  EXPECT_EQ(iv(1, 1).to_string(3), "[1.00e+00, 1.00e+00] (>= inf digits)");
  EXPECT_EQ(iv(-1, 2).to_string(2), "[-1.0e+00, 2.0e+00] (>= 0 digits)");
}

TEST(IntervalProperty, RandomExpressionsAreEnclosed) {
  pwmc::SplitMix64 rng(41);
  for (int i = 0; i < 1500; ++i) {
    const int p = std::vector<int>{2, 8, 53, 64, 128}[rng.uniform(0, 4)];
    const Expr e = random_expr(rng, p, 6);
    ASSERT_TRUE(e.enclosure.contains(e.exact)) << "p=" << p;
    // Away from zero, any point of the interval is within the interval error.
    if (!e.enclosure.contains(0)) { ASSERT_LE(pwmc::approx_error(e.enclosure.midpoint().to_rational(), e.exact), e.enclosure.error()); }
    ASSERT_LE(e.enclosure.decimal_precision(), pwmc::decimal_precision(e.enclosure.midpoint().to_rational(), e.exact) + 1e-9);
  }
}

TEST(IntervalProperty, WideningPrecisionNeverLoosens) {
  pwmc::SplitMix64 rng(42);
  for (int i = 0; i < 300; ++i) {
    std::uint64_t seed = rng.next();
    Rational prev_err;
    bool first = true;
    for (int p : {64, 128, 256}) {
      pwmc::SplitMix64 same(seed);
      // Nonnegative leaves keep the enclosure away from zero.
      Interval acc = Interval::from_rational(1, p);
      Rational exact(1);
      for (int k = 0; k < 20; ++k) {
        const Rational v = oracle::random_rational(same, 64).abs();
        if (same.coin()) {
          acc = acc + Interval::from_rational(v, p);
          exact += v;
        } else {
          acc = acc * Interval::from_rational(v, p);
          exact *= v;
        }
      }
      ASSERT_TRUE(acc.contains(exact));
      if (!first) { ASSERT_LE(acc.error(), prev_err); }
      prev_err = acc.error();
      first = false;
    }
  }
}
