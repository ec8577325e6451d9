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

// Relative approximation error and decimal precision of an approximation
// against an exact value.

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

#include <gmpxx.h>

#include "pwmc/rational.hpp"

namespace pwmc {

/// |approx - exact| / |exact|; 0 when both are zero, 1 when only exact is zero.
inline Rational approx_error(const Rational& approx, const Rational& exact) {
  if (exact.is_zero()) return approx.is_zero() ? Rational() : Rational(1);
  return abs(approx - exact) / abs(exact);
}

/// max(0, -log10 approx_error); +inf on an exact match.
///
/// Works on cross-multiplied integers without reducing, so operands with
/// millions of bits stay cheap.
inline double decimal_precision(const Rational& approx, const Rational& exact) {
  if (approx == exact) return std::numeric_limits<double>::infinity();
  if (exact.is_zero()) return 0.0;
  // delta = |a_n e_d - e_n a_d| / |e_n a_d|
  mpz_class lhs = approx.num() * exact.den();
  mpz_class rhs = exact.num() * approx.den();
  mpz_class diff = lhs - rhs;
  const double digits = detail::log10_mpz(abs(rhs)) - detail::log10_mpz(abs(diff));
  return std::max(0.0, digits);
}

struct PrecisionScore {
  Rational delta;
  double digits = 0.0;

  bool exact() const { return delta.is_zero(); }
};

inline PrecisionScore score(const Rational& approx, const Rational& exact) {
  return {approx_error(approx, exact), decimal_precision(approx, exact)};
}

inline bool meets_target(double digits, double target) { return digits >= target; }
inline bool meets_target(const PrecisionScore& s, double target) { return meets_target(s.digits, target); }

}  // namespace pwmc
