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
#include <set>

#include "oracles.hpp"
#include "pwmc/enumerate.hpp"
#include "pwmc/error.hpp"
#include "pwmc/evaluator.hpp"
#include "pwmc/generators.hpp"
#include "pwmc/metrics.hpp"
#include "pwmc/nnf.hpp"
#include "pwmc/softfloat.hpp"
#include "pwmc/weights.hpp"

using pwmc::Rational;
using pwmc::WeightFamily;

TEST(SplitMix64, ReferenceStream) {
  // First outputs for seed 0 from an independent run of the update rule.
  pwmc::SplitMix64 rng(0);
  EXPECT_EQ(rng.next(), 0xe220a8397b1dcdafULL);
  EXPECT_EQ(rng.next(), 0x6e789e6aa1b965f4ULL);
  EXPECT_EQ(rng.next(), 0x06c45d188009454fULL);
}

TEST(SplitMix64, UniformStaysInRange) {
  pwmc::SplitMix64 rng(5);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 2000; ++i) {
    const auto x = rng.uniform(3, 9);
    ASSERT_GE(x, 3U);
    ASSERT_LE(x, 9U);
    seen.insert(x);
  }
  EXPECT_EQ(seen.size(), 7U);
  EXPECT_EQ(rng.uniform(4, 4), 4U);
}

TEST(Generators, FamilyNames) {
  for (auto f : pwmc::kAllWeightFamilies) EXPECT_EQ(pwmc::parse_weight_family(pwmc::to_string(f)), f);
  EXPECT_EQ(pwmc::parse_weight_family("limits±"), WeightFamily::limits_mixed);
  EXPECT_EQ(pwmc::parse_weight_family("uniform+-"), WeightFamily::uniform_mixed);
  EXPECT_FALSE(pwmc::parse_weight_family("gaussian").has_value());
}

TEST(Generators, WeightFamilyPostconditions) {
  const Rational tiny = Rational::pow10(-9), huge = Rational::pow10(9);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    for (auto f : pwmc::kAllWeightFamilies) {
      const auto w = pwmc::gen_weights(f, 25, seed);
      EXPECT_EQ(w.declaration_count(), 50U);
      for (int x = 1; x <= 25; ++x) {
        const Rational a = w.weight(x), b = w.weight(-x);
        for (const Rational& v : {a, b}) {
          // Nine decimal places at most.
          EXPECT_EQ((v * huge).den(), 1) << v.to_string();
          if (f != WeightFamily::limits_mixed) {
            EXPECT_GE(v.abs(), tiny);
            EXPECT_LT(v.abs(), huge);
          } else {
            EXPECT_TRUE(v.abs() == tiny || v.abs() == huge);
          }
          if (pwmc::is_nonnegative_family(f)) { EXPECT_GT(v.sign(), 0); }
        }
        if (f == WeightFamily::uniform_pos) { EXPECT_EQ(a + b, Rational(1)); }
        if (f == WeightFamily::uniform_mixed) { EXPECT_LT(a.abs(), Rational(1)); }
        if (f == WeightFamily::limits_mixed) { EXPECT_FALSE((a + b).is_zero()); }
      }
    }
  }
}

TEST(Generators, MixedFamiliesProduceBothSigns) {
  for (auto f : {WeightFamily::uniform_mixed, WeightFamily::exponential_mixed, WeightFamily::limits_mixed}) {
    const auto w = pwmc::gen_weights(f, 40, 9);
    int neg = 0;
    for (int x = 1; x <= 40; ++x) neg += (w.weight(x).sign() < 0) + (w.weight(-x).sign() < 0);
    EXPECT_GT(neg, 10);
    EXPECT_LT(neg, 70);
  }
}

TEST(Generators, Deterministic) {
  for (auto f : pwmc::kAllWeightFamilies) {
    EXPECT_EQ(pwmc::render_weights(pwmc::gen_weights(f, 10, 77)), pwmc::render_weights(pwmc::gen_weights(f, 10, 77)));
    EXPECT_NE(pwmc::render_weights(pwmc::gen_weights(f, 10, 77)), pwmc::render_weights(pwmc::gen_weights(f, 10, 78)));
  }
  EXPECT_EQ(pwmc::render_nnf(pwmc::gen_random_ddnnf(12, 80, 4)), pwmc::render_nnf(pwmc::gen_random_ddnnf(12, 80, 4)));
}

TEST(Generators, TauCounts) {
  for (int n = 1; n <= 4; ++n) {
    const auto t = pwmc::gen_tau(n);
    EXPECT_TRUE(pwmc::validate(t.dag).is_decision_dnnf());
    EXPECT_EQ(pwmc::model_enumerate(t.dag, t.weights), Rational::pow10(-9 * n)) << n;
  }
  EXPECT_THROW(pwmc::gen_tau(0), pwmc::ConfigError);
}

TEST(Generators, ProductCounts) {
  const auto one = pwmc::gen_product(1, Rational(3, 7));
  EXPECT_EQ(one.dag.size(), 1U);
  EXPECT_EQ(pwmc::model_enumerate(one.dag, one.weights), Rational(3, 7));
  const auto two = pwmc::gen_product(2, Rational(1, 2));
  EXPECT_EQ(pwmc::model_enumerate(two.dag, two.weights), Rational(1, 4));
  const auto many = pwmc::gen_product(20, Rational(11, 10));
  const auto in = pwmc::Instance::make(many.dag, many.weights);
  EXPECT_EQ(pwmc::evaluate_rational(in.circuit).value, Rational(11, 10).pow(20));
  EXPECT_TRUE(in.pure_product());
}

TEST(Generators, ProductPrecisionMatchesDirectOracle) {
  // Direct oracle: the same left-to-right rounded product against the exact power.
  for (int n : {2, 10, 300}) {
    for (long k : {1L, 453L, 999L}) {
      const Rational w = Rational(1) + Rational(mpz_class(k), mpz_class(1000000000));
      for (int p : {53, 64}) {
        pwmc::SoftFloat acc = pwmc::SoftFloat::from_rational(w, p);
        const pwmc::SoftFloat x = acc;
        for (int i = 1; i < n; ++i) acc = acc * x;
        const double direct = pwmc::decimal_precision(acc.to_rational(), w.pow(n));
        EXPECT_NEAR(pwmc::product_precision(n, w, p), direct, 1e-6) << n << " " << k << " " << p;
      }
    }
  }
}

TEST(Generators, OptimizeProductPicksTheMinimum) {
  const auto best = pwmc::optimize_product(200, 1, 12, 53);
  for (int k = 1; k <= 12; ++k) {
    const Rational w = Rational(1) + Rational(mpz_class(k), mpz_class(1000000000));
    EXPECT_LE(best.digits, pwmc::product_precision(200, w, 53));
  }
  EXPECT_THROW(pwmc::optimize_product(10, 5, 4, 53), pwmc::ConfigError);
}

TEST(GeneratorsProperty, RandomDdnnfIsWellFormed) {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const int n = 1 + static_cast<int>(seed % 15);
    const std::size_t budget = 3 + seed % 80;
    const auto d = pwmc::gen_random_ddnnf(n, std::max<std::size_t>(budget, 4 * n), seed);
    const auto r = pwmc::validate(d);
    ASSERT_TRUE(r.decomposable);
    ASSERT_TRUE(r.decision_form);
    ASSERT_LE(d.size(), std::max<std::size_t>(budget, 4 * n));
    ASSERT_EQ(d.num_vars(), n);
  }
}

TEST(GeneratorsProperty, RandomInstancesCountLikeEnumeration) {
  for (std::uint64_t seed = 0; seed < 150; ++seed) {
    const auto f = pwmc::kAllWeightFamilies[seed % 5];
    const auto g = pwmc::gen_random_instance(f, 1 + static_cast<int>(seed % 12), 60, seed);
    const auto in = pwmc::Instance::make(g.dag, g.weights);
    ASSERT_EQ(pwmc::evaluate_rational(in.circuit).value, pwmc::model_enumerate(g.dag, g.weights));
  }
}

TEST(GeneratorsProperty, RandomCircuits) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const std::size_t ops = 1 + seed % 200;
    const auto rc = pwmc::gen_random_circuit(ops, seed);
    ASSERT_TRUE(rc.circuit.constants_nonnegative(rc.root));
    ASSERT_LE(rc.circuit.op_count(rc.root), ops);
    ASSERT_EQ(rc.circuit.root, rc.root);
    ASSERT_NE(rc.circuit.gate(rc.root).op, pwmc::GateOp::constant);
  }
}
