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

#include <algorithm>
#include <string>

#include "oracles.hpp"
#include "pwmc/enumerate.hpp"
#include "pwmc/error.hpp"
#include "pwmc/generators.hpp"
#include "pwmc/nnf.hpp"
#include "pwmc/weights.hpp"

using pwmc::NnfDag;
using pwmc::NodeKind;
using pwmc::Rational;
using pwmc::VarSet;

namespace {

std::string parse_error(const std::string& text) {
  try {
    (void)pwmc::parse_nnf(text);
  } catch (const pwmc::ParseError& e) {
    return e.what();
  }
  return "";
}

/// Structural fingerprint that ignores node numbering: each reachable node rendered as a canonical string.
std::string shape(const NnfDag& d, pwmc::NodeId id) {
  const pwmc::NnfNode& n = d.node(id);
  switch (n.kind) {
    case NodeKind::literal: return std::to_string(n.lit);
    case NodeKind::constant_true: return "T";
    case NodeKind::constant_false: return "F";
    default: break;
  }
  std::vector<std::string> kids;
  for (auto c : n.children) kids.push_back(shape(d, c));
  std::string out = n.kind == NodeKind::conj ? "(and" : "(or" + std::to_string(n.decision_var);
  for (const auto& k : kids) out += " " + k;
  return out + ")";
}

}  // namespace

TEST(Nnf, ParseExamples) {
  const NnfDag t = pwmc::parse_nnf("nnf 1 0 0\nA 0\n");
  EXPECT_EQ(t.size(), 1U);
  EXPECT_EQ(t.node(t.root()).kind, NodeKind::constant_true);
  EXPECT_EQ(pwmc::model_enumerate(t, {}), Rational(1));

  const NnfDag taut = pwmc::parse_nnf("nnf 3 2 1\nL 1\nL -1\nO 1 2 0 1\n");
  EXPECT_EQ(taut.num_vars(), 1);
  EXPECT_EQ(pwmc::model_enumerate(taut, {}), Rational(2));

  const NnfDag conj = pwmc::parse_nnf("nnf 3 2 2\nL 1\nL 2\nA 2 0 1\n");
  EXPECT_EQ(pwmc::model_enumerate(conj, {}), Rational(1));

  const NnfDag f = pwmc::parse_nnf("c a comment\nnnf 1 0 3\n% another\nO 0 0\n");
  EXPECT_EQ(f.node(f.root()).kind, NodeKind::constant_false);
  EXPECT_EQ(pwmc::model_enumerate(f, {}), Rational(0));
}

TEST(Nnf, ParseErrorsCarryLineNumbers) {
  EXPECT_NE(parse_error("").find("header"), std::string::npos);
  EXPECT_NE(parse_error("nnf 2 1 1\nL 1\nA 1 5\n").find("line 3"), std::string::npos);
  EXPECT_NE(parse_error("nnf 2 1 1\nL 1\nA 1 5\n").find("dangling"), std::string::npos);
  EXPECT_NE(parse_error("nnf 2 2 1\nL 1\nA 2 0\n").find("child count"), std::string::npos);
  EXPECT_NE(parse_error("nnf 2 1 1\nL 2\nA 1 0\n").find("out of range"), std::string::npos);
  EXPECT_NE(parse_error("nnf 1 0 1\nX 1\n").find("unknown node type"), std::string::npos);
  EXPECT_NE(parse_error("nnf 2 1 1\nL 1\n").find("declares 2 nodes"), std::string::npos);
  EXPECT_NE(parse_error("nnf 2 3 1\nL 1\nA 1 0\n").find("edges"), std::string::npos);
  EXPECT_NE(parse_error("nnf 2 1 1\nL x\nA 1 0\n").find("line 2"), std::string::npos);
  EXPECT_NE(parse_error("nnf 3 3 1\nA 1 1\nA 1 0\nA 1 1\n").find("cycle"), std::string::npos);
}

TEST(Nnf, ForwardReferencesAreReordered) {
  // Line 0 refers to lines 1 and 2; the root is the last line.
  const NnfDag d = pwmc::parse_nnf("nnf 4 3 2\nA 2 1 2\nL 1\nL 2\nO 0 1 0\n");
  EXPECT_EQ(d.node(d.root()).kind, NodeKind::disj);
  for (pwmc::NodeId i = 0; i < d.size(); ++i) {
    for (auto c : d.node(i).children) EXPECT_LT(c, i);
  }
  EXPECT_EQ(pwmc::model_enumerate(d, {}), Rational(1));
}

TEST(Nnf, Varsets) {
  const NnfDag d = pwmc::parse_sexpr("(and 1 2 (or (and 3 4) (and -3 4)))");
  EXPECT_EQ(d.varset(0), VarSet{1});
  EXPECT_EQ(d.varset(d.root()), (VarSet{1, 2, 3, 4}));
  const auto tau = pwmc::gen_tau(3);
  EXPECT_EQ(tau.dag.varset(tau.dag.root()), (VarSet{1, 2, 3, 4}));
  const auto again = tau.dag.varsets();
  EXPECT_EQ(again, tau.dag.varsets());
}

TEST(Nnf, ValidateExamples) {
  const auto tau = pwmc::gen_tau(4);
  const auto r = pwmc::validate(tau.dag);
  EXPECT_TRUE(r.decomposable);
  EXPECT_TRUE(r.decision_form);
  EXPECT_TRUE(r.smooth);

  const auto bad = pwmc::validate(pwmc::parse_sexpr("(and 1 1)"));
  EXPECT_FALSE(bad.decomposable);
  ASSERT_TRUE(bad.first_non_decomposable.has_value());

  const auto rough = pwmc::validate(pwmc::parse_sexpr("(or (and 1 2) -1)"));
  EXPECT_FALSE(rough.smooth);
  EXPECT_TRUE(rough.decision_form);
  EXPECT_EQ(rough.decision_vars.back(), 1);

  const auto nondec = pwmc::validate(pwmc::parse_sexpr("(or 1 2)"));
  EXPECT_FALSE(nondec.decision_form);
  EXPECT_FALSE(nondec.is_decision_dnnf());
}

TEST(Nnf, SexprFormat) {
  const NnfDag d = pwmc::parse_sexpr("; comment\n(or (and 1 T) (and -1 F))");
  EXPECT_EQ(pwmc::model_enumerate(d, {}), Rational(1));
  EXPECT_THROW((void)pwmc::parse_sexpr("(and 1"), pwmc::ParseError);
  EXPECT_THROW((void)pwmc::parse_sexpr("(xor 1 2)"), pwmc::ParseError);
  EXPECT_EQ(pwmc::parse_formula("(and 1 2)").size(), pwmc::parse_sexpr("(and 1 2)").size());
}

TEST(Nnf, EnumerateExamples) {
  pwmc::WeightMap w;
  w.declare(1, Rational(1, 2));
  w.declare(-1, Rational(1, 2));
  w.declare(2, Rational(1, 4));
  w.declare(-2, Rational(3, 4));
  EXPECT_EQ(pwmc::model_enumerate(pwmc::parse_nnf("nnf 3 2 2\nL 1\nL 2\nA 2 0 1\n"), w), Rational(1, 8));
  const auto tau = pwmc::gen_tau(2);
  EXPECT_EQ(pwmc::model_enumerate(tau.dag, tau.weights), Rational::pow10(-18));
}

TEST(Nnf, EnumerateRefusesLargeFormulas) {
  NnfDag d;
  d.add_literal(26);
  EXPECT_THROW((void)pwmc::model_enumerate(d, {}), pwmc::ConfigError);
}

TEST(NnfProperty, RenderParseRoundTrip) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const NnfDag d = pwmc::gen_random_ddnnf(1 + static_cast<int>(seed % 12), 60, seed);
    const std::string text = pwmc::render_nnf(d);
    const NnfDag back = pwmc::parse_nnf(text);
    EXPECT_EQ(shape(back, back.root()), shape(d, d.root()));
    EXPECT_EQ(pwmc::render_nnf(back), text);
    EXPECT_EQ(back.num_vars(), d.num_vars());
  }
}

TEST(NnfProperty, VarsetsAreUnionsOfChildren) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const NnfDag d = pwmc::gen_random_ddnnf(10, 80, seed);
    const auto& vs = d.varsets();
    for (pwmc::NodeId i = 0; i < d.size(); ++i) {
      const auto& n = d.node(i);
      VarSet expect;
      if (n.kind == NodeKind::literal) expect.push_back(std::abs(n.lit));
      for (auto c : n.children) expect.insert(expect.end(), vs[c].begin(), vs[c].end());
      std::sort(expect.begin(), expect.end());
      expect.erase(std::unique(expect.begin(), expect.end()), expect.end());
      ASSERT_EQ(vs[i], expect);
    }
  }
}
