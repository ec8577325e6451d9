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

// Literal weights and the per-variable evaluation plan.
//
// A plan fixes, for every variable x, the sum s(x) = w(x) + w(-x) and one of
// three treatments: s = 1 needs nothing, s = 0 keeps the raw weights and
// makes every smoothing factor for x vanish, and any other s rescales both
// literals to W = w / s so that W(x) + W(-x) = 1 and the count is multiplied
// by s(x) at the end. All plan quantities are exact.

#pragma once

#include <algorithm>
#include <cstdlib>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pwmc/error.hpp"
#include "pwmc/nnf.hpp"
#include "pwmc/rational.hpp"

namespace pwmc {

class WeightMap {
 public:
  /// Declares w(lit). Throws ConfigError when lit is 0 or already declared.
  void declare(int lit, Rational value) {
    if (lit == 0) throw ConfigError("literal 0 cannot carry a weight");
    const auto v = static_cast<std::size_t>(std::abs(lit));
    if (v >= decl_.size()) decl_.resize(v + 1);
    auto& slot = lit > 0 ? decl_[v].first : decl_[v].second;
    if (slot) throw ConfigError("duplicate weight for literal " + std::to_string(lit));
    slot = std::move(value);
  }

  /// Explicit declaration of w(lit), if any.
  const std::optional<Rational>& declared(int lit) const {
    static const std::optional<Rational> none;
    const auto v = static_cast<std::size_t>(std::abs(lit));
    if (lit == 0 || v >= decl_.size()) return none;
    return lit > 0 ? decl_[v].first : decl_[v].second;
  }

  /// w(lit) after defaulting: a missing complement is 1 - w, an unmentioned variable has unit weights.
  Rational weight(int lit) const {
    if (const auto& d = declared(lit)) return *d;
    if (const auto& other = declared(-lit)) return Rational(1) - *other;
    return 1;
  }

  /// Largest variable with any declaration.
  int max_var() const {
    for (std::size_t v = decl_.size(); v-- > 1;) {
      if (decl_[v].first || decl_[v].second) return static_cast<int>(v);
    }
    return 0;
  }

  std::size_t declaration_count() const {
    std::size_t n = 0;
    for (const auto& [p, q] : decl_) n += (p ? 1 : 0) + (q ? 1 : 0);
    return n;
  }

 private:
  std::vector<std::pair<std::optional<Rational>, std::optional<Rational>>> decl_;
};

/// Accepts "w <lit> <value>" and "c p weight <lit> <value> [0]" lines; other
/// comment lines and blank lines are ignored. Values are decimals or p/q.
inline WeightMap parse_weights(std::string_view text) {
  WeightMap map;
  std::size_t lineno = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const auto t = detail::split_ws(text.substr(pos, end - pos));
    pos = end + 1;
    ++lineno;
    if (t.empty()) continue;
    std::size_t at = 0;
    if (t[0] == "w") {
      at = 1;
      if (t.size() != 3) throw ParseError("expected 'w <lit> <value>'", lineno);
    } else if (t.size() >= 5 && t[0] == "c" && t[1] == "p" && t[2] == "weight") {
      at = 3;
      if (t.size() > 6 || (t.size() == 6 && t[5] != "0")) throw ParseError("expected 'c p weight <lit> <value> 0'", lineno);
    } else if (t[0][0] == 'c' || t[0][0] == '%') {
      continue;
    } else {
      throw ParseError("unrecognized weight line '" + std::string(t[0]) + "'", lineno);
    }
    const int lit = detail::to_int<int>(t[at], lineno, "literal");
    if (lit == 0) throw ParseError("literal 0 cannot carry a weight", lineno);
    Rational value;
    try {
      value = Rational::parse(t[at + 1]);
    } catch (const ParseError& e) {
      throw ParseError(e.what(), lineno);
    }
    try {
      map.declare(lit, std::move(value));
    } catch (const ConfigError& e) {
      throw ParseError(e.what(), lineno);
    }
  }
  return map;
}

/// Exact decimal text when the denominator is 2^a 5^b, else "p/q".
inline std::string exact_text(const Rational& v) {
  mpz_class rest = v.den();
  const auto twos = mpz_remove(rest.get_mpz_t(), rest.get_mpz_t(), mpz_class(2).get_mpz_t());
  const auto fives = mpz_remove(rest.get_mpz_t(), rest.get_mpz_t(), mpz_class(5).get_mpz_t());
  if (rest != 1) return v.to_string();
  return v.to_fixed(static_cast<int>(std::max(twos, fives)));
}

/// One "w <lit> <value>" line per declaration.
inline std::string render_weights(const WeightMap& map) {
  std::ostringstream out;
  for (int v = 1; v <= map.max_var(); ++v) {
    for (int lit : {v, -v}) {
      if (const auto& d = map.declared(lit)) out << "w " << lit << ' ' << exact_text(*d) << '\n';
    }
  }
  return out.str();
}

enum class WeightClass { nonnegative, mixed };

inline const char* to_string(WeightClass c) { return c == WeightClass::nonnegative ? "nonnegative" : "mixed"; }

/// Nonnegative iff every declared weight is >= 0. Defaulted complements are
/// not consulted; evaluation checks the constants it actually uses.
inline WeightClass classify(const WeightMap& map) {
  for (int v = 1; v <= map.max_var(); ++v) {
    for (int lit : {v, -v}) {
      if (const auto& d = map.declared(lit); d && d->sign() < 0) return WeightClass::mixed;
    }
  }
  return WeightClass::nonnegative;
}

enum class VarAction : std::uint8_t { none, rescale, smooth_zero };

struct EvalPlan {
  int num_vars = 0;                  // |X|; variables are 1..num_vars
  std::vector<VarAction> action;     // indexed by variable, slot 0 unused
  std::vector<Rational> pos, neg;    // literal values W(x), W(-x)
  std::vector<Rational> scale;       // s(x)
  std::vector<int> rescaled;         // variables with action rescale, ascending
  std::vector<int> free_vars;        // variables of X absent from the formula
  bool all_nonnegative = true;       // every W(lit) >= 0

  const Rational& literal_value(int lit) const { return lit > 0 ? pos.at(lit) : neg.at(-lit); }
  bool any_rescaled() const { return !rescaled.empty(); }
};

/// X is 1..max(dag.num_vars(), map.max_var()).
inline EvalPlan build_plan(const WeightMap& map, const NnfDag& dag) {
  EvalPlan plan;
  plan.num_vars = std::max(dag.num_vars(), map.max_var());
  const auto n = static_cast<std::size_t>(plan.num_vars) + 1;
  plan.action.assign(n, VarAction::none);
  plan.pos.assign(n, Rational());
  plan.neg.assign(n, Rational());
  plan.scale.assign(n, Rational(1));
  const VarSet& used = dag.varset(dag.root());
  for (int x = 1; x <= plan.num_vars; ++x) {
    const Rational w = map.weight(x);
    const Rational wn = map.weight(-x);
    Rational s = w + wn;
    if (s.is_zero()) {
      plan.action[x] = VarAction::smooth_zero;
      plan.pos[x] = w;
      plan.neg[x] = wn;
    } else if (s == Rational(1)) {
      plan.pos[x] = w;
      plan.neg[x] = wn;
    } else {
      plan.action[x] = VarAction::rescale;
      plan.pos[x] = w / s;
      plan.neg[x] = wn / s;
      plan.rescaled.push_back(x);
    }
    plan.scale[x] = std::move(s);
    if (plan.pos[x].sign() < 0 || plan.neg[x].sign() < 0) plan.all_nonnegative = false;
    if (!std::binary_search(used.begin(), used.end(), x)) plan.free_vars.push_back(x);
  }
  return plan;
}

}  // namespace pwmc
