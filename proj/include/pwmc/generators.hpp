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

// Reproducible benchmark instances.
//
// All randomness comes from SplitMix64 (Steele, Lea and Flood), seeded with
// the user's 64-bit seed:
//   state += 0x9e3779b97f4a7c15
//   z = state
//   z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9
//   z = (z ^ (z >> 27)) * 0x94d049bb133111eb
//   return z ^ (z >> 31)
// Bounded integers use rejection sampling on the top of the range, so
// outputs are identical on every platform.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "pwmc/circuit.hpp"
#include "pwmc/error.hpp"
#include "pwmc/interval.hpp"
#include "pwmc/metrics.hpp"
#include "pwmc/nnf.hpp"
#include "pwmc/rational.hpp"
#include "pwmc/softfloat.hpp"
#include "pwmc/weights.hpp"

namespace pwmc {

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform integer in [lo, hi].
  std::uint64_t uniform(std::uint64_t lo, std::uint64_t hi) {
    const std::uint64_t span = hi - lo;
    if (span == ~std::uint64_t{0}) return next();
    const std::uint64_t n = span + 1;
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t x;
    do {
      x = next();
    } while (x >= limit);
    return lo + x % n;
  }

  bool coin() { return (next() >> 63) != 0; }

  /// True with probability num/den.
  bool chance(std::uint64_t num, std::uint64_t den) { return uniform(0, den - 1) < num; }

 private:
  std::uint64_t state_;
};

enum class WeightFamily { uniform_pos, exponential_pos, uniform_mixed, exponential_mixed, limits_mixed };

inline constexpr WeightFamily kAllWeightFamilies[] = {WeightFamily::uniform_pos, WeightFamily::exponential_pos, WeightFamily::uniform_mixed,
                                                      WeightFamily::exponential_mixed, WeightFamily::limits_mixed};

inline const char* to_string(WeightFamily f) {
  switch (f) {
    case WeightFamily::uniform_pos: return "uniform+";
    case WeightFamily::exponential_pos: return "exponential+";
    case WeightFamily::uniform_mixed: return "uniform-mixed";
    case WeightFamily::exponential_mixed: return "exponential-mixed";
    case WeightFamily::limits_mixed: return "limits-mixed";
  }
  return "?";
}

/// Accepts the names above; "uniform+-"/"uniform±" style spellings are aliases for the mixed families.
inline std::optional<WeightFamily> parse_weight_family(std::string_view s) {
  if (s == "uniform+") return WeightFamily::uniform_pos;
  if (s == "exponential+") return WeightFamily::exponential_pos;
  if (s == "uniform-mixed" || s == "uniform+-" || s == "uniform±") return WeightFamily::uniform_mixed;
  if (s == "exponential-mixed" || s == "exponential+-" || s == "exponential±") return WeightFamily::exponential_mixed;
  if (s == "limits-mixed" || s == "limits+-" || s == "limits±") return WeightFamily::limits_mixed;
  return std::nullopt;
}

inline bool is_nonnegative_family(WeightFamily f) { return f == WeightFamily::uniform_pos || f == WeightFamily::exponential_pos; }

namespace detail {

inline const mpz_class& billion() {
  static const mpz_class b(1000000000UL);
  return b;
}

/// k / 10^9 for k uniform in [1, 10^9 - 1].
inline Rational uniform_9digit(SplitMix64& rng) { return Rational(mpz_class(static_cast<unsigned long>(rng.uniform(1, 999999999))), billion()); }

/// Log-uniform magnitude in [1e-9, 1e9): a decade 10^d, d in [-9, 8], times a
/// 9-digit mantissa in [1, 10), truncated to 9 digits after the point.
inline Rational log_uniform_9decimals(SplitMix64& rng) {
  const int d = static_cast<int>(rng.uniform(0, 17)) - 9;
  const mpz_class m(static_cast<unsigned long>(rng.uniform(100000000, 999999999)));
  // value * 10^9 = m * 10^(d + 1), truncated
  mpz_class scaled;
  if (d + 1 >= 0) {
    scaled = m * pow10_mpz(static_cast<unsigned long>(d + 1));
  } else {
    mpz_tdiv_q(scaled.get_mpz_t(), m.get_mpz_t(), pow10_mpz(static_cast<unsigned long>(-(d + 1))).get_mpz_t());
  }
  return Rational(scaled, billion());
}

inline Rational signed_randomly(Rational v, SplitMix64& rng) { return rng.coin() ? -v : v; }

}  // namespace detail

/// Weights for variables 1..n; both polarities are declared for every variable.
inline WeightMap gen_weights(WeightFamily family, int n, std::uint64_t seed) {
  SplitMix64 rng(seed);
  WeightMap map;
  const Rational tiny = Rational::pow10(-9);
  const Rational huge = Rational::pow10(9);
  for (int x = 1; x <= n; ++x) {
    Rational w, wn;
    switch (family) {
      case WeightFamily::uniform_pos:
        w = detail::uniform_9digit(rng);
        wn = Rational(1) - w;
        break;
      case WeightFamily::exponential_pos:
        w = detail::log_uniform_9decimals(rng);
        wn = detail::log_uniform_9decimals(rng);
        break;
      case WeightFamily::uniform_mixed:
        w = detail::signed_randomly(detail::uniform_9digit(rng), rng);
        wn = detail::signed_randomly(detail::uniform_9digit(rng), rng);
        break;
      case WeightFamily::exponential_mixed:
        w = detail::signed_randomly(detail::log_uniform_9decimals(rng), rng);
        wn = detail::signed_randomly(detail::log_uniform_9decimals(rng), rng);
        break;
      case WeightFamily::limits_mixed:
        do {
          w = detail::signed_randomly(rng.coin() ? huge : tiny, rng);
          wn = detail::signed_randomly(rng.coin() ? huge : tiny, rng);
        } while ((w + wn).is_zero());
        break;
    }
    map.declare(x, std::move(w));
    map.declare(-x, std::move(wn));
  }
  return map;
}

struct GeneratedInstance {
  NnfDag dag;
  WeightMap weights;
};

/// tau_n = (z & ((&x_i) | (&-x_i))) | (-z & (&x_i)), decision variables z and x_1.
/// Variables: z = 1, x_i = i + 1. Weights w(z) = 1, w(-z) = -1, w(x_i) = 1e9, w(-x_i) = 1e-9.
inline GeneratedInstance gen_tau(int n) {
  if (n < 1) throw ConfigError("tau needs n >= 1");
  GeneratedInstance g;
  NnfDag& d = g.dag;
  const NodeId z = d.add_literal(1);
  const NodeId nz = d.add_literal(-1);
  std::vector<NodeId> pos, neg;
  for (int i = 1; i <= n; ++i) {
    pos.push_back(d.add_literal(i + 1));
    neg.push_back(d.add_literal(-(i + 1)));
  }
  const NodeId all_pos = n == 1 ? pos[0] : d.add_and(pos);
  const NodeId all_neg = n == 1 ? neg[0] : d.add_and(neg);
  const NodeId inner = d.add_or({all_pos, all_neg}, 2);
  const NodeId left = d.add_and({z, inner});
  const NodeId right = d.add_and({nz, all_pos});
  d.add_or({left, right}, 1);
  g.weights.declare(1, 1);
  g.weights.declare(-1, -1);
  for (int i = 1; i <= n; ++i) {
    g.weights.declare(i + 1, Rational::pow10(9));
    g.weights.declare(-(i + 1), Rational::pow10(-9));
  }
  return g;
}

/// x_1 & ... & x_n with w(x_i) = w; complements are left to their default.
inline GeneratedInstance gen_product(int n, const Rational& w) {
  if (n < 1) throw ConfigError("product needs n >= 1");
  GeneratedInstance g;
  std::vector<NodeId> lits;
  lits.reserve(static_cast<std::size_t>(n));
  for (int i = 1; i <= n; ++i) lits.push_back(g.dag.add_literal(i));
  if (n > 1) g.dag.add_and(std::move(lits));
  for (int i = 1; i <= n; ++i) g.weights.declare(i, w);
  return g;
}

struct ProductSweepPoint {
  Rational weight;
  double digits;
};

/// Decimal precision of the left-to-right p-bit product of n copies of w.
/// The reference is an interval enclosure of w^n by repeated squaring at
/// width 2p + 64, tight to far more digits than a p-bit result carries.
inline double product_precision(int n, const Rational& w, int p) {
  const SoftFloat x = SoftFloat::from_rational(w, p);
  SoftFloat acc = x;
  for (int i = 1; i < n; ++i) acc = acc * x;
  const int hp = 2 * p + 64;
  Interval base = Interval::from_rational(w, hp);
  Interval result = Interval::from_rational(1, hp);
  for (unsigned k = static_cast<unsigned>(n); k != 0; k >>= 1) {
    if (k & 1U) result = result * base;
    if (k > 1) base = base * base;
  }
  const Rational ref = result.midpoint().to_rational();
  const Rational err = approx_error(acc.to_rational(), ref);
  const double slack = result.error().is_zero() ? 0.0 : result.error().to_double();
  // A width-hp enclosure leaves relative slack far below 2^-p.
  if (slack * 1e6 > std::ldexp(1.0, -p)) throw ConfigError("reference enclosure too wide");
  return err.is_zero() ? std::numeric_limits<double>::infinity() : std::max(0.0, -err.log10_abs());
}

/// Sweeps w = 1 + k * 1e-9 for k in [k_lo, k_hi] and returns the weight with the lowest precision.
inline ProductSweepPoint optimize_product(int n, int k_lo, int k_hi, int p) {
  if (k_lo < 1 || k_hi < k_lo) throw ConfigError("bad sweep range");
  std::optional<ProductSweepPoint> best;
  for (int k = k_lo; k <= k_hi; ++k) {
    const Rational w = Rational(1) + Rational(mpz_class(k), detail::billion());
    const double d = product_precision(n, w, p);
    if (!best || d < best->digits) best = ProductSweepPoint{w, d};
  }
  return *best;
}

/// Random decision-DNNF over variables 1..n with at most `node_budget` nodes.
///
/// Built top-down from a variable set: a decision on one variable whose two
/// branches are built from the remaining set, a split of the set into two
/// independent halves joined by a conjunction, or a leaf conjunction of
/// literals over a random subset. Sets of more than 6 variables split half
/// of the time. Earlier subgraphs over subsets of the
/// current set are reused, and branches may drop variables, so results are
/// shared and not necessarily smooth.
inline NnfDag gen_random_ddnnf(int n, std::size_t node_budget, std::uint64_t seed) {
  if (n < 1) throw ConfigError("random d-DNNF needs n >= 1");
  if (node_budget < 3) throw ConfigError("node budget must be at least 3");
  for (std::uint64_t attempt = 0;; ++attempt) {
    SplitMix64 rng(seed ^ (attempt * 0xd1b54a32d192ed03ULL));
    NnfDag d;
    std::vector<std::optional<NodeId>> lit_node(2 * static_cast<std::size_t>(n) + 1);
    auto lit = [&](int l) {
      auto& slot = lit_node[static_cast<std::size_t>(l + n)];
      if (!slot) slot = d.add_literal(l);
      return *slot;
    };
    std::vector<std::pair<VarSet, NodeId>> pool;
    auto subset = [](const VarSet& a, const VarSet& b) { return std::includes(b.begin(), b.end(), a.begin(), a.end()); };

    auto build = [&](auto&& self, const VarSet& vars) -> NodeId {
      if (vars.empty()) return d.add_true();
      if (!pool.empty() && rng.chance(1, 4)) {
        std::vector<NodeId> fits;
        for (const auto& [vs, id] : pool) {
          if (!vs.empty() && subset(vs, vars)) fits.push_back(id);
        }
        if (!fits.empty()) return fits[rng.uniform(0, fits.size() - 1)];
      }
      const bool over_budget = d.size() + 2 * vars.size() + 4 > node_budget;
      // Large sets favor splitting into independent components.
      const bool large = vars.size() > 6;
      const auto roll = rng.uniform(0, 9);
      NodeId out;
      if (vars.size() == 1 || over_budget || roll < (large ? 1U : 2U)) {
        std::vector<NodeId> kids;
        for (int v : vars) {
          if (vars.size() > 1 && rng.chance(1, 5)) continue;
          kids.push_back(lit(rng.coin() ? v : -v));
        }
        if (kids.empty()) kids.push_back(lit(vars.front()));
        out = kids.size() == 1 ? kids[0] : d.add_and(kids);
      } else if (roll < (large ? 5U : 8U)) {
        const int x = vars[rng.uniform(0, vars.size() - 1)];
        VarSet rest;
        for (int v : vars) {
          if (v != x) rest.push_back(v);
        }
        const NodeId hi = self(self, rest);
        const NodeId lo = rng.chance(1, 5) ? hi : self(self, rest);
        const NodeId a = rest.empty() ? lit(x) : d.add_and({lit(x), hi});
        const NodeId b = rest.empty() ? lit(-x) : d.add_and({lit(-x), lo});
        out = d.add_or({a, b}, x);
      } else {
        VarSet left, right;
        for (int v : vars) (rng.coin() ? left : right).push_back(v);
        if (left.empty()) std::swap(left, right);
        if (right.empty()) {
          right.push_back(left.back());
          left.pop_back();
        }
        const NodeId l = self(self, left);
        const NodeId r = self(self, right);
        out = d.add_and({l, r});
      }
      pool.emplace_back(d.varset(out), out);
      return out;
    };

    VarSet all;
    for (int v = 1; v <= n; ++v) all.push_back(v);
    build(build, all);
    if (d.size() <= node_budget) {
      d.set_num_vars(n);
      return d;
    }
  }
}

/// Random decision-DNNF with weights from `family`; the weight stream is seeded independently of the formula's.
inline GeneratedInstance gen_random_instance(WeightFamily family, int n, std::size_t node_budget, std::uint64_t seed) {
  return {gen_random_ddnnf(n, node_budget, seed), gen_weights(family, n, seed ^ 0x9e3779b97f4a7c15ULL)};
}

struct RandomCircuit {
  Circuit circuit;
  GateId root = 0;
};

/// Random circuit with nonnegative constants a/b (a in [0, 1000], b in [1, 1000])
/// and about `ops` binary operations in k-ary products and sums of arity 2..4.
/// Arguments are drawn from earlier gates; a gate may combine at most 64
/// constant occurrences so the exact value stays small.
inline RandomCircuit gen_random_circuit(std::size_t ops, std::uint64_t seed) {
  SplitMix64 rng(seed);
  RandomCircuit out;
  Circuit& c = out.circuit;
  std::vector<GateId> gates;
  std::vector<std::uint32_t> degree;  // upper bound on constants multiplied together
  auto add_constant = [&] {
    const Rational v(mpz_class(static_cast<unsigned long>(rng.uniform(0, 1000))), mpz_class(static_cast<unsigned long>(rng.uniform(1, 1000))));
    const GateId g = c.constant(v);
    gates.push_back(g);
    degree.push_back(1);
  };
  for (int i = 0; i < 4; ++i) add_constant();
  std::size_t used = 0;
  while (used < ops) {
    if (rng.chance(1, 5)) {
      add_constant();
      continue;
    }
    const std::size_t k = std::min<std::size_t>(rng.uniform(2, 4), ops - used + 1);
    const bool product = rng.coin();
    std::vector<GateId> args;
    std::uint32_t deg = 0;
    for (std::size_t i = 0; i < k; ++i) {
      // Favor recent gates so the circuit grows deep rather than wide.
      const std::size_t lo = gates.size() > 8 && rng.coin() ? gates.size() - 8 : 0;
      const std::size_t j = rng.uniform(lo, gates.size() - 1);
      args.push_back(gates[j]);
      deg += degree[j];
    }
    if (deg > 64) continue;
    const GateId g = product ? c.product(args) : c.sum(args);
    gates.push_back(g);
    degree.push_back(deg);
    used += k - 1;
  }
  out.root = gates.back();
  c.root = c.formula_root = out.root;
  return out;
}

}  // namespace pwmc
