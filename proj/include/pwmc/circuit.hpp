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

// Arithmetic circuits over rational constants with k-ary products and sums,
// compilation of a formula plus evaluation plan into one, and evaluation in
// any numeric domain.
//
// Products fold left to right; sums reduce as a balanced tree of binary
// additions. The a-priori error bound follows the same association.

#pragma once

#include <algorithm>
#include <concepts>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "pwmc/error.hpp"
#include "pwmc/nnf.hpp"
#include "pwmc/rational.hpp"
#include "pwmc/weights.hpp"

namespace pwmc {

using GateId = std::uint32_t;

enum class GateOp : std::uint8_t { constant, product, sum };

struct Gate {
  GateOp op;
  std::uint32_t first;  // constant index, or offset into the argument list
  std::uint32_t count;  // number of arguments; 0 for constants
};

class Circuit {
 public:
  GateId constant(const Rational& v) {
    auto it = const_ids_.find(v);
    if (it != const_ids_.end()) return it->second;
    constants_.push_back(v);
    const GateId id = push({GateOp::constant, static_cast<std::uint32_t>(constants_.size() - 1), 0});
    const_ids_.emplace(v, id);
    return id;
  }

  /// Product of args; the empty product is 1 and a single argument is returned as is.
  GateId product(std::span<const GateId> args) { return nary(GateOp::product, args, 1); }

  /// Sum of args; the empty sum is 0 and a single argument is returned as is.
  GateId sum(std::span<const GateId> args) { return nary(GateOp::sum, args, 0); }

  GateId product(std::initializer_list<GateId> args) { return product(std::span<const GateId>(args.begin(), args.size())); }
  GateId sum(std::initializer_list<GateId> args) { return sum(std::span<const GateId>(args.begin(), args.size())); }

  std::size_t size() const { return gates_.size(); }
  const Gate& gate(GateId id) const { return gates_.at(id); }
  std::span<const GateId> args(GateId id) const {
    const Gate& g = gates_.at(id);
    return {args_.data() + g.first, g.count};
  }
  const Rational& constant_value(GateId id) const { return constants_.at(gates_.at(id).first); }

  /// Gates reachable from `top`, as a mask.
  std::vector<char> reachable(GateId top) const {
    std::vector<char> live(gates_.size(), 0);
    live.at(top) = 1;
    for (GateId i = top + 1; i-- > 0;) {
      if (!live[i]) continue;
      for (GateId a : args(i)) live[a] = 1;
    }
    return live;
  }

  bool constants_nonnegative(GateId top) const {
    const auto live = reachable(top);
    for (GateId i = 0; i < gates_.size(); ++i) {
      if (live[i] && gates_[i].op == GateOp::constant && constant_value(i).sign() < 0) return false;
    }
    return true;
  }

  /// Binary additions and multiplications performed when evaluating `top`.
  std::uint64_t op_count(GateId top) const {
    const auto live = reachable(top);
    std::uint64_t ops = 0;
    for (GateId i = 0; i < gates_.size(); ++i) {
      if (live[i] && gates_[i].op != GateOp::constant) ops += gates_[i].count - 1;
    }
    return ops;
  }

  // Roots recorded by compile(): the formula value, the product of scale
  // factors (absent without rescaling), and their product.
  GateId formula_root = 0;
  std::optional<GateId> scale_root;
  GateId root = 0;

 private:
  GateId push(Gate g) {
    gates_.push_back(g);
    return static_cast<GateId>(gates_.size() - 1);
  }
  GateId nary(GateOp op, std::span<const GateId> args, long unit) {
    for (GateId a : args) {
      if (a >= gates_.size()) throw ConfigError("gate argument does not precede its gate");
    }
    if (args.empty()) return constant(Rational(unit));
    if (args.size() == 1) return args[0];
    const auto first = static_cast<std::uint32_t>(args_.size());
    args_.insert(args_.end(), args.begin(), args.end());
    return push({op, first, static_cast<std::uint32_t>(args.size())});
  }

  std::vector<Gate> gates_;
  std::vector<GateId> args_;
  std::vector<Rational> constants_;
  std::map<Rational, GateId> const_ids_;
};

/// Circuit computing the weighted count of `dag` under `plan`.
///
/// Literals become their planned values W(l). A disjunct missing a variable x
/// of its disjunction is multiplied by W(x) + W(-x); that factor is exactly 1
/// unless x is smooth-zero, where it is 0, so only the zero factor is emitted.
/// Smooth-zero variables outside the formula zero the whole count. The scale
/// product multiplies s(x) over rescaled variables in ascending order.
inline Circuit compile(const NnfDag& dag, const EvalPlan& plan) {
  Circuit c;
  const NodeId root = dag.root();
  const auto& vs = dag.varsets();
  std::vector<char> live(dag.size(), 0);
  live[root] = 1;
  for (NodeId i = root + 1; i-- > 0;) {
    if (!live[i]) continue;
    for (NodeId ch : dag.node(i).children) live[ch] = 1;
  }
  auto smooth_zero = [&](int x) { return plan.action.at(static_cast<std::size_t>(x)) == VarAction::smooth_zero; };

  std::vector<GateId> gate(dag.size(), 0);
  std::vector<GateId> args;
  for (NodeId i = 0; i <= root; ++i) {
    if (!live[i]) continue;
    const NnfNode& n = dag.node(i);
    args.clear();
    switch (n.kind) {
      case NodeKind::literal: gate[i] = c.constant(plan.literal_value(n.lit)); break;
      case NodeKind::constant_true: gate[i] = c.constant(1); break;
      case NodeKind::constant_false: gate[i] = c.constant(0); break;
      case NodeKind::conj:
        for (NodeId ch : n.children) args.push_back(gate[ch]);
        gate[i] = c.product(args);
        break;
      case NodeKind::disj:
        for (NodeId ch : n.children) {
          bool zero = false;
          if (vs[ch].size() != vs[i].size()) {
            VarSet missing;
            std::set_difference(vs[i].begin(), vs[i].end(), vs[ch].begin(), vs[ch].end(), std::back_inserter(missing));
            zero = std::any_of(missing.begin(), missing.end(), smooth_zero);
          }
          args.push_back(zero ? c.product({gate[ch], c.constant(0)}) : gate[ch]);
        }
        gate[i] = c.sum(args);
        break;
    }
  }
  c.formula_root = gate[root];
  if (std::any_of(plan.free_vars.begin(), plan.free_vars.end(), smooth_zero)) {
    c.formula_root = c.product({c.formula_root, c.constant(0)});
  }
  c.root = c.formula_root;
  if (plan.any_rescaled()) {
    args.clear();
    for (int x : plan.rescaled) args.push_back(c.constant(plan.scale.at(static_cast<std::size_t>(x))));
    c.scale_root = c.product(args);
    c.root = c.product({c.formula_root, *c.scale_root});
  }
  return c;
}

namespace detail {

inline unsigned ceil_log2(std::uint64_t k) {
  unsigned r = 0;
  while ((std::uint64_t{1} << r) < k) ++r;
  return r;
}

}  // namespace detail

/// Integer e with relative error <= e * 2^-p for any correctly rounded p-bit
/// evaluation of `root`; nullopt when a reachable constant is negative.
/// Constants count 1, a k-ary product 2(k-1) + sum of its arguments, a k-ary
/// sum ceil(log2 k) + max of its arguments.
inline std::optional<mpz_class> error_bound(const Circuit& c, GateId root) {
  if (!c.constants_nonnegative(root)) return std::nullopt;
  const auto live = c.reachable(root);
  std::vector<mpz_class> e(root + 1);
  for (GateId i = 0; i <= root; ++i) {
    if (!live[i]) continue;
    const Gate& g = c.gate(i);
    switch (g.op) {
      case GateOp::constant: e[i] = 1; break;
      case GateOp::product:
        e[i] = 2 * (g.count - 1);
        for (GateId a : c.args(i)) e[i] += e[a];
        break;
      case GateOp::sum: {
        mpz_class m = 0;
        for (GateId a : c.args(i)) m = std::max(m, e[a]);
        e[i] = m + detail::ceil_log2(g.count);
        break;
      }
    }
  }
  return e[root];
}

template <class D>
concept NumericDomain = requires(D d, const Rational& r, const typename D::value_type& a) {
  { d.from_rational(r) } -> std::convertible_to<typename D::value_type>;
  { d.add(a, a) } -> std::convertible_to<typename D::value_type>;
  { d.mul(a, a) } -> std::convertible_to<typename D::value_type>;
};

template <class D>
concept HasProduct = requires(D d, std::span<const typename D::value_type* const> xs) {
  { d.product(xs) } -> std::convertible_to<typename D::value_type>;
};

namespace detail {

template <NumericDomain D>
typename D::value_type fold_product(D& dom, std::span<const typename D::value_type* const> xs) {
  if constexpr (HasProduct<D>) {
    return dom.product(xs);
  } else {
    typename D::value_type acc = dom.mul(*xs[0], *xs[1]);
    for (std::size_t i = 2; i < xs.size(); ++i) acc = dom.mul(acc, *xs[i]);
    return acc;
  }
}

template <NumericDomain D>
typename D::value_type tree_sum(D& dom, std::span<const typename D::value_type* const> xs) {
  using V = typename D::value_type;
  std::vector<V> level;
  level.reserve((xs.size() + 1) / 2);
  for (std::size_t i = 0; i + 1 < xs.size(); i += 2) level.push_back(dom.add(*xs[i], *xs[i + 1]));
  if (xs.size() % 2 == 1) level.push_back(*xs.back());
  while (level.size() > 1) {
    std::vector<V> next;
    next.reserve((level.size() + 1) / 2);
    for (std::size_t i = 0; i + 1 < level.size(); i += 2) next.push_back(dom.add(level[i], level[i + 1]));
    if (level.size() % 2 == 1) next.push_back(std::move(level.back()));
    level.swap(next);
  }
  return std::move(level.front());
}

}  // namespace detail

/// Value of `root` in domain `dom`. Intermediate values are released once their last reader has run.
template <NumericDomain D>
typename D::value_type evaluate(const Circuit& c, GateId root, D& dom) {
  using V = typename D::value_type;
  const auto live = c.reachable(root);
  std::vector<std::uint32_t> readers(root + 1, 0);
  for (GateId i = 0; i <= root; ++i) {
    if (!live[i]) continue;
    for (GateId a : c.args(i)) ++readers[a];
  }
  std::vector<std::optional<V>> val(root + 1);
  std::vector<const V*> xs;
  for (GateId i = 0; i <= root; ++i) {
    if (!live[i]) continue;
    const Gate& g = c.gate(i);
    if (g.op == GateOp::constant) {
      val[i] = dom.from_rational(c.constant_value(i));
      continue;
    }
    const auto args = c.args(i);
    xs.clear();
    for (GateId a : args) xs.push_back(&*val[a]);
    val[i] = g.op == GateOp::product ? detail::fold_product(dom, std::span<const V* const>(xs)) : detail::tree_sum(dom, std::span<const V* const>(xs));
    for (GateId a : args) {
      if (--readers[a] == 0) val[a].reset();
    }
  }
  return std::move(*val[root]);
}

}  // namespace pwmc
