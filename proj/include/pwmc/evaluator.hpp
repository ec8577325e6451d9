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

// Weighted counting with guaranteed decimal precision.
//
// The hybrid ladder:
//   1. all circuit constants nonnegative: one floating-point evaluation whose
//      width is chosen so the a-priori bound already meets the target;
//   2. otherwise two interval evaluations, the second at twice the width,
//      accepting the first whose certified precision meets the target;
//   3. exact rational evaluation.

#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "pwmc/circuit.hpp"
#include "pwmc/domains.hpp"
#include "pwmc/error.hpp"
#include "pwmc/interval.hpp"
#include "pwmc/metrics.hpp"
#include "pwmc/nnf.hpp"
#include "pwmc/rational.hpp"
#include "pwmc/softfloat.hpp"
#include "pwmc/weights.hpp"

namespace pwmc {

inline constexpr double kInfDigits = std::numeric_limits<double>::infinity();

/// Widths beyond this fall back to exact evaluation.
inline constexpr int kMaxFloatWidth = 8192;

/// Constant c in the precision floor p log10 2 - log10 n - c.
enum class FloorConstant { rescaled, unrescaled, pure_product };

inline double floor_constant(FloorConstant c) {
  switch (c) {
    case FloorConstant::rescaled: return std::log10(7.0);
    case FloorConstant::unrescaled: return std::log10(4.0);
    case FloorConstant::pure_product: return std::log10(3.0);
  }
  return 0.0;
}

/// Guaranteed digits for a decision-DNNF over n variables with nonnegative
/// weights at width p; nullopt when log2 n > p/2 - 1.
inline std::optional<double> precision_floor(int p, std::uint64_t n, FloorConstant c) {
  const double log2n = std::log2(static_cast<double>(std::max<std::uint64_t>(n, 1)));
  if (log2n > p / 2.0 - 1.0) return std::nullopt;
  return p * detail::kLog10Of2 - std::log10(static_cast<double>(std::max<std::uint64_t>(n, 1))) - floor_constant(c);
}

/// Guaranteed digits from a circuit bound e at width p; nullopt when p < 2 log2 e.
inline std::optional<double> bound_floor(int p, const mpz_class& e) {
  const double log2e = detail::log10_mpz(e) / detail::kLog10Of2;
  if (p < 2.0 * log2e) return std::nullopt;
  return p * detail::kLog10Of2 - detail::log10_mpz(e);
}

/// Supported widths in increasing order: 53, 64, 128, 256, then steps of 64.
inline int next_width(int p) {
  if (p < 53) return 53;
  if (p < 64) return 64;
  if (p < 128) return 128;
  if (p < 256) return 256;
  return (p / 64 + 1) * 64;
}

/// Smallest supported width meeting p >= 2(1 + log2 n) and
/// p >= D log2 10 + log2 n + k (k = 2.9 rescaled, 2 otherwise), then
/// confirmed against the precision floor. nullopt beyond kMaxFloatWidth.
inline std::optional<int> select_fraction_width(std::uint64_t n, double D, bool rescaled) {
  const double log2n = std::log2(static_cast<double>(std::max<std::uint64_t>(n, 1)));
  const double need = std::max(2.0 * (1.0 + log2n), D / detail::kLog10Of2 + log2n + (rescaled ? 2.9 : 2.0));
  const FloorConstant c = rescaled ? FloorConstant::rescaled : FloorConstant::unrescaled;
  for (int p = 53; p <= kMaxFloatWidth; p = next_width(p)) {
    if (p < need) continue;
    const auto floor = precision_floor(p, n, c);
    if (floor && *floor >= D) return p;
  }
  return std::nullopt;
}

/// Smallest supported width whose circuit-bound floor meets D.
inline std::optional<int> select_width_for_bound(const mpz_class& e, double D) {
  for (int p = 53; p <= kMaxFloatWidth; p = next_width(p)) {
    const auto floor = bound_floor(p, e);
    if (floor && *floor >= D) return p;
  }
  return std::nullopt;
}

struct StageRecord {
  std::string method;
  int precision = 0;
  std::optional<double> guaranteed_digits;
  bool accepted = false;
  double seconds = 0.0;
  std::uint64_t op_count = 0;
  std::string note;
};

struct EvalResult {
  std::string method;  // domain tag of the reported value
  int precision = 0;   // fraction width, 0 for rational
  Rational value;      // exact value of the reported number
  std::optional<Rational> exact;
  std::optional<Interval> interval;
  std::optional<double> guaranteed_digits;  // nullopt: no guarantee applies
  std::uint64_t op_count = 0;
  double seconds = 0.0;
  bool overflow = false;
  bool underflow = false;
  std::vector<StageRecord> stages;

  bool meets(double D) const { return guaranteed_digits && meets_target(*guaranteed_digits, D); }
};

/// A formula and weights compiled once for repeated evaluation.
struct Instance {
  NnfDag dag;
  WeightMap weights;
  EvalPlan plan;
  StructureReport structure;
  Circuit circuit;

  static Instance make(NnfDag dag, WeightMap weights) {
    Instance in{std::move(dag), std::move(weights), {}, {}, {}};
    in.structure = validate(in.dag);
    if (!in.structure.decomposable) {
      throw ConfigError("formula is not decomposable (node " + std::to_string(*in.structure.first_non_decomposable) + ")");
    }
    in.plan = build_plan(in.weights, in.dag);
    in.circuit = compile(in.dag, in.plan);
    return in;
  }

  std::uint64_t num_vars() const { return static_cast<std::uint64_t>(std::max(plan.num_vars, 1)); }
  bool nonnegative() const { return circuit.constants_nonnegative(circuit.root); }
  bool rescaled() const { return plan.any_rescaled(); }

  /// True when the root is a conjunction of positive literals (or a single one) and nothing is rescaled.
  bool pure_product() const {
    if (rescaled()) return false;
    const NnfNode& r = dag.node(dag.root());
    if (r.kind == NodeKind::literal) return true;
    if (r.kind != NodeKind::conj) return false;
    return std::all_of(r.children.begin(), r.children.end(), [&](NodeId c) { return dag.node(c).kind == NodeKind::literal; });
  }

  FloorConstant floor_kind() const {
    if (pure_product()) return FloorConstant::pure_product;
    return rescaled() ? FloorConstant::rescaled : FloorConstant::unrescaled;
  }
};

namespace detail {

class Stopwatch {
 public:
  double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count(); }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

inline EvalResult finish(EvalResult r, const Stopwatch& sw, std::uint64_t ops) {
  r.seconds = sw.seconds();
  r.op_count = ops;
  r.stages.push_back({r.method, r.precision, r.guaranteed_digits, true, r.seconds, ops, {}});
  return r;
}

}  // namespace detail

/// Exact evaluation of `root` (the whole count by default).
inline EvalResult evaluate_rational(const Circuit& c, std::size_t max_bits = 0, std::optional<GateId> root = {}) {
  detail::Stopwatch sw;
  const GateId g = root.value_or(c.root);
  RationalDomain dom{max_bits};
  EvalResult r;
  r.method = dom.tag();
  r.value = evaluate(c, g, dom);
  r.exact = r.value;
  r.guaranteed_digits = kInfDigits;
  return detail::finish(std::move(r), sw, c.op_count(g));
}

/// Rounded evaluation at width p. No guarantee is attached here.
inline EvalResult evaluate_softfloat(const Circuit& c, int p, Round mode = Round::nearest_even, std::optional<GateId> root = {}) {
  detail::Stopwatch sw;
  const GateId g = root.value_or(c.root);
  SoftFloatDomain dom{p, mode};
  EvalResult r;
  r.method = dom.tag();
  r.precision = p;
  r.value = evaluate(c, g, dom).to_rational();
  return detail::finish(std::move(r), sw, c.op_count(g));
}

inline EvalResult evaluate_erd(const Circuit& c, std::optional<GateId> root = {}) {
  detail::Stopwatch sw;
  const GateId g = root.value_or(c.root);
  ErdDomain dom;
  EvalResult r;
  r.method = dom.tag();
  r.precision = 53;
  r.value = evaluate(c, g, dom).to_rational();
  return detail::finish(std::move(r), sw, c.op_count(g));
}

/// Interval evaluation; the reported value is the midpoint and the guarantee is the interval's own precision.
inline EvalResult evaluate_interval(const Circuit& c, int p, std::optional<GateId> root = {}) {
  detail::Stopwatch sw;
  const GateId g = root.value_or(c.root);
  IntervalDomain dom{p};
  EvalResult r;
  r.method = dom.tag();
  r.precision = p;
  Interval iv = evaluate(c, g, dom);
  r.value = iv.midpoint().to_rational();
  r.guaranteed_digits = iv.decimal_precision();
  r.interval = std::move(iv);
  return detail::finish(std::move(r), sw, c.op_count(g));
}

/// Plain binary64 evaluation; leaving the double range is flagged, not thrown.
inline EvalResult evaluate_double_baseline(const Circuit& c) {
  detail::Stopwatch sw;
  DoubleDomain dom;
  EvalResult r;
  r.method = dom.tag();
  r.precision = 53;
  const double v = evaluate(c, c.root, dom);
  r.overflow = dom.overflow;
  r.underflow = dom.underflow;
  if (std::isfinite(v)) r.value = Erd::from_double(v).to_rational();
  return detail::finish(std::move(r), sw, c.op_count(c.root));
}

/// Float evaluation at p: ERD for p = 53, SoftFloat otherwise.
inline EvalResult evaluate_float(const Circuit& c, int p) { return p == 53 ? evaluate_erd(c) : evaluate_softfloat(c, p); }

/// A-priori guarantee for a nonnegative float evaluation of `in` at width p.
inline std::optional<double> float_guarantee(const Instance& in, int p) {
  if (!in.nonnegative()) return std::nullopt;
  if (in.structure.is_decision_dnnf()) return precision_floor(p, in.num_vars(), in.floor_kind());
  const auto e = error_bound(in.circuit, in.circuit.root);
  return e ? bound_floor(p, *e) : std::nullopt;
}

/// Width the float stage would use for target D, or nullopt when none is supported.
inline std::optional<int> float_width(const Instance& in, double D) {
  if (in.structure.is_decision_dnnf()) return select_fraction_width(in.num_vars(), D, in.rescaled());
  const auto e = error_bound(in.circuit, in.circuit.root);
  return e ? select_width_for_bound(*e, D) : std::nullopt;
}

struct HybridOptions {
  std::size_t rational_max_bits = 0;  // 0: unlimited
};

/// Runs the ladder until a stage certifies D digits.
inline EvalResult hybrid_count(const Instance& in, double D, const HybridOptions& opt = {}) {
  detail::Stopwatch sw;
  std::vector<StageRecord> stages;
  auto done = [&](EvalResult r) {
    r.stages.back().accepted = true;
    stages.push_back(r.stages.back());
    r.stages = std::move(stages);
    r.seconds = sw.seconds();
    return r;
  };

  if (in.nonnegative()) {
    if (const auto p = float_width(in, D)) {
      EvalResult r = evaluate_float(in.circuit, *p);
      r.guaranteed_digits = float_guarantee(in, *p);
      r.stages.back().guaranteed_digits = r.guaranteed_digits;
      if (r.meets(D)) return done(std::move(r));
      r.stages.back().accepted = false;
      stages.push_back(r.stages.back());
    }
  } else {
    const auto first = select_fraction_width(in.num_vars(), D, in.rescaled());
    if (first) {
      const int p0 = std::max(64, *first);
      for (int p : {p0, 2 * p0}) {
        EvalResult r = evaluate_interval(in.circuit, p);
        if (r.meets(D)) return done(std::move(r));
        r.stages.back().accepted = false;
        stages.push_back(r.stages.back());
      }
    }
  }

  try {
    return done(evaluate_rational(in.circuit, opt.rational_max_bits));
  } catch (const ResourceExhausted& e) {
    EvalResult r;
    r.method = "rational";
    stages.push_back({"rational", 0, std::nullopt, false, sw.seconds(), in.circuit.op_count(in.circuit.root), e.what()});
    r.stages = std::move(stages);
    r.seconds = sw.seconds();
    return r;
  }
}

}  // namespace pwmc
