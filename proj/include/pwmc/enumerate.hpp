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

// Brute-force weighted model counting by enumerating all assignments.
// Shares no code with the circuit evaluator, so it serves as its oracle.

#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "pwmc/error.hpp"
#include "pwmc/nnf.hpp"
#include "pwmc/rational.hpp"
#include "pwmc/weights.hpp"

namespace pwmc {

inline constexpr int kEnumerateMaxVars = 25;

/// Truth value of the root under `assign` (bit v-1 set means x_v true).
inline bool satisfies(const NnfDag& dag, std::uint64_t assign, std::vector<char>& scratch) {
  scratch.resize(dag.size());
  for (NodeId i = 0; i <= dag.root(); ++i) {
    const NnfNode& n = dag.node(i);
    bool v = false;
    switch (n.kind) {
      case NodeKind::literal: {
        const bool x = (assign >> (std::abs(n.lit) - 1)) & 1U;
        v = n.lit > 0 ? x : !x;
        break;
      }
      case NodeKind::constant_true: v = true; break;
      case NodeKind::constant_false: v = false; break;
      case NodeKind::conj:
        v = std::all_of(n.children.begin(), n.children.end(), [&](NodeId c) { return scratch[c] != 0; });
        break;
      case NodeKind::disj:
        v = std::any_of(n.children.begin(), n.children.end(), [&](NodeId c) { return scratch[c] != 0; });
        break;
    }
    scratch[i] = v;
  }
  return scratch[dag.root()] != 0;
}

/// Sum over satisfying assignments of X = 1..max(dag vars, weight vars) of the product of literal weights.
inline Rational model_enumerate(const NnfDag& dag, const WeightMap& weights) {
  const int n = std::max(dag.num_vars(), weights.max_var());
  if (n > kEnumerateMaxVars) {
    throw ConfigError("enumeration refused: " + std::to_string(n) + " variables exceeds " + std::to_string(kEnumerateMaxVars));
  }
  std::vector<Rational> pos(n + 1), neg(n + 1);
  for (int v = 1; v <= n; ++v) {
    pos[v] = weights.weight(v);
    neg[v] = weights.weight(-v);
  }
  std::vector<char> scratch;
  Rational total;
  for (std::uint64_t a = 0; a < (std::uint64_t{1} << n); ++a) {
    if (!satisfies(dag, a, scratch)) continue;
    Rational term(1);
    for (int v = 1; v <= n; ++v) term *= ((a >> (v - 1)) & 1U) ? pos[v] : neg[v];
    total += term;
  }
  return total;
}

}  // namespace pwmc
