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

// Negation normal form DAGs: literals, constants, conjunctions and
// disjunctions, with parsing, rendering, variable sets and structural checks.

#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "pwmc/error.hpp"

namespace pwmc {

enum class NodeKind : std::uint8_t { literal, constant_true, constant_false, conj, disj };

using NodeId = std::uint32_t;
using VarSet = std::vector<int>;  // sorted, unique

struct NnfNode {
  NodeKind kind = NodeKind::constant_true;
  int lit = 0;           // literal nodes only
  int decision_var = 0;  // disjunctions only; 0 when not recorded
  std::vector<NodeId> children;
};

/// A DAG whose children always precede their parents. The root is the last
/// node unless set explicitly.
class NnfDag {
 public:
  NnfDag() = default;

  NodeId add_literal(int lit) {
    if (lit == 0) throw ConfigError("literal 0");
    num_vars_ = std::max(num_vars_, std::abs(lit));
    return push({NodeKind::literal, lit, 0, {}});
  }
  NodeId add_true() { return push({NodeKind::constant_true, 0, 0, {}}); }
  NodeId add_false() { return push({NodeKind::constant_false, 0, 0, {}}); }
  NodeId add_and(std::vector<NodeId> children) {
    if (children.empty()) return add_true();
    return push({NodeKind::conj, 0, 0, check(std::move(children))});
  }
  NodeId add_or(std::vector<NodeId> children, int decision_var = 0) {
    if (children.empty()) return add_false();
    if (decision_var < 0) throw ConfigError("negative decision variable");
    num_vars_ = std::max(num_vars_, decision_var);
    return push({NodeKind::disj, 0, decision_var, check(std::move(children))});
  }

  std::size_t size() const { return nodes_.size(); }
  std::size_t edge_count() const {
    std::size_t e = 0;
    for (const auto& n : nodes_) e += n.children.size();
    return e;
  }
  const NnfNode& node(NodeId id) const { return nodes_.at(id); }
  const std::vector<NnfNode>& nodes() const { return nodes_; }

  NodeId root() const {
    if (nodes_.empty()) throw ConfigError("empty NNF");
    return root_.value_or(static_cast<NodeId>(nodes_.size() - 1));
  }
  void set_root(NodeId id) {
    if (id >= nodes_.size()) throw ConfigError("root out of range");
    root_ = id;
  }

  /// Declared variable count; at least the largest variable mentioned.
  int num_vars() const { return num_vars_; }
  void set_num_vars(int n) {
    if (n < num_vars_) throw ConfigError("declared variable count below largest variable used");
    num_vars_ = n;
  }

  /// Variables of every node, computed once on first use.
  const std::vector<VarSet>& varsets() const {
    if (varsets_.size() != nodes_.size()) compute_varsets();
    return varsets_;
  }
  const VarSet& varset(NodeId id) const { return varsets().at(id); }

 private:
  NodeId push(NnfNode n) {
    nodes_.push_back(std::move(n));
    return static_cast<NodeId>(nodes_.size() - 1);
  }
  std::vector<NodeId> check(std::vector<NodeId> c) const {
    for (NodeId id : c) {
      if (id >= nodes_.size()) throw ConfigError("child id " + std::to_string(id) + " does not precede its parent");
    }
    return c;
  }
  void compute_varsets() const {
    varsets_.assign(nodes_.size(), {});
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      const NnfNode& n = nodes_[i];
      VarSet& out = varsets_[i];
      if (n.kind == NodeKind::literal) {
        out.push_back(std::abs(n.lit));
        continue;
      }
      if (n.children.size() == 1) {
        out = varsets_[n.children[0]];
        continue;
      }
      std::size_t total = 0;
      for (NodeId c : n.children) total += varsets_[c].size();
      out.reserve(total);
      for (NodeId c : n.children) out.insert(out.end(), varsets_[c].begin(), varsets_[c].end());
      std::sort(out.begin(), out.end());
      out.erase(std::unique(out.begin(), out.end()), out.end());
    }
  }

  std::vector<NnfNode> nodes_;
  std::optional<NodeId> root_;
  int num_vars_ = 0;
  mutable std::vector<VarSet> varsets_;
};

namespace detail {

inline std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

template <class Int>
Int to_int(std::string_view tok, std::size_t line, const char* what) {
  Int v{};
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || p != tok.data() + tok.size()) {
    throw ParseError(std::string("bad ") + what + " '" + std::string(tok) + "'", line);
  }
  return v;
}

inline std::vector<std::pair<std::size_t, std::string_view>> content_lines(std::string_view text) {
  std::vector<std::pair<std::size_t, std::string_view>> out;
  std::size_t lineno = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = text.substr(pos, end - pos);
    ++lineno;
    pos = end + 1;
    const auto toks = split_ws(line);
    if (toks.empty() || toks[0][0] == 'c' || toks[0][0] == '%') continue;
    out.emplace_back(lineno, line);
  }
  return out;
}

}  // namespace detail

/// Parses the c2d text format:
///   nnf <nodes> <edges> <vars>
///   L <lit> | A <k> <ids...> | O <var> <k> <ids...>
/// Node ids are line ordinals from 0; the last node is the root.
inline NnfDag parse_nnf(std::string_view text) {
  const auto lines = detail::content_lines(text);
  if (lines.empty()) throw ParseError("missing 'nnf' header");
  const auto head = detail::split_ws(lines[0].second);
  if (head.size() != 4 || head[0] != "nnf") throw ParseError("expected 'nnf <nodes> <edges> <vars>'", lines[0].first);
  const auto n_nodes = detail::to_int<std::size_t>(head[1], lines[0].first, "node count");
  const auto n_edges = detail::to_int<std::size_t>(head[2], lines[0].first, "edge count");
  const auto n_vars = detail::to_int<int>(head[3], lines[0].first, "variable count");
  if (n_vars < 0) throw ParseError("negative variable count", lines[0].first);
  if (lines.size() - 1 != n_nodes) {
    throw ParseError("header declares " + std::to_string(n_nodes) + " nodes, found " + std::to_string(lines.size() - 1));
  }
  if (n_nodes == 0) throw ParseError("NNF with no nodes", lines[0].first);

  struct Raw {
    NnfNode node;
    std::size_t line;
  };
  std::vector<Raw> raw;
  raw.reserve(n_nodes);
  std::size_t edges = 0;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto [ln, text_line] = lines[i];
    const auto t = detail::split_ws(text_line);
    NnfNode n;
    std::size_t first_child = 0;
    if (t[0] == "L") {
      if (t.size() != 2) throw ParseError("expected 'L <lit>'", ln);
      n.kind = NodeKind::literal;
      n.lit = detail::to_int<int>(t[1], ln, "literal");
      if (n.lit == 0 || std::abs(n.lit) > n_vars) throw ParseError("literal out of range: " + std::string(t[1]), ln);
    } else if (t[0] == "A") {
      if (t.size() < 2) throw ParseError("expected 'A <k> <ids...>'", ln);
      n.kind = NodeKind::conj;
      first_child = 2;
    } else if (t[0] == "O") {
      if (t.size() < 3) throw ParseError("expected 'O <var> <k> <ids...>'", ln);
      n.kind = NodeKind::disj;
      n.decision_var = detail::to_int<int>(t[1], ln, "decision variable");
      if (n.decision_var < 0 || n.decision_var > n_vars) throw ParseError("decision variable out of range", ln);
      first_child = 3;
    } else {
      throw ParseError("unknown node type '" + std::string(t[0]) + "'", ln);
    }
    if (first_child != 0) {
      const auto k = detail::to_int<std::size_t>(t[first_child - 1], ln, "child count");
      if (t.size() - first_child != k) {
        throw ParseError("child count " + std::to_string(k) + " but " + std::to_string(t.size() - first_child) + " ids", ln);
      }
      for (std::size_t j = first_child; j < t.size(); ++j) {
        const auto c = detail::to_int<NodeId>(t[j], ln, "node id");
        if (c >= n_nodes) throw ParseError("dangling child id " + std::to_string(c), ln);
        n.children.push_back(c);
      }
      edges += k;
      if (k == 0) n.kind = n.kind == NodeKind::conj ? NodeKind::constant_true : NodeKind::constant_false;
    }
    raw.push_back({std::move(n), ln});
  }
  if (edges != n_edges) {
    throw ParseError("header declares " + std::to_string(n_edges) + " edges, found " + std::to_string(edges));
  }

  // Order nodes so children precede parents, rejecting cycles.
  std::vector<NodeId> order;
  std::vector<int> state(raw.size(), 0);  // 0 new, 1 on stack, 2 done
  order.reserve(raw.size());
  for (NodeId start = 0; start < raw.size(); ++start) {
    if (state[start] != 0) continue;
    std::vector<std::pair<NodeId, std::size_t>> stack{{start, 0}};
    state[start] = 1;
    while (!stack.empty()) {
      auto& [id, next] = stack.back();
      const auto& ch = raw[id].node.children;
      if (next < ch.size()) {
        const NodeId c = ch[next++];
        if (state[c] == 1) throw ParseError("cycle through node " + std::to_string(c), raw[id].line);
        if (state[c] == 0) {
          state[c] = 1;
          stack.emplace_back(c, 0);
        }
      } else {
        state[id] = 2;
        order.push_back(id);
        stack.pop_back();
      }
    }
  }
  std::vector<NodeId> remap(raw.size());
  for (NodeId i = 0; i < order.size(); ++i) remap[order[i]] = i;

  NnfDag dag;
  for (NodeId old : order) {
    NnfNode n = raw[old].node;
    for (auto& c : n.children) c = remap[c];
    switch (n.kind) {
      case NodeKind::literal: dag.add_literal(n.lit); break;
      case NodeKind::constant_true: dag.add_true(); break;
      case NodeKind::constant_false: dag.add_false(); break;
      case NodeKind::conj: dag.add_and(std::move(n.children)); break;
      case NodeKind::disj: dag.add_or(std::move(n.children), n.decision_var); break;
    }
  }
  dag.set_root(remap[static_cast<NodeId>(raw.size() - 1)]);
  dag.set_num_vars(n_vars);
  return dag;
}

/// Parses "(and ...)", "(or ...)", signed integer literals, T and F.
/// Identical subterms are shared.
inline NnfDag parse_sexpr(std::string_view text) {
  NnfDag dag;
  std::map<std::string, NodeId> memo;
  std::size_t pos = 0;
  auto skip = [&] {
    while (pos < text.size()) {
      if (text[pos] == ';') {
        while (pos < text.size() && text[pos] != '\n') ++pos;
      } else if (std::isspace(static_cast<unsigned char>(text[pos]))) {
        ++pos;
      } else {
        break;
      }
    }
  };
  auto atom = [&] {
    const std::size_t s = pos;
    while (pos < text.size() && !std::isspace(static_cast<unsigned char>(text[pos])) && text[pos] != '(' && text[pos] != ')') ++pos;
    return text.substr(s, pos - s);
  };
  auto intern = [&](std::string key, auto make) {
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    const NodeId id = make();
    memo.emplace(std::move(key), id);
    return id;
  };
  auto parse = [&](auto&& self) -> NodeId {
    skip();
    if (pos >= text.size()) throw ParseError("unexpected end of expression");
    if (text[pos] == ')') throw ParseError("unexpected ')' at offset " + std::to_string(pos));
    if (text[pos] != '(') {
      const auto a = atom();
      if (a == "T") return intern("T", [&] { return dag.add_true(); });
      if (a == "F") return intern("F", [&] { return dag.add_false(); });
      const int lit = detail::to_int<int>(a, 0, "literal");
      if (lit == 0) throw ParseError("literal 0");
      return intern(std::to_string(lit), [&] { return dag.add_literal(lit); });
    }
    ++pos;
    skip();
    const auto op = atom();
    if (op != "and" && op != "or") throw ParseError("expected 'and' or 'or', got '" + std::string(op) + "'");
    std::vector<NodeId> kids;
    for (;;) {
      skip();
      if (pos >= text.size()) throw ParseError("unbalanced '('");
      if (text[pos] == ')') {
        ++pos;
        break;
      }
      kids.push_back(self(self));
    }
    std::string key(op);
    for (NodeId k : kids) key += " " + std::to_string(k);
    if (op == "and") return intern(key, [&] { return dag.add_and(kids); });
    return intern(key, [&] { return dag.add_or(kids); });
  };
  const NodeId root = parse(parse);
  skip();
  if (pos != text.size()) throw ParseError("trailing text after expression");
  dag.set_root(root);
  return dag;
}

/// Chooses the parser from the first significant character.
inline NnfDag parse_formula(std::string_view text) {
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    return c == '(' ? parse_sexpr(text) : parse_nnf(text);
  }
  throw ParseError("empty formula");
}

/// c2d text rendering of the nodes reachable from the root; the root is written last.
inline std::string render_nnf(const NnfDag& dag) {
  const NodeId root = dag.root();
  std::vector<char> live(dag.size(), 0);
  live[root] = 1;
  for (NodeId i = root + 1; i-- > 0;) {
    if (!live[i]) continue;
    for (NodeId c : dag.node(i).children) live[c] = 1;
  }
  std::vector<NodeId> id(dag.size(), 0);
  NodeId next = 0;
  std::size_t edges = 0;
  for (NodeId i = 0; i <= root; ++i) {
    if (!live[i]) continue;
    id[i] = next++;
    edges += dag.node(i).children.size();
  }
  std::ostringstream out;
  out << "nnf " << next << ' ' << edges << ' ' << dag.num_vars() << '\n';
  for (NodeId i = 0; i <= root; ++i) {
    if (!live[i]) continue;
    const NnfNode& n = dag.node(i);
    switch (n.kind) {
      case NodeKind::literal: out << "L " << n.lit; break;
      case NodeKind::constant_true: out << "A 0"; break;
      case NodeKind::constant_false: out << "O 0 0"; break;
      case NodeKind::conj: out << "A " << n.children.size(); break;
      case NodeKind::disj: out << "O " << n.decision_var << ' ' << n.children.size(); break;
    }
    for (NodeId c : n.children) out << ' ' << id[c];
    out << '\n';
  }
  return out.str();
}

struct StructureReport {
  bool decomposable = true;
  bool decision_form = true;
  bool smooth = true;
  std::optional<NodeId> first_non_decomposable;
  std::optional<NodeId> first_non_decision;
  std::optional<NodeId> first_non_smooth;
  /// Decision variable of each disjunction in decision form, 0 elsewhere.
  std::vector<int> decision_vars;

  bool is_decision_dnnf() const { return decomposable && decision_form; }
};

namespace detail {

/// Literals a branch commits to: itself, or the literal children of a conjunction.
inline std::vector<int> branch_literals(const NnfDag& dag, NodeId id) {
  const NnfNode& n = dag.node(id);
  if (n.kind == NodeKind::literal) return {n.lit};
  std::vector<int> out;
  if (n.kind == NodeKind::conj) {
    for (NodeId c : n.children) {
      if (dag.node(c).kind == NodeKind::literal) out.push_back(dag.node(c).lit);
    }
  }
  return out;
}

/// Variable x with x in one branch and -x in the other, preferring `hint`.
inline int decision_variable(const NnfDag& dag, const NnfNode& n) {
  if (n.children.size() != 2) return 0;
  const auto a = branch_literals(dag, n.children[0]);
  const auto b = branch_literals(dag, n.children[1]);
  int found = 0;
  for (int l : a) {
    if (std::find(b.begin(), b.end(), -l) == b.end()) continue;
    if (n.decision_var == 0 || std::abs(l) == n.decision_var) return std::abs(l);
    found = found == 0 ? std::abs(l) : found;
  }
  return n.decision_var == 0 ? found : 0;
}

}  // namespace detail

/// Checks decomposability, decision form and smoothness of every node reachable from the root.
inline StructureReport validate(const NnfDag& dag) {
  StructureReport r;
  r.decision_vars.assign(dag.size(), 0);
  const auto& vs = dag.varsets();
  std::vector<char> live(dag.size(), 0);
  live[dag.root()] = 1;
  for (NodeId i = dag.root() + 1; i-- > 0;) {
    if (!live[i]) continue;
    for (NodeId c : dag.node(i).children) live[c] = 1;
  }
  for (NodeId i = 0; i < dag.size(); ++i) {
    if (!live[i]) continue;
    const NnfNode& n = dag.node(i);
    if (n.kind == NodeKind::conj) {
      std::size_t total = 0;
      for (NodeId c : n.children) total += vs[c].size();
      if (total != vs[i].size() && r.decomposable) {
        r.decomposable = false;
        r.first_non_decomposable = i;
      }
    } else if (n.kind == NodeKind::disj) {
      const int x = detail::decision_variable(dag, n);
      r.decision_vars[i] = x;
      if (x == 0 && r.decision_form) {
        r.decision_form = false;
        r.first_non_decision = i;
      }
      for (NodeId c : n.children) {
        if (vs[c] != vs[i] && r.smooth) {
          r.smooth = false;
          r.first_non_smooth = i;
        }
      }
    }
  }
  return r;
}

}  // namespace pwmc
