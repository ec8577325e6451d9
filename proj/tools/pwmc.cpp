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

// pwmc: weighted model counting with guaranteed decimal precision.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "pwmc/cli.hpp"
#include "pwmc/pwmc.hpp"

namespace {

using namespace pwmc;
using namespace pwmc::cli;

struct CountArgs {
  std::string formula, weights;
  double target = 15.0;
  std::string mode = "hybrid";
  std::optional<int> precision;
  std::size_t max_bits = 0;
  bool json = false;
};

int cmd_count(const CountArgs& a) {
  const auto mode = parse_mode(a.mode);
  if (!mode) throw ConfigError("unknown mode '" + a.mode + "'");
  const Instance in = load_instance(a.formula, a.weights);
  const EvalResult r = run_count(in, {a.target, *mode, a.precision, a.max_bits});
  if (a.json) {
    std::cout << report_json(a.formula, in, r, a.target).dump(2) << "\n";
  } else {
    std::cout << report_text(in, r, a.target);
  }
  return r.meets(a.target) ? kOk : kNotMet;
}

struct BoundArgs {
  std::string formula, weights;
  int precision = 64;
};

int cmd_bound(const BoundArgs& a) {
  const Instance in = load_instance(a.formula, a.weights);
  const BoundReport b = run_bound(in, a.precision);
  if (!b.e) {
    std::cout << "refused: the circuit has negative constants; e(psi) only bounds nonnegative evaluation\n";
    return kNotMet;
  }
  std::cout << "e(psi)     " << b.e->get_str() << "\n";
  std::cout << "precision  " << b.precision << "\n";
  if (b.floor) {
    std::printf("digits     %.3f\n", *b.floor);
  } else {
    std::cout << "digits     none (precision below 2 log2 e)\n";
  }
  return kOk;
}

struct GenerateArgs {
  std::string family;
  int n = 10;
  std::optional<std::uint64_t> seed;
  std::string weight = "0.5";
  std::size_t nodes = 0;
  int precision = 128;
  int k_lo = 1, k_hi = 1000;
  std::string out = ".";
};

int cmd_generate(const GenerateArgs& a) {
  GeneratedInstance g;
  std::string stem;
  if (a.family == "tau") {
    g = gen_tau(a.n);
    stem = "tau-" + std::to_string(a.n);
  } else if (a.family == "product") {
    g = gen_product(a.n, Rational::parse(a.weight));
    stem = "product-" + std::to_string(a.n);
  } else if (a.family == "optimized-product") {
    const ProductSweepPoint best = optimize_product(a.n, a.k_lo, a.k_hi, a.precision);
    std::cout << "weight     " << exact_text(best.weight) << "\n";
    std::printf("digits     %.4f\n", best.digits);
    g = gen_product(a.n, best.weight);
    stem = "optimized-product-" + std::to_string(a.n);
  } else if (const auto fam = parse_weight_family(a.family)) {
    if (!a.seed) throw ConfigError("family " + a.family + " is random and requires --seed");
    const std::size_t budget = a.nodes ? a.nodes : 10 * static_cast<std::size_t>(a.n);
    g = gen_random_instance(*fam, a.n, budget, *a.seed);
    stem = std::string(to_string(*fam)) + "-" + std::to_string(a.n) + "-" + std::to_string(*a.seed);
  } else {
    throw ConfigError("unknown family '" + a.family + "'");
  }
  const GeneratedFiles f = write_instance(g, a.out, stem);
  std::cout << f.formula.string() << "\n" << f.weights.string() << "\n";
  return kOk;
}

struct CheckArgs {
  std::string formula, weights;
  std::string method = "softfloat";
  int precision = 128;
  std::string oracle = "rational";
};

int cmd_check(const CheckArgs& a) {
  const Instance in = load_instance(a.formula, a.weights);
  const CheckReport c = run_check(in, a.method, a.precision, a.oracle);
  std::cout << "method     " << c.result.method << "\n";
  std::cout << "value      " << c.result.value.to_scientific(25) << "\n";
  std::cout << "oracle     " << c.oracle.to_scientific(25) << "\n";
  std::cout << "delta      " << (c.score.exact() ? std::string("0") : c.score.delta.to_scientific(4)) << "\n";
  std::cout << "digits     " << format_digits(c.score.digits) << "\n";
  if (c.result.underflow) std::cout << "underflow  yes\n";
  if (c.result.overflow) std::cout << "overflow   yes\n";
  if (c.bound) {
    std::cout << "bound      " << format_digits(c.bound) << "  " << (c.above_bound() ? "holds" : "VIOLATED") << "\n";
  } else {
    std::cout << "bound      none\n";
  }
  return c.above_bound() ? kOk : kNotMet;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weighted model counting with guaranteed decimal precision"};
  app.require_subcommand(1);

  CountArgs count;
  auto* c = app.add_subcommand("count", "Weighted count to a target precision");
  c->add_option("formula", count.formula, "NNF or S-expression formula")->required()->check(CLI::ExistingFile);
  c->add_option("weights", count.weights, "Weight file (default: unit weights)")->check(CLI::ExistingFile);
  c->add_option("-D,--target-precision", count.target, "Target decimal digits")->check(CLI::NonNegativeNumber);
  c->add_option("--mode", count.mode, "hybrid, float, interval or rational")->check(CLI::IsMember({"hybrid", "float", "interval", "rational"}));
  c->add_option("--precision", count.precision, "Fraction width for float or interval mode")->check(CLI::Range(2, kMaxFloatWidth));
  c->add_option("--rational-max-bits", count.max_bits, "Abort exact evaluation beyond this many bits (0: no limit)");
  c->add_flag("--json", count.json, "Print a JSON report");

  BoundArgs bound;
  auto* b = app.add_subcommand("bound", "A-priori error bound e(psi) and its digit floor");
  b->add_option("formula", bound.formula)->required()->check(CLI::ExistingFile);
  b->add_option("weights", bound.weights)->check(CLI::ExistingFile);
  b->add_option("--precision", bound.precision, "Fraction width")->check(CLI::Range(2, kMaxFloatWidth));

  GenerateArgs gen;
  auto* g = app.add_subcommand("generate", "Write a benchmark formula and weight file");
  g->add_option("family", gen.family, "tau, product, optimized-product, uniform+, exponential+, uniform-mixed, exponential-mixed, limits-mixed")->required();
  g->add_option("--n", gen.n, "Number of variables")->check(CLI::PositiveNumber);
  g->add_option("--seed", gen.seed, "Seed (required for random families)");
  g->add_option("--weight", gen.weight, "Literal weight for product");
  g->add_option("--nodes", gen.nodes, "Node budget for random formulas (default 10n)");
  g->add_option("--precision", gen.precision, "Width for optimized-product")->check(CLI::Range(2, kMaxFloatWidth));
  g->add_option("--k-lo", gen.k_lo, "First sweep step for optimized-product");
  g->add_option("--k-hi", gen.k_hi, "Last sweep step for optimized-product");
  g->add_option("--out", gen.out, "Output directory");

  CheckArgs check;
  auto* k = app.add_subcommand("check", "Score one method against an exact oracle");
  k->add_option("formula", check.formula)->required()->check(CLI::ExistingFile);
  k->add_option("weights", check.weights)->check(CLI::ExistingFile);
  k->add_option("--method", check.method, "erd, double, softfloat, interval or rational");
  k->add_option("--precision", check.precision, "Fraction width")->check(CLI::Range(2, kMaxFloatWidth));
  k->add_option("--oracle", check.oracle, "rational or brute")->check(CLI::IsMember({"rational", "brute"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (c->parsed()) return cmd_count(count);
    if (b->parsed()) return cmd_bound(bound);
    if (g->parsed()) return cmd_generate(gen);
    if (k->parsed()) return cmd_check(check);
  } catch (const pwmc::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}
