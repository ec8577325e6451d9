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

// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits nonzero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "pwmc/pwmc.hpp"

using pwmc::Rational;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

/// Agreement to 3 significant figures: within half a unit of the third digit of `ref`.
bool same_3sf(double ours, double ref) {
  const double unit = std::pow(10.0, std::floor(std::log10(std::abs(ref))) - 2);
  return std::abs(ours - ref) <= 0.5 * unit;
}

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

Outcome reference_constants() {
  Outcome o;
  struct Row {
    int p;
    double eps, delta, wmc;
  };
  // Reference values: epsilon, its digit floor, and the count floor at n = 1e7.
  const Row rows[] = {{53, 1.11e-16, 15.95, 8.11}, {64, 5.42e-20, 19.27, 11.42}, {128, 2.94e-39, 38.53, 30.69}, {256, 8.64e-78, 77.06, 69.22}};
  int ok = 0;
  for (const Row& r : rows) {
    const auto e = pwmc::sf_epsilon(r.p);
    const double eps = std::stod(e.value.to_scientific(6));
    const double floor = *pwmc::precision_floor(r.p, 10000000, pwmc::FloorConstant::rescaled);
    for (auto [ours, ref] : {std::pair{eps, r.eps}, std::pair{e.digit_floor(), r.delta}, std::pair{floor, r.wmc}}) {
      if (same_3sf(ours, ref)) {
        ++ok;
      } else {
        o.pass = false;
        o.detail += " p=" + std::to_string(r.p) + ":" + fmt("%.4g", ours) + "!=" + fmt("%.4g", ref);
      }
    }
  }
  o.detail = std::to_string(ok) + "/12 cells" + o.detail;
  return o;
}

Outcome decision_dnnf_bound() {
  Outcome o;
  int checks = 0, violations = 0;
  double worst = 0.0;  // largest delta / bound
  for (std::uint64_t i = 0; i < 200; ++i) {
    const int n = 1 + static_cast<int>(i % 15);
    const auto dag = pwmc::gen_random_ddnnf(n, 60, 1000 + i);
    const auto vars = static_cast<long>(dag.varset(dag.root()).size());
    for (std::uint64_t draw = 0; draw < 3; ++draw) {
      const auto fam = draw == 1 ? pwmc::WeightFamily::exponential_pos : pwmc::WeightFamily::uniform_pos;
      const auto in = pwmc::Instance::make(dag, pwmc::gen_weights(fam, n, 7919 * i + draw));
      const auto& c = in.circuit;
      const Rational exact = pwmc::evaluate_rational(c, 0, c.formula_root).value;
      for (int p : {53, 64}) {
        const Rational approx = pwmc::evaluate_softfloat(c, p, pwmc::Round::nearest_even, c.formula_root).value;
        const Rational bound = Rational(4 * vars - 2) * Rational::pow2(-p);
        const Rational delta = pwmc::approx_error(approx, exact);
        ++checks;
        if (delta > bound) ++violations;
        if (!delta.is_zero()) worst = std::max(worst, (delta / bound).to_double());
      }
    }
  }
  o.pass = violations == 0;
  o.detail = std::to_string(checks) + " checks, " + std::to_string(violations) + " violations, max delta/bound " + fmt("%.3f", worst);
  return o;
}

Outcome nonnegative_floor() {
  Outcome o;
  int count = 0, below = 0;
  double margin = INFINITY;
  auto check = [&](const pwmc::NnfDag& dag, const pwmc::WeightMap& w) {
    const auto in = pwmc::Instance::make(dag, w);
    const Rational exact = pwmc::evaluate_rational(in.circuit).value;
    const Rational approx = pwmc::evaluate_softfloat(in.circuit, 128).value;
    const double n = static_cast<double>(in.num_vars());
    const double floor = 128 * std::log10(2.0) - std::log10(n) - std::log10(7.0);
    const double got = pwmc::decimal_precision(approx, exact);
    ++count;
    if (got < floor) ++below;
    margin = std::min(margin, got - floor);
  };
  for (auto fam : {pwmc::WeightFamily::uniform_pos, pwmc::WeightFamily::exponential_pos}) {
    for (std::uint64_t s = 0; s < 150; ++s) {
      const int n = 5 + static_cast<int>(s % 40);
      const auto g = pwmc::gen_random_instance(fam, n, 10 * static_cast<std::size_t>(n), 2000 + s);
      check(g.dag, g.weights);
    }
  }
  for (int n : {10, 1000, 20000}) {
    const auto g = pwmc::gen_product(n, Rational(1) + Rational(mpz_class(453), mpz_class(1000000000)));
    check(g.dag, g.weights);
  }
  o.pass = below == 0;
  o.detail = std::to_string(count) + " instances, " + std::to_string(below) + " below floor, min margin " + fmt("%.3f", margin);
  return o;
}

Outcome optimized_product() {
  Outcome o;
  const int n = 1000000;
  const Rational w = Rational::parse("1.000000453");
  const auto g = pwmc::gen_product(n, w);
  const auto in = pwmc::Instance::make(g.dag, g.weights);
  const Rational approx = pwmc::evaluate_softfloat(in.circuit, 128).value;
  const Rational exact = w.pow(static_cast<unsigned long>(n));
  const double d = pwmc::decimal_precision(approx, exact);
  o.pass = d >= 32.055 && d <= 33.0;
  o.detail = "Delta " + fmt("%.3f", d) + " (window [32.055, 33.0])";
  return o;
}

Outcome tau_ladder() {
  Outcome o;
  const auto t = pwmc::gen_tau(3);
  const auto in = pwmc::Instance::make(t.dag, t.weights);
  const Rational expect = Rational::pow10(-27);
  const bool exact_ok = pwmc::model_enumerate(t.dag, t.weights) == expect && pwmc::evaluate_rational(in.circuit).value == expect;
  const double sf = pwmc::decimal_precision(pwmc::evaluate_softfloat(in.circuit, 128).value, expect);
  const double i128 = *pwmc::evaluate_interval(in.circuit, 128).guaranteed_digits;
  const double i256 = *pwmc::evaluate_interval(in.circuit, 256).guaranteed_digits;
  const auto h = pwmc::hybrid_count(in, 30);
  const bool hybrid_ok = h.method == "rational" && h.value == expect && h.stages.size() == 3;
  o.pass = exact_ok && sf < 1.0 && i128 < 30 && i256 < 30 && hybrid_ok;
  o.detail = std::string("exact ") + (exact_ok ? "1e-27" : "wrong") + ", softfloat-128 Delta " + fmt("%.2f", sf) + ", interval-128 " +
             fmt("%.2f", i128) + ", interval-256 " + fmt("%.2f", i256) + ", hybrid " + h.method;
  return o;
}

Outcome interval_soundness() {
  Outcome o;
  int stages = 0, outside = 0, overclaimed = 0;
  for (auto fam : {pwmc::WeightFamily::uniform_mixed, pwmc::WeightFamily::limits_mixed}) {
    for (std::uint64_t s = 0; s < 100; ++s) {
      const auto g = pwmc::gen_random_instance(fam, 20, 200, 3000 + s);
      const auto in = pwmc::Instance::make(g.dag, g.weights);
      const Rational exact = pwmc::evaluate_rational(in.circuit).value;
      for (int p : {64, 128, 256}) {
        const auto r = pwmc::evaluate_interval(in.circuit, p);
        ++stages;
        if (!r.interval->contains(exact)) ++outside;
        if (*r.guaranteed_digits > pwmc::decimal_precision(r.value, exact)) ++overclaimed;
      }
    }
  }
  o.pass = outside == 0 && overclaimed == 0;
  o.detail = std::to_string(stages) + " interval results on 200 instances, " + std::to_string(outside) + " not enclosing, " + std::to_string(overclaimed) +
             " overclaiming";
  return o;
}

Outcome erd_range() {
  Outcome o;
  const int n = 100000;
  const auto g = pwmc::gen_product(n, Rational::pow10(-100));
  const auto in = pwmc::Instance::make(g.dag, g.weights);
  const auto dbl = pwmc::evaluate_double_baseline(in.circuit);
  const auto erd = pwmc::evaluate_erd(in.circuit);
  const double d = pwmc::decimal_precision(erd.value, Rational::pow10(-100LL * n));
  const double floor = 53 * std::log10(2.0) - std::log10(static_cast<double>(n)) - std::log10(4.0);

  pwmc::SplitMix64 rng(4000);
  int mismatches = 0;
  for (int i = 0; i < 10000; ++i) {
    const double fa = 1.0 + static_cast<double>(rng.next() >> 11) * 0x1p-53;
    const double fb = 1.0 + static_cast<double>(rng.next() >> 11) * 0x1p-53;
    const auto ea = static_cast<std::int64_t>(rng.uniform(0, 4000)) - 2000;
    const auto eb = ea + static_cast<std::int64_t>(rng.uniform(0, 104)) - 52;
    const pwmc::Erd a = pwmc::Erd::normalize(rng.coin() ? -fa : fa, ea), b = pwmc::Erd::normalize(rng.coin() ? -fb : fb, eb);
    const auto sa = pwmc::SoftFloat::from_rational(a.to_rational(), 53), sb = pwmc::SoftFloat::from_rational(b.to_rational(), 53);
    if ((a + b).to_rational() != (sa + sb).to_rational()) ++mismatches;
    if ((a * b).to_rational() != (sa * sb).to_rational()) ++mismatches;
  }
  o.pass = dbl.underflow && dbl.value.is_zero() && d >= floor && mismatches == 0;
  o.detail = std::string("double ") + (dbl.underflow ? "underflow flagged" : "no underflow flag") + ", ERD Delta " + fmt("%.2f", d) + " >= " +
             fmt("%.2f", floor) + ", " + std::to_string(mismatches) + " mismatches in 20000 ops";
  return o;
}

Outcome circuit_bound() {
  Outcome o;
  int violations = 0;
  double worst = 0.0;
  for (std::uint64_t s = 0; s < 500; ++s) {
    const auto rc = pwmc::gen_random_circuit(1 + s % 200, 5000 + s);
    const mpz_class e = *pwmc::error_bound(rc.circuit, rc.root);
    const Rational exact = pwmc::evaluate_rational(rc.circuit).value;
    const Rational approx = pwmc::evaluate_softfloat(rc.circuit, 64).value;
    const Rational bound = Rational(e, 1) * Rational::pow2(-64);
    const Rational delta = pwmc::approx_error(approx, exact);
    if (delta > bound) ++violations;
    if (!delta.is_zero()) worst = std::max(worst, (delta / bound).to_double());
  }
  o.pass = violations == 0;
  o.detail = "500 circuits, " + std::to_string(violations) + " violations, max delta/bound " + fmt("%.3f", worst);
  return o;
}

Outcome hybrid_accounting() {
  Outcome o;
  int runs = 0, uncertified = 0, wrong = 0, nonneg_escalated = 0;
  int fallback_uniform = 0, fallback_limits = 0;
  for (auto fam : pwmc::kAllWeightFamilies) {
    for (std::uint64_t s = 0; s < 100; ++s) {
      const auto g = pwmc::gen_random_instance(fam, 30, 300, 6000 + s);
      const auto in = pwmc::Instance::make(g.dag, g.weights);
      const Rational exact = pwmc::evaluate_rational(in.circuit).value;
      for (double D : {1.0, 15.0, 30.0, 70.0}) {
        const auto r = pwmc::hybrid_count(in, D);
        ++runs;
        if (!r.meets(D)) ++uncertified;
        if (pwmc::decimal_precision(r.value, exact) < D) ++wrong;
        if (pwmc::is_nonnegative_family(fam)) {
          for (const auto& st : r.stages) {
            if (st.method.rfind("interval", 0) == 0 || st.method == "rational") ++nonneg_escalated;
          }
        }
        if (D == 30.0 && r.method == "rational") {
          if (fam == pwmc::WeightFamily::uniform_mixed) ++fallback_uniform;
          if (fam == pwmc::WeightFamily::limits_mixed) ++fallback_limits;
        }
      }
    }
  }
  o.pass = uncertified == 0 && wrong == 0 && nonneg_escalated == 0 && fallback_limits > fallback_uniform;
  o.detail = std::to_string(runs) + " runs, " + std::to_string(uncertified) + " uncertified, " + std::to_string(wrong) + " below D vs oracle, " +
             std::to_string(nonneg_escalated) + " nonnegative escalations, rational fallbacks at D=30: limits " + std::to_string(fallback_limits) +
             " vs uniform " + std::to_string(fallback_uniform);
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"precision constants", reference_constants},
      {"decision-DNNF rounding bound", decision_dnnf_bound},
      {"nonnegative precision floor at p=128", nonnegative_floor},
      {"optimized product n=1e6", optimized_product},
      {"tau cancellation ladder", tau_ladder},
      {"interval soundness", interval_soundness},
      {"ERD range and fidelity", erd_range},
      {"circuit bound soundness", circuit_bound},
      {"hybrid accounting", hybrid_accounting},
  };
  int failed = 0;
  int index = 0;
  for (const auto& [name, run] : criteria) {
    ++index;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("[%s] %d %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", index, name, o.detail.c_str(), secs);
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
