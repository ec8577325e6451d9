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

// Command implementations behind the pwmc tool: instance loading, the count
// pipelines, and text/JSON reports. Argument parsing lives in tools/.

#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pwmc/enumerate.hpp"
#include "pwmc/error.hpp"
#include "pwmc/evaluator.hpp"
#include "pwmc/generators.hpp"
#include "pwmc/metrics.hpp"
#include "pwmc/nnf.hpp"
#include "pwmc/weights.hpp"

namespace pwmc::cli {

enum ExitCode : int { kOk = 0, kInputError = 1, kNotMet = 2 };

/// Printed digits never exceed this, whatever the guarantee.
inline constexpr int kMaxPrintedDigits = 1000;

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
}

/// Formula plus optional weight file; no weight file means unit weights.
inline Instance load_instance(const std::string& nnf_path, const std::string& weights_path) {
  NnfDag dag = parse_formula(read_file(nnf_path));
  WeightMap w = weights_path.empty() ? WeightMap{} : parse_weights(read_file(weights_path));
  return Instance::make(std::move(dag), std::move(w));
}

/// Significant digits shown for a value certified to `digits` decimal digits.
/// Exact values use the fewest digits (at least 3) that render them exactly,
/// capped at target + 2.
inline int printed_digits(const Rational& v, std::optional<double> digits, double target) {
  if (!digits) return 2;
  if (std::isinf(*digits)) {
    const int cap = std::clamp(static_cast<int>(std::ceil(target)) + 2, 3, kMaxPrintedDigits);
    for (int s = 3; s < cap; ++s) {
      if (Rational::from_decimal(v.to_scientific(s)) == v) return s;
    }
    return cap;
  }
  return std::clamp(static_cast<int>(std::ceil(*digits)) + 2, 2, kMaxPrintedDigits);
}

inline std::string format_value(const EvalResult& r, double target) {
  return r.value.to_scientific(printed_digits(r.value, r.guaranteed_digits, target));
}

inline std::string format_digits(std::optional<double> d) {
  if (!d) return "none";
  if (std::isinf(*d)) return "exact";
  std::ostringstream ss;
  ss.setf(std::ios::fixed);
  ss.precision(3);
  ss << *d;
  return ss.str();
}

enum class Mode { hybrid, float_only, interval, rational };

inline std::optional<Mode> parse_mode(const std::string& s) {
  if (s == "hybrid") return Mode::hybrid;
  if (s == "float") return Mode::float_only;
  if (s == "interval") return Mode::interval;
  if (s == "rational") return Mode::rational;
  return std::nullopt;
}

struct CountOptions {
  double target = 15.0;
  Mode mode = Mode::hybrid;
  std::optional<int> precision;
  std::size_t rational_max_bits = 0;
};

/// Runs one pipeline. Failures to certify are reported in the result, not thrown.
inline EvalResult run_count(const Instance& in, const CountOptions& opt) {
  switch (opt.mode) {
    case Mode::hybrid: return hybrid_count(in, opt.target, {opt.rational_max_bits});
    case Mode::float_only: {
      const auto p = opt.precision ? opt.precision : float_width(in, opt.target);
      if (!p) {
        EvalResult r;
        r.method = "float";
        r.stages.push_back({"float", 0, std::nullopt, false, 0.0, 0, "no supported width certifies the target"});
        return r;
      }
      EvalResult r = evaluate_float(in.circuit, *p);
      r.guaranteed_digits = float_guarantee(in, *p);
      r.stages.back().guaranteed_digits = r.guaranteed_digits;
      if (!r.guaranteed_digits) r.stages.back().note = "mixed-sign weights: no a-priori bound, precision unknown";
      r.stages.back().accepted = r.meets(opt.target);
      return r;
    }
    case Mode::interval: {
      int p = 64;
      if (opt.precision) {
        p = *opt.precision;
      } else if (const auto w = select_fraction_width(in.num_vars(), opt.target, in.rescaled())) {
        p = std::max(64, *w);
      }
      EvalResult r = evaluate_interval(in.circuit, p);
      r.stages.back().accepted = r.meets(opt.target);
      return r;
    }
    case Mode::rational: return evaluate_rational(in.circuit, opt.rational_max_bits);
  }
  throw ConfigError("unknown mode");
}

inline nlohmann::json digits_json(std::optional<double> d) {
  if (!d || std::isinf(*d)) return nullptr;
  return *d;
}

/// Machine-readable run report; see README for the schema.
inline nlohmann::json report_json(const std::string& id, const Instance& in, const EvalResult& r, double target) {
  nlohmann::json stages = nlohmann::json::array();
  for (const StageRecord& s : r.stages) {
    stages.push_back({{"method", s.method},
                      {"precision", s.precision},
                      {"guaranteed_digits", digits_json(s.guaranteed_digits)},
                      {"exact", s.guaranteed_digits && std::isinf(*s.guaranteed_digits)},
                      {"accepted", s.accepted},
                      {"seconds", s.seconds},
                      {"op_count", s.op_count},
                      {"note", s.note}});
  }
  const bool exact = r.guaranteed_digits && std::isinf(*r.guaranteed_digits);
  nlohmann::json j = {{"instance", id},
                      {"num_vars", in.plan.num_vars},
                      {"nodes", in.dag.size()},
                      {"weights", to_string(classify(in.weights))},
                      {"target_digits", target},
                      {"method", r.method},
                      {"precision", r.precision},
                      {"value", r.stages.empty() || r.stages.back().accepted || r.guaranteed_digits ? format_value(r, target) : ""},
                      {"exact", exact},
                      {"exact_value", exact ? nlohmann::json(r.value.to_string()) : nlohmann::json(nullptr)},
                      {"guaranteed_digits", digits_json(r.guaranteed_digits)},
                      {"meets_target", r.meets(target)},
                      {"op_count", r.op_count},
                      {"seconds", r.seconds},
                      {"overflow", r.overflow},
                      {"underflow", r.underflow},
                      {"stages", stages}};
  if (r.interval) j["interval"] = {{"lo", r.interval->lo().to_rational().to_scientific(20)}, {"hi", r.interval->hi().to_rational().to_scientific(20)}};
  return j;
}

inline std::string report_text(const Instance& in, const EvalResult& r, double target) {
  std::ostringstream out;
  out << "variables  " << in.plan.num_vars << "\n";
  out << "nodes      " << in.dag.size() << "\n";
  out << "weights    " << to_string(classify(in.weights)) << "\n";
  out << "method     " << r.method << "\n";
  out << "value      " << format_value(r, target) << "\n";
  if (r.guaranteed_digits && std::isinf(*r.guaranteed_digits)) out << "exact      " << r.value.to_string() << "\n";
  if (r.interval) out << "interval   " << r.interval->to_string() << "\n";
  out << "digits     " << format_digits(r.guaranteed_digits) << " (target " << target << ")\n";
  for (const StageRecord& s : r.stages) {
    out << "stage      " << s.method << "  digits " << format_digits(s.guaranteed_digits) << "  "
        << (s.accepted ? "accepted" : "rejected") << "  ops " << s.op_count << "  " << s.seconds << " s";
    if (!s.note.empty()) out << "  (" << s.note << ")";
    out << "\n";
  }
  return out.str();
}

/// Outcome of the bound command; `e` is empty when the circuit has a negative constant.
struct BoundReport {
  std::optional<mpz_class> e;
  int precision = 64;
  std::optional<double> floor;
};

inline BoundReport run_bound(const Instance& in, int p) {
  BoundReport b;
  b.precision = p;
  b.e = error_bound(in.circuit, in.circuit.root);
  if (b.e) b.floor = bound_floor(p, *b.e);
  return b;
}

/// Method names accepted by `check`.
inline EvalResult run_method(const Instance& in, const std::string& method, int p) {
  if (method == "erd") return evaluate_erd(in.circuit);
  if (method == "double") return evaluate_double_baseline(in.circuit);
  if (method == "softfloat") return evaluate_softfloat(in.circuit, p);
  if (method == "interval") return evaluate_interval(in.circuit, p);
  if (method == "rational") return evaluate_rational(in.circuit);
  throw ConfigError("unknown method '" + method + "' (expected erd, double, softfloat, interval or rational)");
}

struct CheckReport {
  EvalResult result;
  Rational oracle;
  PrecisionScore score;
  std::optional<double> bound;  // a-priori floor for this method, when one applies
  bool above_bound() const { return !bound || score.digits >= *bound; }
};

inline CheckReport run_check(const Instance& in, const std::string& method, int p, const std::string& oracle) {
  CheckReport c;
  c.result = run_method(in, method, p);
  if (oracle == "brute") {
    c.oracle = model_enumerate(in.dag, in.weights);
  } else if (oracle == "rational") {
    c.oracle = evaluate_rational(in.circuit).value;
  } else {
    throw ConfigError("unknown oracle '" + oracle + "' (expected rational or brute)");
  }
  c.score = score(c.result.value, c.oracle);
  const int width = c.result.precision;
  if (method == "erd" || method == "softfloat") c.bound = float_guarantee(in, width);
  if (method == "interval") c.bound = c.result.guaranteed_digits;
  return c;
}

/// Files written by `generate`.
struct GeneratedFiles {
  std::filesystem::path formula;
  std::filesystem::path weights;
};

inline GeneratedFiles write_instance(const GeneratedInstance& g, const std::filesystem::path& dir, const std::string& stem) {
  std::filesystem::create_directories(dir);
  GeneratedFiles f{dir / (stem + ".nnf"), dir / (stem + ".weights")};
  write_file(f.formula, render_nnf(g.dag));
  write_file(f.weights, render_weights(g.weights));
  return f;
}

}  // namespace pwmc::cli
