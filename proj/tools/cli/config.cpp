#include <charconv>
#include <cmath>
#include <string_view>

#include "cli.hpp"

namespace revsphere::cli {

namespace {

double parse_real(std::string_view s) {
  double v = 0.0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size() || !std::isfinite(v))
    throw UsageError("not a finite real: '" + std::string(s) + "'");
  return v;
}

void reject(bool present, const char* flag, const std::string& family) {
  if (present) throw UsageError(std::string(flag) + " does not apply to family " + family);
}

}  // namespace

BFunction parse_b(const std::string& text) {
  if (text == "sin2sq") return BFunction::sin2sq();
  constexpr std::string_view prefix = "sin2sq-poly:";
  if (text.rfind(prefix, 0) != 0) throw UsageError("--b must be sin2sq or sin2sq-poly:c0,c1,...");
  std::string_view rest(text);
  rest.remove_prefix(prefix.size());
  if (rest.empty()) throw UsageError("sin2sq-poly needs at least one coefficient");
  std::vector<double> coeffs;
  while (true) {
    const auto comma = rest.find(',');
    coeffs.push_back(parse_real(rest.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  return BFunction::sin2sq_poly(std::move(coeffs));
}

MetricProfile build_profile(const FamilySpec& spec) {
  const std::string& name = spec.name;
  try {
    if (name == "unit-sphere") {
      reject(spec.lambda.has_value(), "--lambda", name);
      reject(spec.alpha.has_value(), "--alpha", name);
      reject(spec.n.has_value(), "--n", name);
      reject(spec.b.has_value(), "--b", name);
      return make_unit_sphere();
    }
    if (name == "lambda") {
      reject(spec.alpha.has_value(), "--alpha", name);
      reject(spec.n.has_value(), "--n", name);
      reject(spec.b.has_value(), "--b", name);
      return make_lambda_profile(spec.lambda.value_or(4.0));
    }
    if (name == "theorem-a") {
      reject(spec.lambda.has_value(), "--lambda", name);
      reject(spec.alpha.has_value(), "--alpha", name);
      reject(spec.b.has_value(), "--b", name);
      return make_theorem_a(spec.n.value_or(8));
    }
    if (name == "h") {
      reject(spec.lambda.has_value(), "--lambda", name);
      const int n = spec.n.value_or(0);
      if (n < 0) throw UsageError("--n must be >= 0");
      const HGenerator gen(spec.alpha.value_or(1.0 / 3.0), n, parse_b(spec.b.value_or("sin2sq")));
      const HConditionReport rep = validate_h_conditions(gen, 2000);
      if (!rep.h1_positive) throw UsageError("h' is not positive on [0, pi/2); the metric is singular");
      if (!rep.symmetric) throw UsageError("h is not symmetric about pi/2");
      return make_h_profile(gen);
    }
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
  throw UsageError("unknown family '" + name + "'");
}

}  // namespace revsphere::cli
