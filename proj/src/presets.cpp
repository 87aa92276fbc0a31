#include "stein_pairs/presets.hpp"

#include <charconv>
#include <cmath>

#include "stein_pairs/curie_weiss.hpp"

namespace stein_pairs::presets {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return parts;
}

double parse_real(const std::string& text, const std::string& what) {
  double value = 0.0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (text.empty() || ec != std::errc() || ptr != end || !std::isfinite(value))
    throw ParameterError("invalid " + what + ": '" + text + "'");
  return value;
}

namespace {

long long parse_integer(const std::string& text, const std::string& what) {
  long long value = 0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (text.empty() || ec != std::errc() || ptr != end)
    throw ParameterError("invalid " + what + ": '" + text + "'");
  return value;
}

void expect_arity(const std::vector<std::string>& parts, std::size_t lo, std::size_t hi,
                  const std::string& spec) {
  if (parts.size() < lo || parts.size() > hi)
    throw ParameterError("malformed spec '" + spec + "'");
}

}  // namespace

std::vector<long long> parse_integer_list(const std::string& text) {
  if (text.empty()) throw ParameterError("empty n list");
  std::vector<long long> out;
  for (const std::string& part : split(text, ',')) out.push_back(parse_integer(part, "integer"));
  return out;
}

LimitLaw law_from_spec(const std::string& spec) {
  const std::vector<std::string> parts = split(spec, ':');
  const std::string& kind = parts.front();
  if (kind == "gaussian") {
    expect_arity(parts, 1, 1, spec);
    return build_limit_law(gaussian_drift(), 1.0);
  }
  if (kind == "quartic") {
    expect_arity(parts, 1, 2, spec);
    const double n = parts.size() == 2 ? parse_real(parts[1], "quartic n") : 1.0;
    if (!(n > 0.0)) throw ParameterError("quartic n must be positive");
    return curie_weiss::quartic_limit(n);
  }
  if (kind == "poly") {
    expect_arity(parts, 2, 2, spec);
    return build_limit_law(polynomial_drift(parse_real(parts[1], "poly coefficient")), 1.0);
  }
  if (kind == "gennorm") {
    expect_arity(parts, 3, 3, spec);
    const double alpha = parse_real(parts[1], "gennorm alpha");
    const double beta = parse_real(parts[2], "gennorm beta");
    if (!(alpha > 0.0) || !(beta > 0.0)) throw ParameterError("gennorm needs alpha, beta > 0");
    return generalized_normal_law(alpha, beta);
  }
  if (kind == "exponential") {
    expect_arity(parts, 1, 2, spec);
    const double lambda = parts.size() == 2 ? parse_real(parts[1], "exponential rate") : 1.0;
    if (!(lambda > 0.0)) throw ParameterError("exponential rate must be positive");
    return exponential_law(lambda);
  }
  throw ParameterError("unknown law '" + spec + "'");
}

TestFunction test_function_from_spec(const std::string& spec) {
  const std::vector<std::string> parts = split(spec, ':');
  const std::string& kind = parts.front();
  if (kind == "identity") {
    expect_arity(parts, 1, 1, spec);
    return test_functions::identity();
  }
  if (kind == "const") {
    expect_arity(parts, 1, 2, spec);
    return test_functions::constant(parts.size() == 2 ? parse_real(parts[1], "constant") : 1.0);
  }
  if (kind == "sin") return test_functions::sine();
  if (kind == "cos") return test_functions::cosine();
  if (kind == "atan") return test_functions::arctangent();
  if (kind == "indicator") {
    expect_arity(parts, 2, 2, spec);
    return test_functions::indicator(parse_real(parts[1], "indicator threshold"));
  }
  if (kind == "ramp") {
    expect_arity(parts, 2, 2, spec);
    return test_functions::ramp(parse_real(parts[1], "ramp level"));
  }
  if (kind == "bump") {
    expect_arity(parts, 3, 3, spec);
    return test_functions::gaussian_bump(parse_real(parts[1], "bump center"),
                                         parse_real(parts[2], "bump width"));
  }
  throw ParameterError("unknown test function '" + spec + "'");
}

}  // namespace stein_pairs::presets
