#pragma once

#include <string>
#include <vector>

#include "stein_pairs/limit_law.hpp"
#include "stein_pairs/stein.hpp"

namespace stein_pairs::presets {

// Law specs: gaussian, quartic[:n], poly:c3, gennorm:alpha:beta,
// exponential[:lambda]. Throws ParameterError on malformed input.
LimitLaw law_from_spec(const std::string& spec);

// Test-function specs: identity, const:c, sin, cos, atan, indicator:z,
// ramp:a, bump:center:width.
TestFunction test_function_from_spec(const std::string& spec);

// Parses "a,b,c" into integers; rejects empty lists and stray characters.
std::vector<long long> parse_integer_list(const std::string& text);

// Splits on ':'.
std::vector<std::string> split(const std::string& text, char sep);

double parse_real(const std::string& text, const std::string& what);

}  // namespace stein_pairs::presets
