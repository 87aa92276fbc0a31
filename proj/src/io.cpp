#include "stein_pairs/io.hpp"

#include <charconv>
#include <cmath>

namespace stein_pairs::io {

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
  if (ec != std::errc()) throw NumericError("format_number: conversion failed");
  return std::string(buf, ptr);
}

CsvWriter::CsvWriter(std::ostream& out, const std::vector<std::string>& header)
    : out_(out), columns_(header.size()) {
  row(header);
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_) throw ParameterError("csv row has the wrong number of cells");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out_ << ',';
    out_ << cells[i];
  }
  out_ << '\n';
}

void CsvWriter::comment(const std::string& text) { out_ << "# " << text << '\n'; }

std::string cell(double value) { return format_number(value); }
std::string cell(long long value) { return std::to_string(value); }
std::string cell(bool value) { return value ? "true" : "false"; }

Json number(double value) {
  if (std::isfinite(value)) return value;
  return format_number(value);
}

namespace {

constexpr const char* kRequired[] = {
    "c0", "e_abs_one_minus_half_c0_d2", "e_abs_delta_cubed", "e_abs_r",
    "e_weighted_r", "e_abs_Wr", "e_abs_c0g_W",
};

double read_number(const Json& json, const std::string& field) {
  if (!json.contains(field)) throw ParameterError("missing field '" + field + "'");
  const Json& v = json.at(field);
  if (!v.is_number()) throw ParameterError("field '" + field + "' must be a number");
  return v.get<double>();
}

bool read_flag(const Json& json, const std::string& field) {
  if (!json.contains(field)) return false;
  const Json& v = json.at(field);
  if (!v.is_boolean()) throw ParameterError("field '" + field + "' must be a boolean");
  return v.get<bool>();
}

}  // namespace

Json to_json(const PairStatistics& s) {
  Json j;
  j["c0"] = s.c0;
  j["e_abs_one_minus_half_c0_d2"] = s.e_abs_one_minus_half_c0_d2;
  j["e_abs_delta_cubed"] = s.e_abs_delta_cubed;
  j["e_abs_r"] = s.e_abs_r;
  j["e_weighted_r"] = s.e_weighted_r;
  j["e_abs_Wr"] = s.e_abs_Wr;
  j["delta_max"] = s.delta_max ? Json(*s.delta_max) : Json(nullptr);
  j["e_abs_c0g_W"] = s.e_abs_c0g_W;
  j["delta_cubed_is_upper_bound"] = s.delta_cubed_is_upper_bound;
  j["delta_is_empirical"] = s.delta_is_empirical;
  if (!s.standard_errors.empty()) {
    Json se = Json::object();
    for (const auto& [k, v] : s.standard_errors) se[k] = v;
    j["standard_errors"] = se;
  }
  return j;
}

PairStatistics pair_statistics_from_json(const Json& json) {
  if (!json.is_object()) throw ParameterError("pair statistics must be a JSON object");
  for (const auto& [key, value] : json.items()) {
    bool known = key == "delta_max" || key == "delta_cubed_is_upper_bound" ||
                 key == "delta_is_empirical" || key == "standard_errors";
    for (const char* r : kRequired) known = known || key == r;
    if (!known) throw ParameterError("unknown field '" + key + "'");
  }
  PairStatistics s;
  s.c0 = read_number(json, "c0");
  s.e_abs_one_minus_half_c0_d2 = read_number(json, "e_abs_one_minus_half_c0_d2");
  s.e_abs_delta_cubed = read_number(json, "e_abs_delta_cubed");
  s.e_abs_r = read_number(json, "e_abs_r");
  s.e_weighted_r = read_number(json, "e_weighted_r");
  s.e_abs_Wr = read_number(json, "e_abs_Wr");
  s.e_abs_c0g_W = read_number(json, "e_abs_c0g_W");
  if (json.contains("delta_max") && !json.at("delta_max").is_null())
    s.delta_max = read_number(json, "delta_max");
  s.delta_cubed_is_upper_bound = read_flag(json, "delta_cubed_is_upper_bound");
  s.delta_is_empirical = read_flag(json, "delta_is_empirical");
  if (json.contains("standard_errors")) {
    const Json& se = json.at("standard_errors");
    if (!se.is_object()) throw ParameterError("field 'standard_errors' must be an object");
    for (const auto& [key, value] : se.items()) {
      if (!value.is_number()) throw ParameterError("field 'standard_errors." + key + "' must be a number");
      s.standard_errors[key] = value.get<double>();
    }
  }
  try {
    s.validate();
  } catch (const ParameterError& e) {
    throw ParameterError(std::string("invalid pair statistics: ") + e.what());
  }
  return s;
}

Json to_json(const BoundValue& b) {
  Json j;
  j["theorem"] = b.theorem;
  j["value"] = number(b.value);
  Json terms = Json::array();
  for (const auto& [label, value] : b.breakdown) terms.push_back({{"term", label}, {"value", number(value)}});
  j["breakdown"] = terms;
  j["plus_minus"] = b.plus_minus ? number(*b.plus_minus) : Json(nullptr);
  j["notes"] = b.notes;
  return j;
}

Json to_json(const BoundAudit& a) {
  Json j;
  j["pass"] = a.pass;
  j["d1"] = number(a.d1);
  j["d2"] = number(a.d2);
  j["d3"] = number(a.d3);
  j["d4"] = number(a.d4);
  Json checks = Json::array();
  for (const InequalityCheck& c : a.checks) {
    Json e;
    e["label"] = c.label;
    e["applicable"] = c.applicable;
    if (c.applicable) {
      e["lhs"] = number(c.lhs);
      e["rhs"] = number(c.rhs);
      e["margin"] = number(c.margin);
    } else {
      e["skipped_reason"] = c.skipped_reason;
    }
    checks.push_back(e);
  }
  j["checks"] = checks;
  return j;
}

Json to_json(const HypothesisReport& r) {
  Json j;
  j["h1_holds"] = r.h1_holds;
  j["c2"] = number(r.c2);
  j["c2_argmax"] = number(r.c2_argmax);
  j["c2_stable"] = r.c2_stable;
  j["c2_source"] = r.c2_source;
  j["c3"] = number(r.c3);
  j["c3_argmax"] = number(r.c3_argmax);
  j["c3_stable"] = r.c3_stable;
  j["c3_source"] = r.c3_source;
  j["grid"] = {{"lo", number(r.grid_lo)}, {"hi", number(r.grid_hi)}, {"points", r.grid_points}};
  return j;
}

Json to_json(const curie_weiss::LemmaReport& r) {
  Json j;
  j["n"] = r.n;
  j["drift_dev"] = {{"value", r.drift_dev}, {"bound", r.drift_bound}, {"pass", r.drift_pass}};
  j["quad_dev"] = {{"value", r.quad_dev}, {"bound", r.quad_bound}, {"pass", r.quad_pass}};
  j["e_abs_w3"] = {{"value", r.e_abs_w3}, {"bound", r.w3_bound}, {"pass", r.w3_pass}};
  j["e_w6"] = {{"value", r.e_w6}, {"bound", r.w6_bound}, {"pass", r.w6_pass}};
  j["max_delta"] = {{"value", r.max_delta}, {"bound", r.delta_bound}, {"pass", r.delta_pass}};
  j["pass"] = r.pass();
  return j;
}

}  // namespace stein_pairs::io
