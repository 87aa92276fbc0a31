#pragma once

#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "stein_pairs/bounds.hpp"
#include "stein_pairs/curie_weiss.hpp"
#include "stein_pairs/stein.hpp"

namespace stein_pairs::io {

using Json = nlohmann::ordered_json;

// 17 significant digits, '.' separator, no locale.
// Non-finite values print as inf, -inf, nan.
std::string format_number(double value);

class CsvWriter {
 public:
  CsvWriter(std::ostream& out, const std::vector<std::string>& header);
  void row(const std::vector<std::string>& cells);
  void comment(const std::string& text);  // "# text"

 private:
  std::ostream& out_;
  std::size_t columns_;
};

std::string cell(double value);
std::string cell(long long value);
std::string cell(bool value);

// Infinite values become the strings "inf" / "-inf".
Json number(double value);

Json to_json(const PairStatistics& stats);
// Throws ParameterError naming the offending field.
PairStatistics pair_statistics_from_json(const Json& json);

Json to_json(const BoundValue& bound);
Json to_json(const BoundAudit& audit);
Json to_json(const HypothesisReport& report);
Json to_json(const curie_weiss::LemmaReport& report);

}  // namespace stein_pairs::io
