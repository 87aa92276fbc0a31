#include <doctest.h>

#include <cmath>
#include <sstream>

#include "stein_pairs/bernoulli_laplace.hpp"
#include "stein_pairs/io.hpp"
#include "stein_pairs/presets.hpp"

using namespace stein_pairs;
using io::Json;

TEST_SUITE("io") {

TEST_CASE("number formatting") {
  CHECK(io::format_number(0.5) == "0.5");
  CHECK(io::format_number(1.0) == "1");
  CHECK(io::format_number(0.1) == "0.10000000000000001");
  CHECK(io::format_number(-2.5e-20) == "-2.4999999999999999e-20");
  CHECK(io::format_number(INFINITY) == "inf");
  CHECK(io::format_number(-INFINITY) == "-inf");
  CHECK(io::format_number(NAN) == "nan");
  for (double v : {1.0 / 3.0, std::exp(1.0), 1e300, 6.02214076e23}) CHECK(std::stod(io::format_number(v)) == v);
  CHECK(io::number(INFINITY) == Json("inf"));
  CHECK(io::number(2.0) == Json(2.0));
}

TEST_CASE("CSV writer") {
  std::ostringstream s;
  io::CsvWriter csv(s, {"a", "b"});
  csv.comment("note");
  csv.row({io::cell(1.5), io::cell(7LL)});
  csv.row({io::cell(true), io::cell(false)});
  CHECK(s.str() == "a,b\n# note\n1.5,7\ntrue,false\n");
  CHECK_THROWS_AS(csv.row({"x"}), ParameterError);
}

TEST_CASE("pair statistics JSON round trip") {
  PairStatistics s = bernoulli_laplace::pair_statistics(10);
  s.delta_max = 0.25;
  s.standard_errors["e_abs_r"] = 1e-3;
  const PairStatistics back = io::pair_statistics_from_json(io::to_json(s));
  CHECK(back.c0 == s.c0);
  CHECK(back.e_abs_delta_cubed == s.e_abs_delta_cubed);
  CHECK(back.e_abs_r == s.e_abs_r);
  CHECK(back.e_weighted_r == s.e_weighted_r);
  CHECK(back.e_abs_c0g_W == s.e_abs_c0g_W);
  CHECK(back.delta_max == s.delta_max);
  CHECK(back.delta_cubed_is_upper_bound);
  CHECK(back.standard_errors == s.standard_errors);
  PairStatistics none = s;
  none.delta_max.reset();
  CHECK_FALSE(io::pair_statistics_from_json(io::to_json(none)).delta_max.has_value());
}

TEST_CASE("pair statistics JSON errors name the field") {
  Json j = io::to_json(bernoulli_laplace::pair_statistics(10));
  auto message = [](const Json& bad) {
    try {
      io::pair_statistics_from_json(bad);
    } catch (const ParameterError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  Json missing = j;
  missing.erase("e_abs_r");
  CHECK(message(missing).find("e_abs_r") != std::string::npos);
  Json extra = j;
  extra["surprise"] = 1;
  CHECK(message(extra).find("surprise") != std::string::npos);
  Json typed = j;
  typed["c0"] = "big";
  CHECK(message(typed).find("c0") != std::string::npos);
  Json negative = j;
  negative["e_abs_Wr"] = -1.0;
  CHECK(message(negative).find("e_abs_Wr") != std::string::npos);
  CHECK_FALSE(message(Json::array()).empty());
}

TEST_CASE("bound JSON") {
  BoundValue b;
  b.theorem = "t";
  b.value = 1.5;
  b.breakdown = {{"x", 1.0}, {"y", 0.5}};
  const Json j = io::to_json(b);
  CHECK(j["theorem"] == "t");
  CHECK(j["value"] == 1.5);
  CHECK(j["breakdown"].size() == 2);
  CHECK(j["plus_minus"].is_null());
}

}  // TEST_SUITE

TEST_SUITE("presets") {

TEST_CASE("law specs") {
  CHECK(presets::law_from_spec("gaussian").c1() == doctest::Approx(0.3989422804014327));
  CHECK(presets::law_from_spec("quartic").c1() == doctest::Approx(0.29638).epsilon(1e-5));
  CHECK(presets::law_from_spec("quartic:100").c1() == doctest::Approx(0.29638).epsilon(1e-5));
  CHECK(presets::law_from_spec("exponential:2").moment(1) == doctest::Approx(0.5));
  CHECK(presets::law_from_spec("gennorm:2:2").c1() == doctest::Approx(0.3989422804014327));
  for (const char* bad : {"", "gauss", "poly", "poly:x", "gennorm:1", "quartic:0", "exponential:-1", "poly:1:2"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(presets::law_from_spec(bad), ParameterError);
  }
}

TEST_CASE("integer lists and reals") {
  CHECK(presets::parse_integer_list("4,16,64") == std::vector<long long>{4, 16, 64});
  CHECK(presets::parse_integer_list("7") == std::vector<long long>{7});
  for (const char* bad : {"", "4,", ",4", "4,x", "1.5", "4 16"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(presets::parse_integer_list(bad), ParameterError);
  }
  CHECK(presets::parse_real("2.5e-1", "x") == 0.25);
  CHECK_THROWS_AS(presets::parse_real("2.5x", "x"), ParameterError);
  CHECK(presets::split("a:b:c", ':') == std::vector<std::string>{"a", "b", "c"});
}

}  // TEST_SUITE
