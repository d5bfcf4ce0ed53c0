#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <stdexcept>

#include "collab/model.hpp"

using namespace collab;

TEST_CASE("classify_gni matches the published bracket edges") {
  CHECK(classify_gni(1045) == IncomeGroup::Low);
  CHECK(classify_gni(1046) == IncomeGroup::LowerMiddle);
  CHECK(classify_gni(4095) == IncomeGroup::LowerMiddle);
  CHECK(classify_gni(4096) == IncomeGroup::UpperMiddle);
  CHECK(classify_gni(12695) == IncomeGroup::UpperMiddle);
  CHECK(classify_gni(12696) == IncomeGroup::High);
  CHECK(classify_gni(0) == IncomeGroup::Low);
}

TEST_CASE("classify_gni assigns gap fractions to the lower bracket") {
  CHECK(classify_gni(1045.5) == IncomeGroup::Low);
  CHECK(classify_gni(4095.5) == IncomeGroup::LowerMiddle);
  CHECK(classify_gni(12695.5) == IncomeGroup::UpperMiddle);
}

TEST_CASE("classify_gni rejects out-of-domain input") {
  CHECK_THROWS_AS(classify_gni(-5.0), std::domain_error);
  CHECK_THROWS_AS(classify_gni(std::numeric_limits<double>::quiet_NaN()), std::domain_error);
  CHECK_THROWS_AS(classify_gni(std::numeric_limits<double>::infinity()), std::domain_error);
}

TEST_CASE("classify_gni is monotone nondecreasing") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> gni(0.0, 100000.0);
  for (int i = 0; i < 2000; ++i) {
    double a = gni(rng);
    double b = gni(rng);
    if (a > b) std::swap(a, b);
    CHECK(classify_gni(a) <= classify_gni(b));
  }
}

TEST_CASE("income group labels round-trip") {
  for (IncomeGroup group : kIncomeGroups) {
    CHECK(income_group_parse(income_group_label(group)) == group);
  }
  CHECK(income_group_parse("High income") == IncomeGroup::High);
  CHECK(income_group_parse("Low income") == IncomeGroup::Low);
}

TEST_CASE("income group parsing is case-sensitive and names the bad value") {
  CHECK_THROWS_WITH_AS(income_group_parse("high income"),
                       "unknown income group label: \"high income\"", std::invalid_argument);
  CHECK_THROWS_AS(income_group_parse("Medium income"), std::invalid_argument);
  CHECK_THROWS_AS(income_group_parse(""), std::invalid_argument);
}

TEST_CASE("income groups are totally ordered poorest to richest") {
  CHECK(IncomeGroup::Low < IncomeGroup::LowerMiddle);
  CHECK(IncomeGroup::LowerMiddle < IncomeGroup::UpperMiddle);
  CHECK(IncomeGroup::UpperMiddle < IncomeGroup::High);
}

TEST_CASE("iso alpha-2 shape check") {
  CHECK(is_iso_alpha2("US"));
  CHECK(is_iso_alpha2("KE"));
  CHECK_FALSE(is_iso_alpha2("XXX"));
  CHECK_FALSE(is_iso_alpha2("us"));
  CHECK_FALSE(is_iso_alpha2("U1"));
  CHECK_FALSE(is_iso_alpha2(""));
}

TEST_CASE("aggregate table lookup by key id") {
  AggregateTable table;
  table.rows[GroupKey{"KE", "Kenya"}].overseas_total = 1.5;
  CHECK(table.find("KE", "Kenya") != nullptr);
  CHECK(table.find("KE") == nullptr);  // label participates in identity
  CHECK(table.find("US", "United States") == nullptr);
}
