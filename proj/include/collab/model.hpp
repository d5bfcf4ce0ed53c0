#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace collab {

// World Bank income classification, ordered poorest to richest.
enum class IncomeGroup : std::uint8_t { Low = 0, LowerMiddle = 1, UpperMiddle = 2, High = 3 };

inline constexpr std::array<IncomeGroup, 4> kIncomeGroups = {
    IncomeGroup::Low, IncomeGroup::LowerMiddle, IncomeGroup::UpperMiddle, IncomeGroup::High};

inline constexpr std::size_t income_index(IncomeGroup group) {
  return static_cast<std::size_t>(group);
}

/// Canonical display string, e.g. "Lower middle income".
std::string_view income_group_label(IncomeGroup group);

/// Parses one of the four canonical labels. Exact, case-sensitive match;
/// anything else throws std::invalid_argument naming the offending value.
IncomeGroup income_group_parse(std::string_view label);

/// Maps a GNI per capita figure in USD onto the 2021-2022 World Bank
/// brackets. Fractional values falling strictly between two integer bracket
/// edges classify into the lower bracket. Throws std::domain_error for
/// negative or non-finite input.
IncomeGroup classify_gni(double gni_per_capita);

/// True for exactly two uppercase ASCII letters (ISO 3166-1 alpha-2 shape).
bool is_iso_alpha2(std::string_view code);

struct CountryClass {
  std::string country_code;  // ISO 3166-1 alpha-2
  std::string country_name;
  IncomeGroup income_group = IncomeGroup::Low;
  std::optional<double> gni_per_capita;  // USD, non-negative when present
};

struct OrgRecord {
  std::string org_id;  // opaque registry identifier (GRID/ROR style)
  std::string name;
  std::string country_code;  // ISO 3166-1 alpha-2
};

using OrgRegistry = std::unordered_map<std::string, OrgRecord>;
using CountryClassMap = std::unordered_map<std::string, CountryClass>;

// One listed affiliation: the org id when the entry resolved against the
// registry upstream, nullopt when it was listed but never resolved.
// Unresolved entries still count toward the weighting denominator.
using Affiliation = std::optional<std::string>;

struct Author {
  std::vector<Affiliation> affiliations;  // order significant
};

struct Publication {
  std::string pub_id;
  int year = 0;
  std::vector<Author> authors;  // order significant
  std::vector<std::string> for_codes;
  std::vector<std::string> sdg_codes;
  std::vector<std::string> funder_org_ids;
};

// One deduplicated weighted collaboration contribution from a
// (source author, source affiliation) to a distinct foreign organization
// on the same publication. weight == 1 / (author count of the publication
// x listed affiliation count of the source author).
struct ExposureRecord {
  std::string pub_id;
  int source_author_index = 0;       // 0-based position in the author list
  int source_affiliation_index = 0;  // 0-based position in the affiliation list
  std::string source_org_id;
  std::string source_country;
  IncomeGroup source_income = IncomeGroup::Low;
  std::string target_org_id;
  std::string target_name;
  std::string target_country;
  IncomeGroup target_income = IncomeGroup::Low;
  double weight = 0.0;

  friend bool operator==(const ExposureRecord&, const ExposureRecord&) = default;
};

// Aggregation key: a stable id plus an optional display label. Identity and
// ordering are by id first; the label travels along for presentation.
struct GroupKey {
  std::string id;
  std::string label;

  friend bool operator==(const GroupKey&, const GroupKey&) = default;
};

struct GroupKeyView {
  std::string_view id;
  std::string_view label;
};

struct GroupKeyLess {
  using is_transparent = void;

  static GroupKeyView view(const GroupKey& key) { return {key.id, key.label}; }
  static GroupKeyView view(const GroupKeyView& key) { return key; }

  bool operator()(const auto& lhs, const auto& rhs) const {
    const GroupKeyView a = view(lhs);
    const GroupKeyView b = view(rhs);
    if (a.id != b.id) return a.id < b.id;
    return a.label < b.label;
  }
};

// Per-group sums of exposure weights, split by the income group of the
// source side. Every contribution lands in exactly one income column and in
// overseas_total, so the four columns sum to the total up to rounding.
struct AggregateRow {
  std::array<double, 4> by_income{};  // indexed by income_index(source income)
  double overseas_total = 0.0;
};

struct AggregateTable {
  std::map<GroupKey, AggregateRow, GroupKeyLess> rows;

  bool empty() const { return rows.empty(); }

  /// Row lookup by key id with an empty label; nullptr when absent.
  const AggregateRow* find(std::string_view id, std::string_view label = {}) const;
};

}  // namespace collab
