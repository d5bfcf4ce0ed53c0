#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "collab/model.hpp"

namespace collab {

// Presentation forms: row-normalized proportion tables, ordered top-N
// listings and chord-diagram data. Everything here is a pure function over
// immutable inputs and produces deterministic bytes.

struct ProportionRow {
  std::array<double, 4> share{};  // sums to 1 for surviving rows
  double overseas_total = 0.0;    // absolute
};

struct ProportionTable {
  std::map<GroupKey, ProportionRow, GroupKeyLess> rows;
};

/// Divides each income cell by its row's overseas total. Rows with a zero
/// total are omitted.
ProportionTable normalize_rows(const AggregateTable& table);

enum class TopOrder {
  NonHighCumulative,  // Low + LowerMiddle + UpperMiddle share, descending
  LowIncomeShare,     // Low share, descending
};

struct TopEntry {
  GroupKey key;
  std::array<double, 4> share{};
  double overseas_total = 0.0;
};

/// First n rows by the requested ordering, ties broken by group key
/// ascending. Zero-total rows are dropped before ranking.
std::vector<TopEntry> top_n(const AggregateTable& table, std::size_t n, TopOrder order);

enum class ChordNormalization : std::uint8_t { Raw, Row };

// Bilateral flow matrix for chord rendering; row = source income group,
// column = target income group. Multilateral relationships cannot be
// represented in this form, hence the bilateral_only marker in the JSON.
struct ChordData {
  std::array<std::string, 4> labels;  // Low, LowerMiddle, UpperMiddle, High
  std::array<std::array<double, 4>, 4> matrix{};
  ChordNormalization normalization = ChordNormalization::Raw;
};

/// Builds chord data from an income-grouped table; missing income rows are
/// filled with zeros. Row normalization rescales each source row to sum to
/// 1. Throws std::invalid_argument when the table is grouped by any other
/// key.
ChordData export_chord(const AggregateTable& table, ChordNormalization normalization);

/// Deterministic JSON rendering of chord data.
std::string chord_to_json(const ChordData& chord);
void write_chord_json(const ChordData& chord, const std::filesystem::path& path);

/// Single-string form of a group key: the id, followed by the label when it
/// adds information.
std::string serialize_group_key(const GroupKey& key);

// CSV exports share the header
// `group,low_income,lower_middle,upper_middle,high_income,all_overseas`,
// print values with six decimals and quote per RFC 4180. Table exports are
// sorted by group key; top-N exports keep their rank order.
void export_csv(const AggregateTable& table, std::ostream& out);
void export_csv(const ProportionTable& table, std::ostream& out);
void export_csv(std::span<const TopEntry> entries, std::ostream& out);

void export_csv_file(const AggregateTable& table, const std::filesystem::path& path);
void export_csv_file(const ProportionTable& table, const std::filesystem::path& path);
void export_csv_file(std::span<const TopEntry> entries, const std::filesystem::path& path);

/// Reads an exported CSV back into a table. The group column is taken as an
/// opaque key id. Throws std::runtime_error on malformed input.
AggregateTable read_table_csv(std::istream& in);
AggregateTable read_table_csv_file(const std::filesystem::path& path);

}  // namespace collab
