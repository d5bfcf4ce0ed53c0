#include "collab/report.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "collab/csv.hpp"

namespace collab {

namespace {

constexpr std::array<std::string_view, 6> kCsvHeader = {
    "group", "low_income", "lower_middle", "upper_middle", "high_income", "all_overseas"};

std::string format_value(double value) {
  char buf[64];
  const int len = std::snprintf(buf, sizeof(buf), "%.6f", value);
  return std::string(buf, static_cast<std::size_t>(len));
}

void write_header(std::ostream& out) {
  csv::write_row(out, kCsvHeader);
}

void write_values_row(std::ostream& out, const GroupKey& key, const std::array<double, 4>& cells,
                      double total) {
  const std::string group = serialize_group_key(key);
  std::array<std::string, 5> values;
  for (std::size_t i = 0; i < 4; ++i) values[i] = format_value(cells[i]);
  values[4] = format_value(total);
  const std::array<std::string_view, 6> fields = {group,     values[0], values[1],
                                                  values[2], values[3], values[4]};
  csv::write_row(out, fields);
}

template <typename Table>
void export_table_csv(const Table& table, std::ostream& out) {
  write_header(out);
  for (const auto& [key, row] : table.rows) {
    if constexpr (requires { row.by_income; }) {
      write_values_row(out, key, row.by_income, row.overseas_total);
    } else {
      write_values_row(out, key, row.share, row.overseas_total);
    }
  }
}

template <typename Fn>
void with_output_file(const std::filesystem::path& path, Fn&& fn) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  fn(out);
  out.flush();
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace

ProportionTable normalize_rows(const AggregateTable& table) {
  ProportionTable result;
  for (const auto& [key, row] : table.rows) {
    if (row.overseas_total == 0.0) continue;
    ProportionRow prop;
    for (std::size_t i = 0; i < row.by_income.size(); ++i) {
      prop.share[i] = row.by_income[i] / row.overseas_total;
    }
    prop.overseas_total = row.overseas_total;
    result.rows.emplace(key, prop);
  }
  return result;
}

std::vector<TopEntry> top_n(const AggregateTable& table, std::size_t n, TopOrder order) {
  std::vector<std::pair<double, TopEntry>> scored;
  scored.reserve(table.rows.size());
  for (const auto& [key, row] : table.rows) {
    if (row.overseas_total == 0.0) continue;
    TopEntry entry{key, {}, row.overseas_total};
    for (std::size_t i = 0; i < row.by_income.size(); ++i) {
      entry.share[i] = row.by_income[i] / row.overseas_total;
    }
    const double score = order == TopOrder::NonHighCumulative
                             ? entry.share[income_index(IncomeGroup::Low)] +
                                   entry.share[income_index(IncomeGroup::LowerMiddle)] +
                                   entry.share[income_index(IncomeGroup::UpperMiddle)]
                             : entry.share[income_index(IncomeGroup::Low)];
    scored.emplace_back(score, std::move(entry));
  }
  std::sort(scored.begin(), scored.end(),
            [](const std::pair<double, TopEntry>& a, const std::pair<double, TopEntry>& b) {
              if (a.first != b.first) return a.first > b.first;
              return GroupKeyLess{}(a.second.key, b.second.key);
            });
  if (scored.size() > n) scored.resize(n);

  std::vector<TopEntry> result;
  result.reserve(scored.size());
  for (auto& [score, entry] : scored) result.push_back(std::move(entry));
  return result;
}

ChordData export_chord(const AggregateTable& table, ChordNormalization normalization) {
  ChordData chord;
  for (std::size_t i = 0; i < kIncomeGroups.size(); ++i) {
    chord.labels[i] = std::string(income_group_label(kIncomeGroups[i]));
  }
  chord.normalization = normalization;

  for (const auto& [key, row] : table.rows) {
    IncomeGroup target = IncomeGroup::Low;
    try {
      target = income_group_parse(key.id);
    } catch (const std::invalid_argument&) {
      throw std::invalid_argument("chord export requires a table grouped by income group; found "
                                  "row key \"" +
                                  key.id + "\"");
    }
    for (std::size_t source = 0; source < row.by_income.size(); ++source) {
      chord.matrix[source][income_index(target)] = row.by_income[source];
    }
  }

  if (normalization == ChordNormalization::Row) {
    for (auto& row : chord.matrix) {
      double total = 0.0;
      for (double cell : row) total += cell;
      if (total > 0.0) {
        for (double& cell : row) cell /= total;
      }
    }
  }
  return chord;
}

std::string chord_to_json(const ChordData& chord) {
  nlohmann::json doc;
  doc["labels"] = chord.labels;
  doc["matrix"] = chord.matrix;
  doc["normalization"] = chord.normalization == ChordNormalization::Row ? "row" : "raw";
  doc["bilateral_only"] = true;
  return doc.dump(2) + "\n";
}

void write_chord_json(const ChordData& chord, const std::filesystem::path& path) {
  with_output_file(path, [&](std::ostream& out) { out << chord_to_json(chord); });
}

std::string serialize_group_key(const GroupKey& key) {
  if (key.label.empty() || key.label == key.id) return key.id;
  return key.id + " " + key.label;
}

void export_csv(const AggregateTable& table, std::ostream& out) {
  export_table_csv(table, out);
}

void export_csv(const ProportionTable& table, std::ostream& out) {
  export_table_csv(table, out);
}

void export_csv(std::span<const TopEntry> entries, std::ostream& out) {
  write_header(out);
  for (const TopEntry& entry : entries) {
    write_values_row(out, entry.key, entry.share, entry.overseas_total);
  }
}

void export_csv_file(const AggregateTable& table, const std::filesystem::path& path) {
  with_output_file(path, [&](std::ostream& out) { export_csv(table, out); });
}

void export_csv_file(const ProportionTable& table, const std::filesystem::path& path) {
  with_output_file(path, [&](std::ostream& out) { export_csv(table, out); });
}

void export_csv_file(std::span<const TopEntry> entries, const std::filesystem::path& path) {
  with_output_file(path, [&](std::ostream& out) { export_csv(entries, out); });
}

AggregateTable read_table_csv(std::istream& in) {
  csv::Reader reader(in);
  csv::Record rec;
  if (!reader.next(rec)) throw std::runtime_error("empty CSV table");
  for (std::size_t i = 0; i < kCsvHeader.size(); ++i) {
    if (i >= rec.fields.size() || rec.fields[i] != kCsvHeader[i]) {
      throw std::runtime_error("unexpected CSV header");
    }
  }
  AggregateTable table;
  while (reader.next(rec)) {
    if (rec.fields.size() != kCsvHeader.size()) {
      throw std::runtime_error("line " + std::to_string(rec.line) + ": expected " +
                               std::to_string(kCsvHeader.size()) + " fields");
    }
    AggregateRow row;
    for (std::size_t i = 0; i < 5; ++i) {
      const std::string& text = rec.fields[i + 1];
      double value = 0.0;
      auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
      if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw std::runtime_error("line " + std::to_string(rec.line) + ": bad number \"" + text +
                                 "\"");
      }
      if (i < 4) {
        row.by_income[i] = value;
      } else {
        row.overseas_total = value;
      }
    }
    table.rows.emplace(GroupKey{rec.fields[0], ""}, row);
  }
  return table;
}

AggregateTable read_table_csv_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open CSV table: " + path.string());
  return read_table_csv(in);
}

}  // namespace collab
