#include "collab/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "json.hpp"

#include "collab/csv.hpp"

namespace collab {

namespace {

using nlohmann::json;

// Maps required header names to their column positions; fatal when any is
// missing. Extra columns are ignored.
std::vector<std::size_t> locate_columns(const std::vector<std::string>& header,
                                        std::initializer_list<std::string_view> required,
                                        const std::filesystem::path& path) {
  std::vector<std::size_t> indices;
  for (std::string_view name : required) {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
      throw IngestError("missing required column \"" + std::string(name) + "\" in " +
                        path.string());
    }
    indices.push_back(static_cast<std::size_t>(it - header.begin()));
  }
  return indices;
}

std::optional<std::size_t> locate_optional_column(const std::vector<std::string>& header,
                                                  std::string_view name) {
  auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) return std::nullopt;
  return static_cast<std::size_t>(it - header.begin());
}

std::optional<double> parse_double(std::string_view text) {
  double value = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) return std::nullopt;
  return value;
}

csv::Record read_header(csv::Reader& reader, const std::filesystem::path& path) {
  csv::Record rec;
  try {
    if (!reader.next(rec)) throw IngestError("empty file: " + path.string());
  } catch (const csv::FormatError& e) {
    throw IngestError("malformed header in " + path.string() + ": " + e.what());
  }
  return rec;
}

}  // namespace

void LoadReport::reject(std::size_t line, std::string message) {
  ++records_rejected;
  if (sample_errors.size() < kSampleCap) sample_errors.push_back({line, std::move(message)});
}

void LoadReport::warn(std::size_t line, std::string message) {
  if (warnings.size() < kSampleCap) warnings.push_back({line, std::move(message)});
}

std::pair<OrgRegistry, LoadReport> load_orgs(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IngestError("cannot open organization registry: " + path.string());

  csv::Reader reader(in);
  const csv::Record header = read_header(reader, path);
  const auto cols = locate_columns(header.fields, {"org_id", "name", "country_code"}, path);
  const std::size_t min_fields = *std::max_element(cols.begin(), cols.end()) + 1;

  OrgRegistry registry;
  LoadReport report;
  csv::Record rec;
  while (true) {
    try {
      if (!reader.next(rec)) break;
    } catch (const csv::FormatError& e) {
      ++report.records_read;
      report.reject(e.line(), e.what());
      continue;
    }
    ++report.records_read;
    if (rec.fields.size() < min_fields) {
      report.reject(rec.line, "expected at least " + std::to_string(min_fields) + " fields, got " +
                                  std::to_string(rec.fields.size()));
      continue;
    }
    OrgRecord org{rec.fields[cols[0]], rec.fields[cols[1]], rec.fields[cols[2]]};
    if (org.org_id.empty()) {
      report.reject(rec.line, "empty org_id");
      continue;
    }
    if (!is_iso_alpha2(org.country_code)) {
      report.reject(rec.line, "country_code \"" + org.country_code +
                                  "\" is not two uppercase letters");
      continue;
    }
    auto [it, inserted] = registry.try_emplace(org.org_id, std::move(org));
    if (!inserted) {
      report.reject(rec.line, "duplicate org_id \"" + it->first + "\"; first occurrence wins");
    }
  }
  return {std::move(registry), std::move(report)};
}

std::pair<CountryClassMap, LoadReport> load_classes(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IngestError("cannot open country classification file: " + path.string());

  csv::Reader reader(in);
  const csv::Record header = read_header(reader, path);
  const auto cols =
      locate_columns(header.fields, {"country_code", "country_name", "income_group"}, path);
  const auto gni_col = locate_optional_column(header.fields, "gni_per_capita");
  const std::size_t min_fields = *std::max_element(cols.begin(), cols.end()) + 1;

  CountryClassMap classes;
  LoadReport report;
  csv::Record rec;
  while (true) {
    try {
      if (!reader.next(rec)) break;
    } catch (const csv::FormatError& e) {
      ++report.records_read;
      report.reject(e.line(), e.what());
      continue;
    }
    ++report.records_read;
    if (rec.fields.size() < min_fields) {
      report.reject(rec.line, "expected at least " + std::to_string(min_fields) + " fields, got " +
                                  std::to_string(rec.fields.size()));
      continue;
    }
    CountryClass cls;
    cls.country_code = rec.fields[cols[0]];
    cls.country_name = rec.fields[cols[1]];
    if (!is_iso_alpha2(cls.country_code)) {
      report.reject(rec.line, "country_code \"" + cls.country_code +
                                  "\" is not two uppercase letters");
      continue;
    }
    try {
      cls.income_group = income_group_parse(rec.fields[cols[2]]);
    } catch (const std::invalid_argument& e) {
      report.reject(rec.line, e.what());
      continue;
    }
    if (gni_col && *gni_col < rec.fields.size() && !rec.fields[*gni_col].empty()) {
      const std::string& raw = rec.fields[*gni_col];
      auto gni = parse_double(raw);
      if (!gni || *gni < 0.0 || !std::isfinite(*gni)) {
        report.warn(rec.line, "ignoring unusable gni_per_capita \"" + raw + "\"");
      } else {
        cls.gni_per_capita = *gni;
        if (classify_gni(*gni) != cls.income_group) {
          report.warn(rec.line, "gni_per_capita " + raw + " classifies as \"" +
                                    std::string(income_group_label(classify_gni(*gni))) +
                                    "\" but row says \"" +
                                    std::string(income_group_label(cls.income_group)) + "\"");
        }
      }
    }
    auto [it, inserted] = classes.try_emplace(cls.country_code, std::move(cls));
    if (!inserted) {
      report.reject(rec.line,
                    "duplicate country_code \"" + it->first + "\"; first occurrence wins");
    }
  }
  return {std::move(classes), std::move(report)};
}

namespace {

// Parses one JSONL line into a Publication. Returns nullopt after recording
// the rejection; side effects on the report happen only for accepted rows.
std::optional<Publication> parse_publication(const std::string& line, std::size_t line_number,
                                             LoadReport& report,
                                             std::unordered_set<std::string>& seen_ids) {
  json doc;
  try {
    doc = json::parse(line);
  } catch (const json::parse_error& e) {
    report.reject(line_number, std::string("malformed JSON: ") + e.what());
    return std::nullopt;
  }
  if (!doc.is_object()) {
    report.reject(line_number, "line is not a JSON object");
    return std::nullopt;
  }

  Publication pub;
  std::uint64_t unresolved = 0;

  auto id_it = doc.find("id");
  if (id_it == doc.end() || !id_it->is_string() || id_it->get_ref<const std::string&>().empty()) {
    report.reject(line_number, "missing or invalid \"id\"");
    return std::nullopt;
  }
  pub.pub_id = id_it->get<std::string>();

  auto year_it = doc.find("year");
  if (year_it == doc.end() || !year_it->is_number_integer()) {
    report.reject(line_number, "missing or invalid \"year\"");
    return std::nullopt;
  }
  pub.year = year_it->get<int>();

  auto authors_it = doc.find("authors");
  if (authors_it == doc.end() || !authors_it->is_array()) {
    report.reject(line_number, "missing or invalid \"authors\"");
    return std::nullopt;
  }
  pub.authors.reserve(authors_it->size());
  for (const json& author_doc : *authors_it) {
    if (!author_doc.is_object()) {
      report.reject(line_number, "author entry is not an object");
      return std::nullopt;
    }
    Author author;
    auto affs_it = author_doc.find("affiliations");
    if (affs_it != author_doc.end() && !affs_it->is_null()) {
      if (!affs_it->is_array()) {
        report.reject(line_number, "\"affiliations\" is not an array");
        return std::nullopt;
      }
      author.affiliations.reserve(affs_it->size());
      for (const json& aff : *affs_it) {
        if (aff.is_null()) {
          author.affiliations.emplace_back(std::nullopt);
          ++unresolved;
        } else if (aff.is_string()) {
          std::string org_id = aff.get<std::string>();
          if (org_id.empty()) {
            author.affiliations.emplace_back(std::nullopt);
            ++unresolved;
          } else {
            author.affiliations.emplace_back(std::move(org_id));
          }
        } else {
          report.reject(line_number, "affiliation entry is neither a string nor null");
          return std::nullopt;
        }
      }
    }
    pub.authors.push_back(std::move(author));
  }

  auto read_tags = [&](const char* field, std::vector<std::string>& out) {
    auto it = doc.find(field);
    if (it == doc.end() || it->is_null()) return true;
    if (!it->is_array()) {
      report.reject(line_number, std::string("\"") + field + "\" is not an array");
      return false;
    }
    for (const json& tag : *it) {
      if (!tag.is_string()) {
        report.reject(line_number, std::string("\"") + field + "\" holds a non-string entry");
        return false;
      }
      std::string value = tag.get<std::string>();
      if (std::find(out.begin(), out.end(), value) == out.end()) {
        out.push_back(std::move(value));  // dedup, first occurrence order
      }
    }
    return true;
  };
  if (!read_tags("for_codes", pub.for_codes)) return std::nullopt;
  if (!read_tags("sdg_codes", pub.sdg_codes)) return std::nullopt;
  if (!read_tags("funder_org_ids", pub.funder_org_ids)) return std::nullopt;

  if (!seen_ids.insert(pub.pub_id).second) {
    report.reject(line_number, "duplicate pub_id \"" + pub.pub_id + "\"; first occurrence wins");
    return std::nullopt;
  }
  report.unresolved_affiliation_count += unresolved;
  return pub;
}

}  // namespace

PublicationStream::PublicationStream(const std::filesystem::path& path) : in_(path), path_(path) {
  if (!in_) throw IngestError("cannot open publications file: " + path.string());
}

std::optional<Publication> PublicationStream::next() {
  std::string line;
  while (std::getline(in_, line)) {
    ++line_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    ++report_.records_read;
    if (auto pub = parse_publication(line, line_, report_, seen_ids_)) return pub;
  }
  return std::nullopt;
}

std::pair<std::vector<Publication>, LoadReport> load_publications(
    const std::filesystem::path& path) {
  PublicationStream stream(path);
  std::vector<Publication> pubs;
  while (auto pub = stream.next()) pubs.push_back(std::move(*pub));
  return {std::move(pubs), stream.report()};
}

}  // namespace collab
