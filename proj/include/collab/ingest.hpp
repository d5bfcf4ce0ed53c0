#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "collab/model.hpp"

namespace collab {

// Fatal ingest problems: unreadable file, missing or malformed header.
// Per-row problems never throw; they are rejected and reported instead.
class IngestError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ReportEntry {
  std::size_t line = 0;
  std::string message;

  friend bool operator==(const ReportEntry&, const ReportEntry&) = default;
};

struct LoadReport {
  static constexpr std::size_t kSampleCap = 100;

  std::uint64_t records_read = 0;      // non-empty data lines seen
  std::uint64_t records_rejected = 0;  // subset of records_read
  std::uint64_t unresolved_affiliation_count = 0;
  std::uint64_t unknown_org_refs = 0;
  std::uint64_t unknown_country_refs = 0;
  std::vector<ReportEntry> sample_errors;  // first kSampleCap rejections
  std::vector<ReportEntry> warnings;       // first kSampleCap non-fatal findings

  std::uint64_t records_accepted() const { return records_read - records_rejected; }

  void reject(std::size_t line, std::string message);
  void warn(std::size_t line, std::string message);
};

/// Reads an organization registry CSV with header
/// `org_id,name,country_code`. Rows with empty or duplicate org ids or
/// malformed country codes are rejected and reported; the first occurrence
/// of a duplicated id wins.
std::pair<OrgRegistry, LoadReport> load_orgs(const std::filesystem::path& path);

/// Reads a country classification CSV with header
/// `country_code,country_name,income_group[,gni_per_capita]`. Income labels
/// must match the four canonical display strings exactly. A GNI figure that
/// disagrees with its stated income group is kept but reported as a warning.
std::pair<CountryClassMap, LoadReport> load_classes(const std::filesystem::path& path);

/// Streaming reader over newline-delimited JSON publications. Each line is
/// one object: `id` (string), `year` (integer) and `authors` (array of
/// objects whose `affiliations` arrays hold org-id strings or nulls) are
/// required; `for_codes`, `sdg_codes` and `funder_org_ids` are optional
/// string arrays. Malformed lines are rejected and the stream continues.
class PublicationStream {
 public:
  explicit PublicationStream(const std::filesystem::path& path);

  /// Next accepted publication in file order; nullopt at end of input.
  std::optional<Publication> next();

  const LoadReport& report() const { return report_; }
  LoadReport& report() { return report_; }

 private:
  std::ifstream in_;
  std::filesystem::path path_;
  LoadReport report_;
  std::unordered_set<std::string> seen_ids_;  // first occurrence wins
  std::size_t line_ = 0;
};

/// Convenience wrapper that drains a PublicationStream into memory.
std::pair<std::vector<Publication>, LoadReport> load_publications(
    const std::filesystem::path& path);

}  // namespace collab
