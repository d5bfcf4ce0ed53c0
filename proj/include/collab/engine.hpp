#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "collab/model.hpp"

namespace collab {

// Grouping axis for the aggregation. The first three key a record by an
// attribute of its target side; the last three key it by tags of the
// publication the record came from (one key per tag, full counting).
enum class GroupBy : std::uint8_t { IncomeGroup, Country, Institution, ForCode, SdgCode, Funder };

std::string_view group_by_name(GroupBy group_by);

struct AnalysisSpec {
  int year_min = 2010;  // inclusive
  int year_max = 2020;  // inclusive
  std::optional<IncomeGroup> perspective;  // keeps only records whose target side matches
  GroupBy group_by = GroupBy::IncomeGroup;

  void validate() const;  // throws std::invalid_argument when year_min > year_max

  friend bool operator==(const AnalysisSpec&, const AnalysisSpec&) = default;
};

struct SkipCounts {
  std::uint64_t unknown_org_refs = 0;      // affiliation ids absent from the registry
  std::uint64_t unknown_country_refs = 0;  // org countries absent from the classification

  SkipCounts& operator+=(const SkipCounts& other) {
    unknown_org_refs += other.unknown_org_refs;
    unknown_country_refs += other.unknown_country_refs;
    return *this;
  }

  friend bool operator==(const SkipCounts&, const SkipCounts&) = default;
};

// Mergeable aggregation fragment. Fragments produced under the same spec
// over a partition of a corpus merge to the sequential result within 1e-9
// relative per cell.
struct PartialAggregate {
  AnalysisSpec spec;
  AggregateTable table;
  SkipCounts skipped;
};

/// Enumerates the deduplicated weighted exposures of one publication. For
/// every author and every resolved affiliation of that author, one record is
/// emitted per distinct organization on the publication that sits in a
/// different country (records within the source's own country, or back to
/// the source org itself, are excluded). The weight of each record is
/// 1 / (author count x listed affiliation count of the source author), where
/// listed counts both resolved and unresolved entries. Unknown registry or
/// classification references are skipped and counted, once per listed entry.
/// Output order: source author, source affiliation, target org id ascending.
std::vector<ExposureRecord> enumerate_exposures(const Publication& pub,
                                                const OrgRegistry& registry,
                                                const CountryClassMap& classes,
                                                SkipCounts* skips = nullptr);

/// Folds one publication into a partial aggregate: applies the year filter,
/// enumerates exposures, applies the perspective filter and adds each
/// surviving record's weight to the source-income column and overseas total
/// of its group row(s). Per-publication contributions are applied in a
/// canonical (group key, income column, weight) order, which makes the
/// result independent of author ordering.
void accumulate(PartialAggregate& aggregate, const Publication& pub, const OrgRegistry& registry,
                const CountryClassMap& classes);

/// Cell-wise sum. Throws std::logic_error when the two fragments were built
/// under different specs.
PartialAggregate merge(PartialAggregate a, const PartialAggregate& b);

/// Serial reference implementation: publications folded in order. Runs are
/// bit-reproducible.
PartialAggregate aggregate_serial(std::span<const Publication> pubs, const AnalysisSpec& spec,
                                  const OrgRegistry& registry, const CountryClassMap& classes);

/// OpenMP-parallel aggregation: the corpus is split into `workers`
/// contiguous blocks, each folded independently, and the partials merged in
/// block order. workers == 1 falls through to the serial reference.
PartialAggregate aggregate(std::span<const Publication> pubs, const AnalysisSpec& spec,
                           const OrgRegistry& registry, const CountryClassMap& classes,
                           int workers = 1);

/// Bounded-memory front end over a publication stream. With workers == 1
/// publications are folded one at a time, bit-identically to the serial
/// reference; otherwise they are buffered into fixed-size batches and each
/// batch is aggregated in parallel.
class StreamAggregator {
 public:
  static constexpr std::size_t kBatchSize = 4096;

  StreamAggregator(AnalysisSpec spec, const OrgRegistry& registry, const CountryClassMap& classes,
                   int workers = 1);

  void consume(Publication pub);
  PartialAggregate finish();

 private:
  void flush();

  const OrgRegistry& registry_;
  const CountryClassMap& classes_;
  int workers_;
  PartialAggregate total_;
  std::vector<Publication> batch_;
};

}  // namespace collab
