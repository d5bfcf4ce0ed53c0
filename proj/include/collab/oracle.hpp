#pragma once

#include <span>
#include <vector>

#include "collab/engine.hpp"
#include "collab/model.hpp"

namespace collab {

// Brute-force reference for small corpora. Shipped in the library so any
// slice of a large run can be audited against it. Quadratic by design and
// deliberately independent of the engine's enumeration code.

/// Canonical exposure ordering: (pub_id, source author, source affiliation,
/// target org id), lexicographic.
bool exposure_canonical_less(const ExposureRecord& a, const ExposureRecord& b);

/// Enumerates every (author, affiliation, co-author, co-affiliation)
/// quadruple of the publication, keeps the pairs that resolve to two
/// organizations in different countries, and materializes the distinct
/// projection keyed by (source author, source affiliation, target org).
/// Returned in canonical order.
std::vector<ExposureRecord> oracle_exposures(const Publication& pub, const OrgRegistry& registry,
                                             const CountryClassMap& classes,
                                             SkipCounts* skips = nullptr);

/// Materializes the records of every publication in the year window, sorts
/// them canonically and folds them left to right through the perspective
/// filter and grouping.
PartialAggregate oracle_aggregate(std::span<const Publication> pubs, const AnalysisSpec& spec,
                                  const OrgRegistry& registry, const CountryClassMap& classes);

}  // namespace collab
