#include "collab/engine.hpp"

#include <algorithm>
#include <stdexcept>
#include <tuple>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace collab {

namespace {

// One resolvable organization mentioned on a publication. Views point into
// the registry and classification maps, which outlive any enumeration.
struct ResolvedOrg {
  std::string_view org_id;
  std::string_view name;
  std::string_view country;
  std::string_view country_name;
  IncomeGroup income = IncomeGroup::Low;
};

// Distinct resolvable organizations across all authors, ordered by org id.
// Unknown registry or classification references bump the skip counters once
// per listed entry; unresolved (null) entries were already reported by
// ingest and pass silently.
void collect_orgs(const Publication& pub, const OrgRegistry& registry,
                  const CountryClassMap& classes, SkipCounts& skips,
                  std::vector<ResolvedOrg>& out) {
  out.clear();
  for (const Author& author : pub.authors) {
    for (const Affiliation& aff : author.affiliations) {
      if (!aff) continue;
      auto org_it = registry.find(*aff);
      if (org_it == registry.end()) {
        ++skips.unknown_org_refs;
        continue;
      }
      const OrgRecord& org = org_it->second;
      auto cls_it = classes.find(org.country_code);
      if (cls_it == classes.end()) {
        ++skips.unknown_country_refs;
        continue;
      }
      out.push_back({org.org_id, org.name, org.country_code, cls_it->second.country_name,
                     cls_it->second.income_group});
    }
  }
  std::sort(out.begin(), out.end(),
            [](const ResolvedOrg& a, const ResolvedOrg& b) { return a.org_id < b.org_id; });
  out.erase(std::unique(out.begin(), out.end(),
                        [](const ResolvedOrg& a, const ResolvedOrg& b) {
                          return a.org_id == b.org_id;
                        }),
            out.end());
}

const ResolvedOrg* find_org(const std::vector<ResolvedOrg>& orgs, std::string_view org_id) {
  auto it = std::lower_bound(orgs.begin(), orgs.end(), org_id,
                             [](const ResolvedOrg& org, std::string_view id) {
                               return org.org_id < id;
                             });
  if (it == orgs.end() || it->org_id != org_id) return nullptr;
  return &*it;
}

// Core enumeration: calls emit(author index, affiliation index, source,
// target, weight) for every deduplicated exposure, in (author, affiliation,
// target org id) order. `scratch` holds the per-publication org set.
template <typename Emit>
void walk_exposures(const Publication& pub, const OrgRegistry& registry,
                    const CountryClassMap& classes, SkipCounts& skips,
                    std::vector<ResolvedOrg>& scratch, Emit&& emit) {
  const std::size_t author_count = pub.authors.size();
  if (author_count == 0) return;
  collect_orgs(pub, registry, classes, skips, scratch);
  if (scratch.empty()) return;

  for (std::size_t i = 0; i < author_count; ++i) {
    const Author& author = pub.authors[i];
    const std::size_t affiliation_count = author.affiliations.size();
    for (std::size_t j = 0; j < affiliation_count; ++j) {
      const Affiliation& aff = author.affiliations[j];
      if (!aff) continue;
      const ResolvedOrg* source = find_org(scratch, *aff);
      if (source == nullptr) continue;  // unresolvable, counted during collection
      const double weight = 1.0 / static_cast<double>(author_count * affiliation_count);
      for (const ResolvedOrg& target : scratch) {
        if (target.country == source->country) continue;
        if (target.org_id == source->org_id) continue;
        emit(i, j, *source, target, weight);
      }
    }
  }
}

struct Contribution {
  std::string_view key_id;
  std::string_view key_label;
  IncomeGroup column = IncomeGroup::Low;
  double weight = 0.0;
};

// Reusable per-worker fold buffers.
struct FoldScratch {
  std::vector<ResolvedOrg> orgs;
  std::vector<Contribution> contributions;
};

AggregateRow& row_for(AggregateTable& table, std::string_view id, std::string_view label) {
  const GroupKeyView key{id, label};
  auto it = table.rows.lower_bound(key);
  if (it == table.rows.end() || GroupKeyLess{}(key, it->first)) {
    it = table.rows.emplace_hint(it, GroupKey{std::string(id), std::string(label)},
                                 AggregateRow{});
  }
  return it->second;
}

}  // namespace

std::string_view group_by_name(GroupBy group_by) {
  switch (group_by) {
    case GroupBy::IncomeGroup: return "income_group";
    case GroupBy::Country: return "country";
    case GroupBy::Institution: return "institution";
    case GroupBy::ForCode: return "for_code";
    case GroupBy::SdgCode: return "sdg_code";
    case GroupBy::Funder: return "funder";
  }
  return "unknown";
}

void AnalysisSpec::validate() const {
  if (year_min > year_max) {
    throw std::invalid_argument("invalid year range: " + std::to_string(year_min) + " > " +
                                std::to_string(year_max));
  }
}

std::vector<ExposureRecord> enumerate_exposures(const Publication& pub,
                                                const OrgRegistry& registry,
                                                const CountryClassMap& classes,
                                                SkipCounts* skips) {
  std::vector<ExposureRecord> records;
  SkipCounts local;
  std::vector<ResolvedOrg> scratch;
  walk_exposures(pub, registry, classes, local, scratch,
                 [&](std::size_t i, std::size_t j, const ResolvedOrg& source,
                     const ResolvedOrg& target, double weight) {
                   records.push_back({pub.pub_id, static_cast<int>(i), static_cast<int>(j),
                                      std::string(source.org_id), std::string(source.country),
                                      source.income, std::string(target.org_id),
                                      std::string(target.name), std::string(target.country),
                                      target.income, weight});
                 });
  if (skips != nullptr) *skips += local;
  return records;
}

namespace {

void accumulate_with(PartialAggregate& aggregate, const Publication& pub,
                     const OrgRegistry& registry, const CountryClassMap& classes,
                     FoldScratch& scratch) {
  const AnalysisSpec& spec = aggregate.spec;
  if (pub.year < spec.year_min || pub.year > spec.year_max) return;

  std::vector<Contribution>& contributions = scratch.contributions;
  contributions.clear();

  auto add = [&](std::string_view id, std::string_view label, IncomeGroup column, double weight) {
    contributions.push_back({id, label, column, weight});
  };

  walk_exposures(
      pub, registry, classes, aggregate.skipped, scratch.orgs,
      [&](std::size_t, std::size_t, const ResolvedOrg& source, const ResolvedOrg& target,
          double weight) {
        if (spec.perspective && target.income != *spec.perspective) return;
        switch (spec.group_by) {
          case GroupBy::IncomeGroup:
            add(income_group_label(target.income), {}, source.income, weight);
            break;
          case GroupBy::Country:
            add(target.country, target.country_name, source.income, weight);
            break;
          case GroupBy::Institution:
            add(target.org_id, target.name, source.income, weight);
            break;
          case GroupBy::ForCode:
            for (const std::string& code : pub.for_codes) add(code, {}, source.income, weight);
            break;
          case GroupBy::SdgCode:
            for (const std::string& code : pub.sdg_codes) add(code, {}, source.income, weight);
            break;
          case GroupBy::Funder:
            for (const std::string& funder : pub.funder_org_ids) {
              auto it = registry.find(funder);
              add(funder, it == registry.end() ? std::string_view{} : std::string_view(it->second.name),
                  source.income, weight);
            }
            break;
        }
      });

  // Canonical per-publication fold order. The contribution multiset of a
  // cell does not depend on author order, so neither does the cell sum.
  std::sort(contributions.begin(), contributions.end(),
            [](const Contribution& a, const Contribution& b) {
              return std::tie(a.key_id, a.key_label, a.column, a.weight) <
                     std::tie(b.key_id, b.key_label, b.column, b.weight);
            });
  for (const Contribution& c : contributions) {
    AggregateRow& row = row_for(aggregate.table, c.key_id, c.key_label);
    row.by_income[income_index(c.column)] += c.weight;
    row.overseas_total += c.weight;
  }
}

}  // namespace

void accumulate(PartialAggregate& aggregate, const Publication& pub, const OrgRegistry& registry,
                const CountryClassMap& classes) {
  FoldScratch scratch;
  accumulate_with(aggregate, pub, registry, classes, scratch);
}

PartialAggregate merge(PartialAggregate a, const PartialAggregate& b) {
  if (!(a.spec == b.spec)) {
    throw std::logic_error("merge: partial aggregates were built under different analysis specs");
  }
  for (const auto& [key, row] : b.table.rows) {
    auto it = a.table.rows.find(key);
    if (it == a.table.rows.end()) {
      a.table.rows.emplace(key, row);
      continue;
    }
    for (std::size_t i = 0; i < row.by_income.size(); ++i) {
      it->second.by_income[i] += row.by_income[i];
    }
    it->second.overseas_total += row.overseas_total;
  }
  a.skipped += b.skipped;
  return a;
}

PartialAggregate aggregate_serial(std::span<const Publication> pubs, const AnalysisSpec& spec,
                                  const OrgRegistry& registry, const CountryClassMap& classes) {
  spec.validate();
  PartialAggregate out{spec, {}, {}};
  FoldScratch scratch;
  for (const Publication& pub : pubs) accumulate_with(out, pub, registry, classes, scratch);
  return out;
}

PartialAggregate aggregate(std::span<const Publication> pubs, const AnalysisSpec& spec,
                           const OrgRegistry& registry, const CountryClassMap& classes,
                           int workers) {
  spec.validate();
  if (workers < 1) throw std::invalid_argument("worker count must be >= 1");
  if (workers == 1 || pubs.size() < 2) return aggregate_serial(pubs, spec, registry, classes);

  // One contiguous block per worker slot; blocks are folded independently
  // and merged in block order, so the result depends on the worker count
  // only, not on scheduling.
  const std::size_t n = pubs.size();
  const std::size_t blocks = static_cast<std::size_t>(workers);
  std::vector<PartialAggregate> parts(blocks, PartialAggregate{spec, {}, {}});

#ifdef _OPENMP
#pragma omp parallel for schedule(static, 1) num_threads(workers)
#endif
  for (int b = 0; b < workers; ++b) {
    const std::size_t lo = n * static_cast<std::size_t>(b) / blocks;
    const std::size_t hi = n * (static_cast<std::size_t>(b) + 1) / blocks;
    FoldScratch scratch;
    for (std::size_t p = lo; p < hi; ++p) {
      accumulate_with(parts[static_cast<std::size_t>(b)], pubs[p], registry, classes, scratch);
    }
  }

  PartialAggregate total = std::move(parts.front());
  for (std::size_t b = 1; b < blocks; ++b) total = merge(std::move(total), parts[b]);
  return total;
}

StreamAggregator::StreamAggregator(AnalysisSpec spec, const OrgRegistry& registry,
                                   const CountryClassMap& classes, int workers)
    : registry_(registry), classes_(classes), workers_(workers),
      total_{std::move(spec), {}, {}} {
  total_.spec.validate();
  if (workers_ < 1) throw std::invalid_argument("worker count must be >= 1");
}

void StreamAggregator::consume(Publication pub) {
  if (workers_ == 1) {
    accumulate(total_, pub, registry_, classes_);
    return;
  }
  batch_.push_back(std::move(pub));
  if (batch_.size() >= kBatchSize) flush();
}

void StreamAggregator::flush() {
  if (batch_.empty()) return;
  total_ = merge(std::move(total_), aggregate(batch_, total_.spec, registry_, classes_, workers_));
  batch_.clear();
}

PartialAggregate StreamAggregator::finish() {
  flush();
  return std::move(total_);
}

}  // namespace collab
