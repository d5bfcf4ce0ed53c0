#include "collab/oracle.hpp"

#include <algorithm>
#include <stdexcept>
#include <tuple>

namespace collab {

namespace {

auto canonical_key(const ExposureRecord& r) {
  return std::tie(r.pub_id, r.source_author_index, r.source_affiliation_index, r.target_org_id);
}

}  // namespace

bool exposure_canonical_less(const ExposureRecord& a, const ExposureRecord& b) {
  return canonical_key(a) < canonical_key(b);
}

std::vector<ExposureRecord> oracle_exposures(const Publication& pub, const OrgRegistry& registry,
                                             const CountryClassMap& classes, SkipCounts* skips) {
  std::vector<ExposureRecord> records;
  const std::size_t author_count = pub.authors.size();

  if (skips != nullptr) {
    for (const Author& author : pub.authors) {
      for (const Affiliation& aff : author.affiliations) {
        if (!aff) continue;
        auto org_it = registry.find(*aff);
        if (org_it == registry.end()) {
          ++skips->unknown_org_refs;
        } else if (!classes.contains(org_it->second.country_code)) {
          ++skips->unknown_country_refs;
        }
      }
    }
  }

  for (std::size_t i = 0; i < author_count; ++i) {
    const Author& a1 = pub.authors[i];
    const std::size_t f = a1.affiliations.size();
    for (std::size_t j = 0; j < f; ++j) {
      if (!a1.affiliations[j]) continue;
      auto g1 = registry.find(*a1.affiliations[j]);
      if (g1 == registry.end()) continue;
      auto wb1 = classes.find(g1->second.country_code);
      if (wb1 == classes.end()) continue;

      for (const Author& a2 : pub.authors) {
        for (const Affiliation& aff2 : a2.affiliations) {
          if (!aff2) continue;
          auto g2 = registry.find(*aff2);
          if (g2 == registry.end()) continue;
          auto wb2 = classes.find(g2->second.country_code);
          if (wb2 == classes.end()) continue;
          if (g1->second.country_code == g2->second.country_code) continue;
          if (g1->second.org_id == g2->second.org_id) continue;

          records.push_back({pub.pub_id, static_cast<int>(i), static_cast<int>(j),
                             g1->second.org_id, g1->second.country_code,
                             wb1->second.income_group, g2->second.org_id, g2->second.name,
                             g2->second.country_code, wb2->second.income_group,
                             1.0 / static_cast<double>(author_count * f)});
        }
      }
    }
  }

  std::sort(records.begin(), records.end(), exposure_canonical_less);
  records.erase(std::unique(records.begin(), records.end(),
                            [](const ExposureRecord& a, const ExposureRecord& b) {
                              return canonical_key(a) == canonical_key(b);
                            }),
                records.end());
  return records;
}

PartialAggregate oracle_aggregate(std::span<const Publication> pubs, const AnalysisSpec& spec,
                                  const OrgRegistry& registry, const CountryClassMap& classes) {
  spec.validate();
  PartialAggregate out{spec, {}, {}};

  std::vector<ExposureRecord> all;
  for (const Publication& pub : pubs) {
    if (pub.year < spec.year_min || pub.year > spec.year_max) continue;
    std::vector<ExposureRecord> records = oracle_exposures(pub, registry, classes, &out.skipped);
    all.insert(all.end(), std::make_move_iterator(records.begin()),
               std::make_move_iterator(records.end()));
  }
  std::sort(all.begin(), all.end(), exposure_canonical_less);

  auto bump = [&out](const std::string& id, const std::string& label, IncomeGroup column,
                     double weight) {
    auto [it, inserted] = out.table.rows.try_emplace(GroupKey{id, label}, AggregateRow{});
    it->second.by_income[income_index(column)] += weight;
    it->second.overseas_total += weight;
  };

  for (const ExposureRecord& r : all) {
    if (spec.perspective && r.target_income != *spec.perspective) continue;
    switch (spec.group_by) {
      case GroupBy::IncomeGroup:
        bump(std::string(income_group_label(r.target_income)), "", r.source_income, r.weight);
        break;
      case GroupBy::Country: {
        auto cls = classes.find(r.target_country);
        bump(r.target_country, cls == classes.end() ? "" : cls->second.country_name,
             r.source_income, r.weight);
        break;
      }
      case GroupBy::Institution:
        bump(r.target_org_id, r.target_name, r.source_income, r.weight);
        break;
      case GroupBy::ForCode: {
        const Publication* pub = nullptr;
        for (const Publication& p : pubs) {
          if (p.pub_id == r.pub_id) {
            pub = &p;
            break;
          }
        }
        for (const std::string& code : pub->for_codes) bump(code, "", r.source_income, r.weight);
        break;
      }
      case GroupBy::SdgCode: {
        const Publication* pub = nullptr;
        for (const Publication& p : pubs) {
          if (p.pub_id == r.pub_id) {
            pub = &p;
            break;
          }
        }
        for (const std::string& code : pub->sdg_codes) bump(code, "", r.source_income, r.weight);
        break;
      }
      case GroupBy::Funder: {
        const Publication* pub = nullptr;
        for (const Publication& p : pubs) {
          if (p.pub_id == r.pub_id) {
            pub = &p;
            break;
          }
        }
        for (const std::string& funder : pub->funder_org_ids) {
          auto org = registry.find(funder);
          bump(funder, org == registry.end() ? "" : org->second.name, r.source_income, r.weight);
        }
        break;
      }
    }
  }
  return out;
}

}  // namespace collab
