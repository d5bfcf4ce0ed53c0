#include "support/synthetic.hpp"

#include <algorithm>
#include <cstdio>
#include <string>
#include <unordered_map>

namespace collab::testsupport {

namespace {

std::string country_code_for(std::size_t index) {
  std::string code = "AA";
  code[0] = static_cast<char>('A' + index / 26);
  code[1] = static_cast<char>('A' + index % 26);
  return code;
}

double gni_for_group(IncomeGroup group, std::size_t salt) {
  switch (group) {
    case IncomeGroup::Low: return 400.0 + static_cast<double>(salt % 600);
    case IncomeGroup::LowerMiddle: return 1100.0 + static_cast<double>(salt % 2900);
    case IncomeGroup::UpperMiddle: return 4200.0 + static_cast<double>(salt % 8000);
    case IncomeGroup::High: return 13000.0 + static_cast<double>(salt % 50000);
  }
  return 0.0;
}

std::string padded(const char* prefix, std::size_t value, int width) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s%0*zu", prefix, width, value);
  return buf;
}

}  // namespace

SynthCorpus make_synthetic_corpus(const SynthParams& params) {
  std::mt19937_64 rng(params.seed);
  SynthCorpus corpus;

  std::vector<std::string> country_codes;
  for (std::size_t c = 0; c < params.country_count; ++c) {
    const std::string code = country_code_for(c);
    const IncomeGroup group = static_cast<IncomeGroup>(c % 4);
    corpus.classes.emplace(code, CountryClass{code, "Country " + code, group,
                                              gni_for_group(group, c * 37)});
    country_codes.push_back(code);
  }

  std::vector<std::string> org_ids;
  std::unordered_map<std::string, std::vector<std::string>> orgs_by_country;
  std::uniform_int_distribution<std::size_t> pick_country(0, country_codes.size() - 1);
  for (std::size_t o = 0; o < params.org_count; ++o) {
    const std::string org_id = padded("org", o, 4);
    const std::string& country = country_codes[pick_country(rng)];
    corpus.registry.emplace(org_id,
                            OrgRecord{org_id, "Institute " + std::to_string(o) + " of " + country,
                                      country});
    orgs_by_country[country].push_back(org_id);
    org_ids.push_back(org_id);
  }

  std::poisson_distribution<int> extra_authors(params.mean_authors - 1.0);
  std::bernoulli_distribution extra_affiliation(params.extra_affiliation_rate);
  std::bernoulli_distribution unresolved(params.unresolved_rate);
  std::bernoulli_distribution unknown_org(params.unknown_org_rate);
  std::bernoulli_distribution stay_home(params.home_bias);
  std::uniform_int_distribution<int> pick_year(params.year_min, params.year_max);
  std::uniform_int_distribution<std::size_t> pick_org(0, org_ids.size() - 1);

  corpus.pubs.reserve(params.publication_count);
  for (std::size_t p = 0; p < params.publication_count; ++p) {
    Publication pub;
    pub.pub_id = padded("pub", p, 7);
    pub.year = pick_year(rng);

    const std::string& home = country_codes[pick_country(rng)];
    const std::vector<std::string>& home_orgs = orgs_by_country[home];

    const int author_count = 1 + extra_authors(rng);
    pub.authors.reserve(static_cast<std::size_t>(author_count));
    for (int a = 0; a < author_count; ++a) {
      Author author;
      const int affiliation_count = 1 + (extra_affiliation(rng) ? 1 : 0);
      for (int f = 0; f < affiliation_count; ++f) {
        if (unresolved(rng)) {
          author.affiliations.emplace_back(std::nullopt);
        } else if (unknown_org(rng)) {
          author.affiliations.emplace_back("ghost" + std::to_string(p % 97));
        } else if (stay_home(rng) && !home_orgs.empty()) {
          std::uniform_int_distribution<std::size_t> pick_home(0, home_orgs.size() - 1);
          author.affiliations.emplace_back(home_orgs[pick_home(rng)]);
        } else {
          author.affiliations.emplace_back(org_ids[pick_org(rng)]);
        }
      }
      pub.authors.push_back(std::move(author));
    }

    if (params.with_tags) {
      std::uniform_int_distribution<int> tag_count(0, 2);
      std::uniform_int_distribution<int> for_code(1, 22);
      std::uniform_int_distribution<int> sdg_code(1, 17);
      for (int t = tag_count(rng); t > 0; --t) {
        std::string code = padded("", static_cast<std::size_t>(for_code(rng)), 2);
        if (std::find(pub.for_codes.begin(), pub.for_codes.end(), code) == pub.for_codes.end()) {
          pub.for_codes.push_back(std::move(code));
        }
      }
      for (int t = tag_count(rng); t > 0; --t) {
        std::string code = padded("SDG", static_cast<std::size_t>(sdg_code(rng)), 2);
        if (std::find(pub.sdg_codes.begin(), pub.sdg_codes.end(), code) == pub.sdg_codes.end()) {
          pub.sdg_codes.push_back(std::move(code));
        }
      }
      if (tag_count(rng) > 1) pub.funder_org_ids.push_back(org_ids[pick_org(rng)]);
    }

    corpus.pubs.push_back(std::move(pub));
  }
  return corpus;
}

SynthCorpus make_property_corpus(std::mt19937_64& rng) {
  SynthCorpus corpus;

  std::uniform_int_distribution<std::size_t> country_count_dist(6, 8);
  const std::size_t country_count = country_count_dist(rng);
  std::vector<std::string> country_codes;
  std::uniform_int_distribution<int> any_group(0, 3);
  for (std::size_t c = 0; c < country_count; ++c) {
    const std::string code = country_code_for(c);
    const IncomeGroup group =
        c < 4 ? static_cast<IncomeGroup>(c) : static_cast<IncomeGroup>(any_group(rng));
    CountryClass cls{code, "Country " + code, group, std::nullopt};
    if (rng() % 2 == 0) cls.gni_per_capita = gni_for_group(group, rng());
    corpus.classes.emplace(code, std::move(cls));
    country_codes.push_back(code);
  }
  // A country every org lookup resolves but no classification covers.
  country_codes.push_back("ZZ");

  std::uniform_int_distribution<std::size_t> org_count_dist(6, 12);
  const std::size_t org_count = org_count_dist(rng);
  std::vector<std::string> org_ids;
  std::uniform_int_distribution<std::size_t> pick_any_country(0, country_codes.size() - 1);
  for (std::size_t o = 0; o < org_count; ++o) {
    const std::string org_id = padded("g", o, 2);
    const std::string& country = country_codes[pick_any_country(rng)];
    corpus.registry.emplace(org_id, OrgRecord{org_id, "Org " + std::to_string(o), country});
    org_ids.push_back(org_id);
  }

  std::uniform_int_distribution<std::size_t> pub_count_dist(1, 50);
  std::uniform_int_distribution<int> pick_year(2008, 2022);
  std::uniform_int_distribution<std::size_t> author_count_dist(1, 8);
  std::uniform_int_distribution<std::size_t> affiliation_count_dist(0, 3);
  std::uniform_int_distribution<std::size_t> pick_org(0, org_ids.size() - 1);
  std::uniform_int_distribution<int> entry_kind(0, 99);

  const std::size_t pub_count = pub_count_dist(rng);
  for (std::size_t p = 0; p < pub_count; ++p) {
    Publication pub;
    pub.pub_id = padded("p", p, 3);
    pub.year = pick_year(rng);
    const std::size_t author_count = author_count_dist(rng);
    for (std::size_t a = 0; a < author_count; ++a) {
      Author author;
      const std::size_t affiliation_count = affiliation_count_dist(rng);
      for (std::size_t f = 0; f < affiliation_count; ++f) {
        const int kind = entry_kind(rng);
        if (kind < 8) {
          author.affiliations.emplace_back(std::nullopt);
        } else if (kind < 15) {
          author.affiliations.emplace_back("ghost" + std::to_string(kind % 3));
        } else {
          author.affiliations.emplace_back(org_ids[pick_org(rng)]);
        }
      }
      pub.authors.push_back(std::move(author));
    }

    std::uniform_int_distribution<int> tag_count(0, 3);
    std::uniform_int_distribution<int> tag_value(1, 6);
    for (int t = tag_count(rng); t > 0; --t) {
      std::string code = padded("F", static_cast<std::size_t>(tag_value(rng)), 2);
      if (std::find(pub.for_codes.begin(), pub.for_codes.end(), code) == pub.for_codes.end()) {
        pub.for_codes.push_back(std::move(code));
      }
    }
    for (int t = tag_count(rng) / 2; t > 0; --t) {
      std::string code = padded("S", static_cast<std::size_t>(tag_value(rng)), 2);
      if (std::find(pub.sdg_codes.begin(), pub.sdg_codes.end(), code) == pub.sdg_codes.end()) {
        pub.sdg_codes.push_back(std::move(code));
      }
    }
    for (int t = tag_count(rng) / 2; t > 0; --t) {
      std::string funder = rng() % 5 == 0 ? "ghost9" : org_ids[pick_org(rng)];
      if (std::find(pub.funder_org_ids.begin(), pub.funder_org_ids.end(), funder) ==
          pub.funder_org_ids.end()) {
        pub.funder_org_ids.push_back(std::move(funder));
      }
    }

    corpus.pubs.push_back(std::move(pub));
  }
  return corpus;
}

std::vector<Publication> make_domestic_pubs(const SynthCorpus& corpus, std::size_t count,
                                            std::mt19937_64& rng) {
  // Orgs of the country with the most registry entries.
  std::unordered_map<std::string, std::vector<std::string>> orgs_by_country;
  for (const auto& [org_id, org] : corpus.registry) {
    if (corpus.classes.contains(org.country_code)) {
      orgs_by_country[org.country_code].push_back(org_id);
    }
  }
  const std::vector<std::string>* best = nullptr;
  for (const auto& [country, ids] : orgs_by_country) {
    if (best == nullptr || ids.size() > best->size()) best = &ids;
  }

  std::vector<Publication> pubs;
  if (best == nullptr) return pubs;
  std::vector<std::string> org_ids = *best;
  std::sort(org_ids.begin(), org_ids.end());

  std::uniform_int_distribution<std::size_t> author_count_dist(1, 4);
  std::uniform_int_distribution<std::size_t> pick_org(0, org_ids.size() - 1);
  for (std::size_t p = 0; p < count; ++p) {
    Publication pub;
    pub.pub_id = padded("dom", p, 3);
    pub.year = 2015;
    const std::size_t author_count = author_count_dist(rng);
    for (std::size_t a = 0; a < author_count; ++a) {
      Author author;
      author.affiliations.emplace_back(org_ids[pick_org(rng)]);
      if (rng() % 3 == 0) author.affiliations.emplace_back(org_ids[pick_org(rng)]);
      pub.authors.push_back(std::move(author));
    }
    pubs.push_back(std::move(pub));
  }
  return pubs;
}

}  // namespace collab::testsupport
