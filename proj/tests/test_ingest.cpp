#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "collab/ingest.hpp"

using namespace collab;
namespace fs = std::filesystem;

namespace {

// Writes `content` to a unique temp file removed at scope exit.
class TempFile {
 public:
  explicit TempFile(const std::string& content) {
    static int counter = 0;
    path_ = fs::temp_directory_path() /
            ("collab-ingest-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::ofstream out(path_, std::ios::binary);
    out << content;
  }
  ~TempFile() { std::error_code ec; fs::remove(path_, ec); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

}  // namespace

TEST_CASE("load_orgs maps rows and enforces row invariants") {
  TempFile file("org_id,name,country_code\n"
                "grid.1001.0,Australian National University,AU\n"
                "grid.1001.0,Duplicate,AU\n"
                "grid.2,Nowhere,XXX\n"
                ",No Id,US\n"
                "grid.3,\"Quoted, Name\",KE\n");
  auto [registry, report] = load_orgs(file.path());

  CHECK(registry.size() == 2);
  CHECK(registry.at("grid.1001.0").country_code == "AU");
  CHECK(registry.at("grid.1001.0").name == "Australian National University");
  CHECK(registry.at("grid.3").name == "Quoted, Name");

  CHECK(report.records_read == 5);
  CHECK(report.records_rejected == 3);
  CHECK(report.records_accepted() == 2);
  REQUIRE(report.sample_errors.size() == 3);
  CHECK(report.sample_errors[0].line == 3);  // the duplicate
}

TEST_CASE("load_orgs is fatal on missing file and missing header columns") {
  CHECK_THROWS_AS(load_orgs("/nonexistent/orgs.csv"), IngestError);
  TempFile bad_header("org_id,name\ngrid.1,University,AU\n");
  CHECK_THROWS_AS(load_orgs(bad_header.path()), IngestError);
}

TEST_CASE("load_classes parses labels strictly and verifies GNI consistency") {
  TempFile file("country_code,country_name,income_group,gni_per_capita\n"
                "KE,Kenya,Lower middle income,2170\n"
                "ZZ,Nowhere,Medium income,5\n"
                "US,United States,High income,70430\n"
                "US,Twice,High income,\n"
                "BR,Brazil,High income,7740\n"
                "ET,Ethiopia,Low income\n");
  auto [classes, report] = load_classes(file.path());

  CHECK(classes.size() == 4);
  CHECK(classes.at("KE").income_group == IncomeGroup::LowerMiddle);
  CHECK(classes.at("KE").gni_per_capita == 2170.0);
  CHECK_FALSE(classes.at("ET").gni_per_capita.has_value());

  CHECK(report.records_read == 6);
  CHECK(report.records_rejected == 2);  // unknown label + duplicate code
  // BR's GNI classifies as upper-middle, not high: kept, but flagged.
  REQUIRE(report.warnings.size() == 1);
  CHECK(report.warnings[0].line == 6);
}

TEST_CASE("load_classes accepts the three-column form") {
  TempFile file("country_code,country_name,income_group\n"
                "KE,Kenya,Lower middle income\n");
  auto [classes, report] = load_classes(file.path());
  CHECK(classes.size() == 1);
  CHECK(report.records_rejected == 0);
}

TEST_CASE("publication stream yields accepted rows in file order") {
  TempFile file(
      R"({"id":"p1","year":2015,"authors":[{"affiliations":["gA"]},{"affiliations":["gB"]}]})"
      "\n"
      "not json\n"
      "\n"
      R"({"id":"p2","year":2015,"authors":[{"affiliations":[null,"gA"]}]})"
      "\n"
      R"({"id":"p1","year":2016,"authors":[]})"
      "\n"
      R"({"id":"p3","year":"2016","authors":[]})"
      "\n");
  PublicationStream stream(file.path());

  auto p1 = stream.next();
  REQUIRE(p1.has_value());
  CHECK(p1->pub_id == "p1");
  CHECK(p1->year == 2015);
  REQUIRE(p1->authors.size() == 2);
  CHECK(p1->authors[0].affiliations == std::vector<Affiliation>{"gA"});

  auto p2 = stream.next();
  REQUIRE(p2.has_value());
  CHECK(p2->pub_id == "p2");
  REQUIRE(p2->authors.size() == 1);
  REQUIRE(p2->authors[0].affiliations.size() == 2);
  CHECK_FALSE(p2->authors[0].affiliations[0].has_value());
  CHECK(p2->authors[0].affiliations[1] == Affiliation{"gA"});

  CHECK_FALSE(stream.next().has_value());

  const LoadReport& report = stream.report();
  CHECK(report.records_read == 5);      // the empty line does not count
  CHECK(report.records_rejected == 3);  // malformed JSON, duplicate id, year as string
  CHECK(report.records_accepted() == 2);
  CHECK(report.unresolved_affiliation_count == 1);
  REQUIRE(report.sample_errors.size() == 3);
  CHECK(report.sample_errors[0].line == 2);
}

TEST_CASE("publication parsing rejections") {
  TempFile file(R"({"id":"","year":2015,"authors":[]})"
                "\n"
                R"({"year":2015,"authors":[]})"
                "\n"
                R"({"id":"a","year":2015.5,"authors":[]})"
                "\n"
                R"({"id":"b","year":2015,"authors":[{"affiliations":[42]}]})"
                "\n"
                R"({"id":"c","year":2015,"authors":[{"affiliations":["x"]}],"for_codes":[1]})"
                "\n"
                R"(["not","an","object"])"
                "\n");
  auto [pubs, report] = load_publications(file.path());
  CHECK(pubs.empty());
  CHECK(report.records_read == 6);
  CHECK(report.records_rejected == 6);
}

TEST_CASE("tag lists are deduplicated preserving first occurrence") {
  TempFile file(
      R"({"id":"p","year":2015,"authors":[],"for_codes":["11","07","11"],"sdg_codes":[],"funder_org_ids":["f1","f1"]})"
      "\n");
  auto [pubs, report] = load_publications(file.path());
  REQUIRE(pubs.size() == 1);
  CHECK(pubs[0].for_codes == std::vector<std::string>{"11", "07"});
  CHECK(pubs[0].sdg_codes.empty());
  CHECK(pubs[0].funder_org_ids == std::vector<std::string>{"f1"});
}

TEST_CASE("empty-string affiliations become unresolved entries") {
  TempFile file(R"({"id":"p","year":2015,"authors":[{"affiliations":["","gA"]}]})"
                "\n");
  auto [pubs, report] = load_publications(file.path());
  REQUIRE(pubs.size() == 1);
  REQUIRE(pubs[0].authors.size() == 1);
  REQUIRE(pubs[0].authors[0].affiliations.size() == 2);
  CHECK_FALSE(pubs[0].authors[0].affiliations[0].has_value());
  CHECK(report.unresolved_affiliation_count == 1);
}

TEST_CASE("unknown extra fields are ignored") {
  TempFile file(
      R"({"id":"p","year":2015,"authors":[{"affiliations":["gA"],"name":"A. Author"}],"doi":"10.1/x"})"
      "\n");
  auto [pubs, report] = load_publications(file.path());
  CHECK(pubs.size() == 1);
  CHECK(report.records_rejected == 0);
}

TEST_CASE("reloading a file yields an identical corpus") {
  const std::string content =
      R"({"id":"p1","year":2015,"authors":[{"affiliations":["gA",null]}],"for_codes":["11"]})"
      "\n"
      R"({"id":"p2","year":2016,"authors":[{"affiliations":["gB"]}]})"
      "\n";
  TempFile file(content);
  auto [first, report1] = load_publications(file.path());
  auto [second, report2] = load_publications(file.path());
  REQUIRE(first.size() == second.size());
  for (std::size_t i = 0; i < first.size(); ++i) {
    CHECK(first[i].pub_id == second[i].pub_id);
    CHECK(first[i].year == second[i].year);
    CHECK(first[i].authors.size() == second[i].authors.size());
    CHECK(first[i].for_codes == second[i].for_codes);
  }
  CHECK(report1.records_read == report2.records_read);
}

TEST_CASE("sample errors are capped") {
  std::string content;
  for (int i = 0; i < 150; ++i) content += "broken line\n";
  TempFile file(content);
  auto [pubs, report] = load_publications(file.path());
  CHECK(report.records_read == 150);
  CHECK(report.records_rejected == 150);
  CHECK(report.sample_errors.size() == LoadReport::kSampleCap);
}
