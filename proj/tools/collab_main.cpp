// Command-line front end: validate input datasets, compute income-by-income
// collaboration matrices and ranked top-N listings, classify GNI figures.
//
// Exit codes: 0 clean, 1 data-quality findings (rejected input rows),
// 2 usage or I/O error. Diagnostics go to stderr, data to --out or stdout.

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "collab/engine.hpp"
#include "collab/ingest.hpp"
#include "collab/model.hpp"
#include "collab/report.hpp"

namespace {

using nlohmann::json;

constexpr int kExitClean = 0;
constexpr int kExitDataFindings = 1;
constexpr int kExitUsage = 2;

struct CommonOptions {
  std::string pubs_path;
  std::string orgs_path;
  std::string classes_path;
  std::string years = "2010:2020";
  std::string perspective;  // empty = subcommand default
  std::string out_path;     // empty = stdout
  int workers = 1;
};

bool parse_year_range(const std::string& text, int& year_min, int& year_max) {
  const std::size_t colon = text.find(':');
  if (colon == std::string::npos) return false;
  const std::string lo = text.substr(0, colon);
  const std::string hi = text.substr(colon + 1);
  auto parse_int = [](const std::string& s, int& value) {
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    return ec == std::errc() && ptr == s.data() + s.size();
  };
  return parse_int(lo, year_min) && parse_int(hi, year_max) && year_min <= year_max;
}

bool parse_perspective(const std::string& text, std::optional<collab::IncomeGroup>& out) {
  static const std::map<std::string, std::optional<collab::IncomeGroup>> kMap = {
      {"low", collab::IncomeGroup::Low},
      {"lower-middle", collab::IncomeGroup::LowerMiddle},
      {"upper-middle", collab::IncomeGroup::UpperMiddle},
      {"high", collab::IncomeGroup::High},
      {"none", std::nullopt},
  };
  auto it = kMap.find(text);
  if (it == kMap.end()) return false;
  out = it->second;
  return true;
}

bool parse_group_by(const std::string& text, collab::GroupBy& out) {
  static const std::map<std::string, collab::GroupBy> kMap = {
      {"income", collab::GroupBy::IncomeGroup}, {"country", collab::GroupBy::Country},
      {"institution", collab::GroupBy::Institution}, {"for", collab::GroupBy::ForCode},
      {"sdg", collab::GroupBy::SdgCode},        {"funder", collab::GroupBy::Funder},
  };
  auto it = kMap.find(text);
  if (it == kMap.end()) return false;
  out = it->second;
  return true;
}

json report_to_json(const collab::LoadReport& report) {
  json entries = json::array();
  for (const auto& e : report.sample_errors) {
    entries.push_back({{"line", e.line}, {"message", e.message}});
  }
  json warnings = json::array();
  for (const auto& w : report.warnings) {
    warnings.push_back({{"line", w.line}, {"message", w.message}});
  }
  return json{{"records_read", report.records_read},
              {"records_rejected", report.records_rejected},
              {"unresolved_affiliation_count", report.unresolved_affiliation_count},
              {"unknown_org_refs", report.unknown_org_refs},
              {"unknown_country_refs", report.unknown_country_refs},
              {"sample_errors", entries},
              {"warnings", warnings}};
}

int usage_error(const std::string& message) {
  std::cerr << "error: " << message << "\n";
  return kExitUsage;
}

// Aggregates the publication stream under `spec`, returning the result plus
// the loader reports. Throws collab::IngestError on unreadable files.
struct RunResult {
  collab::PartialAggregate aggregate;
  collab::LoadReport orgs_report;
  collab::LoadReport classes_report;
  collab::LoadReport pubs_report;

  std::uint64_t total_rejected() const {
    return orgs_report.records_rejected + classes_report.records_rejected +
           pubs_report.records_rejected;
  }
};

RunResult run_aggregation(const CommonOptions& opts, const collab::AnalysisSpec& spec) {
  RunResult result;
  auto [registry, orgs_report] = collab::load_orgs(opts.orgs_path);
  auto [classes, classes_report] = collab::load_classes(opts.classes_path);

  collab::PublicationStream stream(opts.pubs_path);
  collab::StreamAggregator aggregator(spec, registry, classes, opts.workers);
  while (auto pub = stream.next()) aggregator.consume(std::move(*pub));

  result.aggregate = aggregator.finish();
  result.orgs_report = std::move(orgs_report);
  result.classes_report = std::move(classes_report);
  result.pubs_report = stream.report();
  return result;
}

void print_run_summary(const RunResult& result) {
  const collab::SkipCounts& skips = result.aggregate.skipped;
  std::cerr << "skipped: unknown_org_refs=" << skips.unknown_org_refs
            << " unknown_country_refs=" << skips.unknown_country_refs
            << "; rejected rows: orgs=" << result.orgs_report.records_rejected
            << " classes=" << result.classes_report.records_rejected
            << " publications=" << result.pubs_report.records_rejected << "\n";
}

template <typename Exportable>
int write_output(const Exportable& data, const std::string& out_path) {
  if (out_path.empty()) {
    collab::export_csv(data, std::cout);
    std::cout.flush();
  } else {
    collab::export_csv_file(data, out_path);
  }
  return kExitClean;
}

int cmd_validate(const CommonOptions& opts) {
  auto [registry, orgs_report] = collab::load_orgs(opts.orgs_path);
  auto [classes, classes_report] = collab::load_classes(opts.classes_path);

  collab::PublicationStream stream(opts.pubs_path);
  collab::LoadReport pubs_report;
  {
    // Cross-reference scan: count affiliation ids missing from the registry
    // and org countries missing from the classification.
    while (auto pub = stream.next()) {
      for (const collab::Author& author : pub->authors) {
        for (const collab::Affiliation& aff : author.affiliations) {
          if (!aff) continue;
          auto org = registry.find(*aff);
          if (org == registry.end()) {
            ++pubs_report.unknown_org_refs;
          } else if (!classes.contains(org->second.country_code)) {
            ++pubs_report.unknown_country_refs;
          }
        }
      }
    }
    const collab::LoadReport& streamed = stream.report();
    pubs_report.records_read = streamed.records_read;
    pubs_report.records_rejected = streamed.records_rejected;
    pubs_report.unresolved_affiliation_count = streamed.unresolved_affiliation_count;
    pubs_report.sample_errors = streamed.sample_errors;
    pubs_report.warnings = streamed.warnings;
  }

  json doc{{"orgs", report_to_json(orgs_report)},
           {"classes", report_to_json(classes_report)},
           {"publications", report_to_json(pubs_report)}};
  std::cout << doc.dump(2) << "\n";

  const std::uint64_t rejected = orgs_report.records_rejected + classes_report.records_rejected +
                                 pubs_report.records_rejected;
  return rejected == 0 ? kExitClean : kExitDataFindings;
}

int cmd_matrix(const CommonOptions& opts, const std::string& normalize,
               const std::string& chord_path) {
  collab::AnalysisSpec spec;
  if (!parse_year_range(opts.years, spec.year_min, spec.year_max)) {
    return usage_error("invalid --years range \"" + opts.years + "\" (expected MIN:MAX)");
  }
  const std::string perspective = opts.perspective.empty() ? "none" : opts.perspective;
  if (!parse_perspective(perspective, spec.perspective)) {
    return usage_error("invalid --perspective \"" + perspective + "\"");
  }
  if (normalize != "raw" && normalize != "rows") {
    return usage_error("invalid --normalize \"" + normalize + "\" (expected raw or rows)");
  }
  if (opts.workers < 1) return usage_error("--workers must be >= 1");
  spec.group_by = collab::GroupBy::IncomeGroup;

  RunResult result = run_aggregation(opts, spec);

  if (!chord_path.empty()) {
    const auto normalization = normalize == "rows" ? collab::ChordNormalization::Row
                                                   : collab::ChordNormalization::Raw;
    collab::write_chord_json(collab::export_chord(result.aggregate.table, normalization),
                             chord_path);
  }
  if (normalize == "rows") {
    write_output(collab::normalize_rows(result.aggregate.table), opts.out_path);
  } else {
    write_output(result.aggregate.table, opts.out_path);
  }
  print_run_summary(result);
  return result.total_rejected() == 0 ? kExitClean : kExitDataFindings;
}

int cmd_top(const CommonOptions& opts, const std::string& group_by_text,
            const std::string& order_text, int n) {
  collab::AnalysisSpec spec;
  if (!parse_year_range(opts.years, spec.year_min, spec.year_max)) {
    return usage_error("invalid --years range \"" + opts.years + "\" (expected MIN:MAX)");
  }
  if (!parse_group_by(group_by_text, spec.group_by)) {
    return usage_error("invalid --group-by \"" + group_by_text + "\"");
  }
  if (spec.group_by == collab::GroupBy::IncomeGroup) {
    return usage_error("--group-by income is the matrix subcommand's job");
  }
  collab::TopOrder order;
  if (order_text == "non-high") {
    order = collab::TopOrder::NonHighCumulative;
  } else if (order_text == "low-share") {
    order = collab::TopOrder::LowIncomeShare;
  } else {
    return usage_error("invalid --order \"" + order_text + "\" (expected non-high or low-share)");
  }
  if (n < 1) return usage_error("--n must be >= 1");
  if (opts.workers < 1) return usage_error("--workers must be >= 1");

  // Country and institution listings default to the high-income perspective;
  // tag-based listings default to no perspective filter.
  std::string perspective = opts.perspective;
  if (perspective.empty()) {
    const bool target_side = spec.group_by == collab::GroupBy::Country ||
                             spec.group_by == collab::GroupBy::Institution;
    perspective = target_side ? "high" : "none";
  }
  if (!parse_perspective(perspective, spec.perspective)) {
    return usage_error("invalid --perspective \"" + perspective + "\"");
  }

  RunResult result = run_aggregation(opts, spec);
  const auto entries = collab::top_n(result.aggregate.table, static_cast<std::size_t>(n), order);
  write_output(std::span<const collab::TopEntry>(entries), opts.out_path);
  print_run_summary(result);
  return result.total_rejected() == 0 ? kExitClean : kExitDataFindings;
}

int cmd_classify(const std::string& gni_text) {
  double gni = 0.0;
  auto [ptr, ec] = std::from_chars(gni_text.data(), gni_text.data() + gni_text.size(), gni);
  if (ec != std::errc() || ptr != gni_text.data() + gni_text.size()) {
    return usage_error("not a number: \"" + gni_text + "\"");
  }
  try {
    std::cout << collab::income_group_label(collab::classify_gni(gni)) << "\n";
  } catch (const std::domain_error& e) {
    return usage_error(e.what());
  }
  return kExitClean;
}

void add_common_options(CLI::App* cmd, CommonOptions& opts, bool with_years = true) {
  cmd->add_option("--pubs", opts.pubs_path, "publications JSONL file")->required();
  cmd->add_option("--orgs", opts.orgs_path, "organization registry CSV")->required();
  cmd->add_option("--classes", opts.classes_path, "country income classification CSV")->required();
  if (with_years) {
    cmd->add_option("--years", opts.years, "inclusive year range MIN:MAX (default 2010:2020)");
    cmd->add_option("--perspective", opts.perspective,
                    "target-side filter: low|lower-middle|upper-middle|high|none");
    cmd->add_option("--out", opts.out_path, "output CSV path (default stdout)");
    cmd->add_option("--workers", opts.workers, "worker threads (default 1)");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"author-contribution-weighted international collaboration statistics"};
  app.require_subcommand(1);

  CommonOptions validate_opts;
  CLI::App* validate = app.add_subcommand("validate", "load all inputs and report data quality");
  add_common_options(validate, validate_opts, /*with_years=*/false);

  CommonOptions matrix_opts;
  std::string matrix_normalize = "raw";
  std::string matrix_chord;
  CLI::App* matrix =
      app.add_subcommand("matrix", "income-group by income-group collaboration matrix");
  add_common_options(matrix, matrix_opts);
  matrix->add_option("--normalize", matrix_normalize, "raw or rows (default raw)");
  matrix->add_option("--chord", matrix_chord, "also write chord-diagram JSON to this path");

  CommonOptions top_opts;
  std::string top_group;
  std::string top_order = "non-high";
  int top_n_value = 12;
  CLI::App* top = app.add_subcommand("top", "ranked listing by collaboration shares");
  add_common_options(top, top_opts);
  top->add_option("--group-by", top_group, "country|institution|for|sdg|funder")->required();
  top->add_option("--order", top_order, "non-high or low-share (default non-high)");
  top->add_option("--n", top_n_value, "number of rows (default 12)");

  std::string classify_gni_text;
  CLI::App* classify = app.add_subcommand("classify", "income group for a GNI per capita figure");
  classify->add_option("gni", classify_gni_text, "GNI per capita in USD")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (app.got_subcommand(validate)) return cmd_validate(validate_opts);
    if (app.got_subcommand(matrix)) return cmd_matrix(matrix_opts, matrix_normalize, matrix_chord);
    if (app.got_subcommand(top)) return cmd_top(top_opts, top_group, top_order, top_n_value);
    if (app.got_subcommand(classify)) return cmd_classify(classify_gni_text);
  } catch (const collab::IngestError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
