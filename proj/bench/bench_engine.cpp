// Aggregation benchmark: serial reference vs the OpenMP path at increasing
// worker counts, on a synthetic corpus. Reports wall time, speedup and the
// largest relative cell difference against the serial result.
//
// usage: bench_engine [publications] [max_workers] [group_by]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <thread>

#include "collab/engine.hpp"
#include "support/synthetic.hpp"

using namespace collab;

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

double max_rel_diff(const AggregateTable& a, const AggregateTable& b) {
  double worst = 0.0;
  auto ia = a.rows.begin();
  auto ib = b.rows.begin();
  for (; ia != a.rows.end() && ib != b.rows.end(); ++ia, ++ib) {
    for (std::size_t i = 0; i < 4; ++i) {
      const double x = ia->second.by_income[i];
      const double y = ib->second.by_income[i];
      worst = std::max(worst, std::abs(x - y) / std::max({1.0, std::abs(x), std::abs(y)}));
    }
  }
  return worst;
}

}  // namespace

int main(int argc, char** argv) {
  testsupport::SynthParams params;
  params.publication_count = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 100000;
  const int max_workers = argc > 2 ? std::atoi(argv[2]) : 8;

  AnalysisSpec spec;
  if (argc > 3) {
    const std::string name = argv[3];
    if (name == "country") spec.group_by = GroupBy::Country;
    else if (name == "institution") spec.group_by = GroupBy::Institution;
    else if (name == "for") spec.group_by = GroupBy::ForCode;
    else if (name == "sdg") spec.group_by = GroupBy::SdgCode;
    else if (name == "funder") spec.group_by = GroupBy::Funder;
  }

  std::printf("generating %zu publications (%zu orgs, %zu countries)...\n",
              params.publication_count, params.org_count, params.country_count);
  auto corpus = testsupport::make_synthetic_corpus(params);
  std::printf("hardware threads: %u, grouping: %s\n\n", std::thread::hardware_concurrency(),
              std::string(group_by_name(spec.group_by)).c_str());

  auto start = std::chrono::steady_clock::now();
  auto serial = aggregate_serial(corpus.pubs, spec, corpus.registry, corpus.classes);
  const double serial_time = seconds_since(start);
  std::printf("%8s  %10s  %8s  %12s\n", "workers", "seconds", "speedup", "max rel diff");
  std::printf("%8s  %10.3f  %8.2f  %12s\n", "serial", serial_time, 1.0, "-");

  for (int workers = 2; workers <= max_workers; workers *= 2) {
    start = std::chrono::steady_clock::now();
    auto parallel = aggregate(corpus.pubs, spec, corpus.registry, corpus.classes, workers);
    const double elapsed = seconds_since(start);
    std::printf("%8d  %10.3f  %8.2f  %12.3e\n", workers, elapsed, serial_time / elapsed,
                max_rel_diff(serial.table, parallel.table));
  }
  return 0;
}
