// Acceptance runner: one PASS/FAIL line per criterion.
//
//   acceptance [--quick] [--seed S] [--threads N] [--expect-fail 8,11]
//
// Exit status is 0 when the set of failing criteria equals the expected set
// (empty by default), 1 otherwise.

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <set>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "spiral/spiral.h"

int main(int argc, char** argv) {
  bool quick = false;
  std::uint64_t seed = 0;
  int threads = 1;
  std::set<int> expected;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--quick") {
      quick = true;
    } else if (a == "--seed" && i + 1 < argc) {
      seed = std::strtoull(argv[++i], nullptr, 10);
    } else if (a == "--threads" && i + 1 < argc) {
      threads = std::atoi(argv[++i]);
    } else if (a == "--expect-fail" && i + 1 < argc) {
      std::stringstream ss(argv[++i]);
      for (std::string tok; std::getline(ss, tok, ',');) expected.insert(std::stoi(tok));
    } else {
      std::cerr << "usage: acceptance [--quick] [--seed S] [--threads N] [--expect-fail LIST]\n";
      return 2;
    }
  }

  spiral_report* rep = nullptr;
  const spiral_status s = spiral_verify(quick ? 1 : 0, seed, threads, &rep);
  if (!rep) {
    std::cerr << "verify failed: " << spiral_status_name(s) << ": " << spiral_last_error() << '\n';
    return 1;
  }
  char* json = nullptr;
  char* timings = nullptr;
  spiral_report_json(rep, &json);
  spiral_report_timings(rep, &timings);
  spiral_report_free(rep);
  const auto report = nlohmann::json::parse(json);
  const auto times = nlohmann::json::parse(timings);
  spiral_string_free(json);
  spiral_string_free(timings);

  std::set<int> failed;
  for (std::size_t i = 0; i < report["criteria"].size(); ++i) {
    const auto& c = report["criteria"][i];
    const int id = c["id"].get<int>();
    const bool passed = c["passed"].get<bool>();
    if (!passed) failed.insert(id);
    char line[160];
    std::snprintf(line, sizeof line, "criterion %2d: %s  %-40s %7.2f s", id, passed ? "PASS" : "FAIL",
                  c["name"].get<std::string>().c_str(), times[i]["seconds"].get<double>());
    std::cout << line;
    if (!passed && expected.count(id)) std::cout << "  (expected)";
    std::cout << "\n    " << c["detail"].dump() << '\n';
  }
  const bool ok = failed == expected;
  std::cout << (failed.empty() ? "all criteria passed" : std::to_string(failed.size()) + " criteria failed")
            << (ok ? "" : "  [unexpected outcome]") << '\n';
  return ok ? 0 : 1;
}
