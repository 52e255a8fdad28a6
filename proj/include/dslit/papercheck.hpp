#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "dslit/config.hpp"

namespace dslit::papercheck {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;   // measured values against their targets
  double seconds = 0.0;
};

struct Report {
  std::vector<CriterionResult> rows;
  std::vector<std::filesystem::path> artifacts;
  std::vector<std::string> warnings;

  bool all_passed() const;
};

struct Criterion {
  int id = 0;
  std::string name;
  std::function<CriterionResult(const config::ParamsDocument&, std::uint64_t seed)> run;
};

// The twelve acceptance checks, in order.
const std::vector<Criterion>& criteria();

// Runs one check, converting a thrown dslit::Error into a failed row.
CriterionResult run_criterion(const Criterion& c, const config::ParamsDocument& doc, std::uint64_t seed);

// Every CSV artifact of a run. Output is a pure function of (doc, seed).
std::vector<std::filesystem::path> write_artifacts(const config::ParamsDocument& doc, std::uint64_t seed,
                                                   const std::filesystem::path& dir);

// All criteria; artifacts go to `out_dir` when it is non-empty.
Report run_papercheck(const config::ParamsDocument& doc, std::uint64_t seed,
                      const std::filesystem::path& out_dir = {});

void print_table(const Report& report, std::ostream& os);

}  // namespace dslit::papercheck
