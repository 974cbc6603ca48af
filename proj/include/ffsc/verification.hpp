#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "ffsc/spin_chain.hpp"

namespace ffsc::analysis {

struct CheckLine {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct SuiteReport {
  std::string suite;
  std::vector<CheckLine> checks;

  [[nodiscard]] bool passed() const;
};

/// "bounds", "symmetry", "spectrum", "oracle", "rg".
[[nodiscard]] const std::vector<std::string>& suite_names();

/// Runs one property suite on its default grid. Throws std::invalid_argument
/// for an unknown suite name.
[[nodiscard]] SuiteReport run_suite(std::string_view name, const EnumerationOptions& options = {});

}  // namespace ffsc::analysis
