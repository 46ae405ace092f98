#pragma once

#include <string>
#include <vector>

namespace icogt {

struct CheckResult {
  std::string name;
  bool passed = false;
  double max_deviation = 0.0;
  double tolerance = 0.0;
};

/// Ordered list of named checks; a report passes iff every check does.
struct Report {
  std::vector<CheckResult> checks;

  void add(std::string name, double max_deviation, double tolerance);
  void merge(const Report& other);

  bool all_passed() const;
  double max_deviation() const;
};

}  // namespace icogt
