#include "icogt/report.hpp"

#include <algorithm>

namespace icogt {

void Report::add(std::string name, double max_deviation, double tolerance) {
  checks.push_back(CheckResult{std::move(name), max_deviation <= tolerance,
                               max_deviation, tolerance});
}

void Report::merge(const Report& other) {
  checks.insert(checks.end(), other.checks.begin(), other.checks.end());
}

bool Report::all_passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const CheckResult& c) { return c.passed; });
}

double Report::max_deviation() const {
  double m = 0.0;
  for (const auto& c : checks) m = std::max(m, c.max_deviation);
  return m;
}

}  // namespace icogt
