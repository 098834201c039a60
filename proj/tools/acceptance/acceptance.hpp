#pragma once

// Acceptance criteria 1-11 as self-contained checks with time limits. Each
// check carries its own brute-force oracle rather than reusing library code
// for the expected side.

#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace commsol::acceptance {

struct Criterion {
  int id = 0;
  std::string title;
  double limit_seconds = 0;
  /// Returns a short summary; throws CheckFailed on the first failure.
  std::function<std::string()> check;
};

struct CheckFailed : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Result {
  int id = 0;
  std::string title;
  bool passed = false;
  double seconds = 0;
  double limit_seconds = 0;
  std::string detail;
};

const std::vector<Criterion> &criteria();
Result run(const Criterion &c);
/// "PASS  3  zeta correspondence  (1.21 s, limit 60 s)  <detail>".
std::string format(const Result &r);
/// Runs every criterion, printing one line each; returns the failures.
std::vector<Result> run_all(std::ostream &out);

} // namespace commsol::acceptance
