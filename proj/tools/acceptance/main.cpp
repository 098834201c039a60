// Acceptance suite: one PASS/FAIL line per criterion. Criterion 12 runs the
// commsol executable's selftest in a child process.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include "acceptance.hpp"
#include "cli.hpp"

int main(int argc, char **argv) {
  using clock = std::chrono::steady_clock;
  const auto start = clock::now();
  auto failures = commsol::acceptance::run_all(std::cout);

  commsol::acceptance::Result r{12, "CLI hermeticity", false, 0, 360, ""};
  const auto t0 = clock::now();
  std::string exe = argc > 1 ? argv[1] : "";
  int code = -1;
  std::string tail;
  if (!exe.empty()) {
    FILE *pipe = popen((exe + " selftest 2>&1").c_str(), "r");
    if (pipe != nullptr) {
      char buf[512];
      while (std::fgets(buf, sizeof buf, pipe) != nullptr) {
        tail = buf;
      }
      const int status = pclose(pipe);
      code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    }
  }
  std::ostringstream log;
  const bool rt = commsol::cli::round_trip(log);
  r.seconds = std::chrono::duration<double>(clock::now() - t0).count();
  const double total = std::chrono::duration<double>(clock::now() - start).count();
  r.passed = code == 0 && rt && total < r.limit_seconds;
  r.detail = (exe.empty() ? std::string("no commsol executable given") : "selftest exit " + std::to_string(code)) +
             ", round trip " + (rt ? "ok" : "failed") + ", total " + std::to_string(static_cast<int>(total)) + " s";
  if (!rt) {
    r.detail += "\n" + log.str();
  }
  std::cout << commsol::acceptance::format(r) << std::endl;
  if (!r.passed) {
    failures.push_back(r);
  }
  std::cout << (failures.empty() ? "acceptance: 12/12 passed" : "acceptance: " + std::to_string(failures.size()) + " failed")
            << std::endl;
  return failures.empty() ? 0 : 1;
}
