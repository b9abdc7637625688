#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "ffdist/cli.hpp"

namespace testing_support {

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

inline CliResult run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "ffdist");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = ffdist::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

/// Drops the timestamp line of a JSON or CSV report.
inline std::string without_timestamp(const std::string& report) {
  std::istringstream in(report);
  std::string line, kept;
  while (std::getline(in, line)) {
    if (line.find("\"timestamp\":") != std::string::npos || line.rfind("# timestamp:", 0) == 0) continue;
    kept += line + '\n';
  }
  return kept;
}

}  // namespace testing_support
