#pragma once

#include <string>
#include <vector>

namespace nag::cli {

struct Outcome {
  int exit_code = 0;
  /// Payload for standard output (empty when written to --out).
  std::string out;
  /// Usage text or a JSON error object for standard error.
  std::string err;
};

/// Runs one command line (without the program name). Never throws.
Outcome dispatch(const std::vector<std::string>& args);

int run(int argc, char** argv);

}  // namespace nag::cli
