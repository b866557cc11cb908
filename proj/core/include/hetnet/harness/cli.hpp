#pragma once

#include <iosfwd>

namespace hetnet::harness {

enum ExitCode : int {
  kExitOk = 0,
  kExitValidationFailed = 1,
  kExitConfigError = 2,
  kExitIoError = 3,
};

/// Entry point of the `hetnet` tool: assoc | throughput | sweep | validate.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hetnet::harness
