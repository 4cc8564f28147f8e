#ifndef PPHPC_SUBPROCESS_HPP
#define PPHPC_SUBPROCESS_HPP

#include <string>
#include <vector>

namespace pphpc {

struct ProcessResult {
  int exit_code = -1;     // valid when exited normally
  bool exited = false;    // false on signal or timeout
  bool timed_out = false;
  std::string output;     // captured standard output
};

/// Runs argv[0] with the given arguments, capturing standard output, with a
/// hard wall-clock timeout. On timeout the child is killed with SIGKILL.
/// The child is always reaped before returning. Standard error is passed
/// through. Throws std::system_error on spawn failure (e.g. fork/pipe),
/// not on child failure.
ProcessResult run_process(const std::vector<std::string>& argv,
                          double timeout_seconds);

}  // namespace pphpc

#endif
