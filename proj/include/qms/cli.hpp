// cli.hpp -- single command-line entry point over every module, with a
// deterministic RESULT verdict line for scripting and golden tests.
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qms {
namespace cli {

/// Dispatches one invocation. Exit code 0 when a decision was rendered
/// (whatever the verdict), 1 on usage errors, 2 on budget or overflow
/// errors. All reports end with a line `RESULT: <value>`.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace cli
}  // namespace qms
