#pragma once

#include <iosfwd>
#include <string>

#include "psalink/config.hpp"

namespace psalink {

// Exit codes shared by the CLI and the command layer.
enum ExitCode : int {
    exit_ok = 0,
    exit_usage = 2,
    exit_infeasible = 3,
    exit_validation = 4,
};

struct OutputOptions {
    std::string format = "table";  // table | csv | json
    bool metadata = true;
    int threads = 1;
};

int cmd_capacity(const Config& cfg, const OutputOptions& opts, std::ostream& os,
                 std::ostream& err);
int cmd_sweep(const Config& cfg, const OutputOptions& opts, std::ostream& os,
              std::ostream& err);
int cmd_optimize(const Config& cfg, const OutputOptions& opts, std::ostream& os,
                 std::ostream& err);
int cmd_validate(const Config& cfg, const OutputOptions& opts, std::ostream& os,
                 std::ostream& err);

}  // namespace psalink
