#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include "cdturing/config.hpp"

namespace cdturing {

enum class Subcommand { equilibrium, ode, dispersion, threshold, simulate, sweep };

std::optional<Subcommand> subcommand_from_string(std::string_view name);
const char* to_string(Subcommand cmd);

/// Runs one pipeline stage. Reports go to `out`, progress to `log`; files are
/// written under cfg.output.dir. Library errors propagate to the caller.
void dispatch(const RunConfig& cfg, Subcommand cmd, std::ostream& out,
              std::ostream& log);

/// "error kind=<Kind> code=<n> message=\"...\"" for a library error.
std::string error_line(const std::exception& err);
int exit_code_for(const std::exception& err);

/// Exit-code legend printed by --help.
std::string exit_code_table();

}  // namespace cdturing
