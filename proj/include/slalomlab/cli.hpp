#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "slalomlab/family.hpp"
#include "slalomlab/measure.hpp"

namespace slalomlab {

inline constexpr int kReportVersion = 1;

enum ExitCode { kExitOk = 0, kExitInputError = 1, kExitFinding = 2 };

struct RunOptions {
  std::optional<unsigned> depth;
  std::optional<unsigned> horizon;
  std::optional<std::uint64_t> seed;
};

struct RunResult {
  int exit_code = kExitOk;
  nlohmann::json report;  // empty on input error
  std::string error;
};

const std::vector<std::string>& subcommands();

/// Runs one subcommand. Input errors come back as exit code 1 with a message;
/// a non-empty findings list gives exit code 2.
RunResult run_command(const std::string& command, const Config& config, const RunOptions& options = {});

/// Pretty JSON with sorted keys and a trailing newline.
std::string report_text(const nlohmann::json& report);

// Reference syntax used by [run] keys.

/// "fam.id" → that member; "fam" → the family's only member.
const Member& resolve_member(const Config& config, const std::string& ref);
/// "window <levels> @ n" or a member reference (a T_A generator).
Generator parse_generator(const Config& config, const std::string& text);
WindowGen parse_window(const std::string& text);
/// "generic" or "window <levels> @ n".
SlalomName parse_name(const std::string& text);

}  // namespace slalomlab
