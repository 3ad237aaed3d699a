#pragma once

#include <iosfwd>
#include <optional>
#include <string>

namespace newstrend {

// CLI entry points, factored out of main so tests can drive them directly.
// Exit codes: 0 success, 1 config error, 2 runtime/pipeline error.

int cmd_validate(const std::string& config_path, std::ostream& out, std::ostream& err);

int cmd_run(const std::string& config_path, std::ostream& out, std::ostream& err);

struct InspectOptions {
  std::string subcommand;           // vocab | windows | features
  std::optional<std::string> date;  // features: day to inspect (default: first test day)
  int top = 20;                     // vocab: number of terms to list
};
int cmd_inspect(const std::string& config_path, const InspectOptions& options, std::ostream& out,
                std::ostream& err);

// write-temp-then-rename
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace newstrend
