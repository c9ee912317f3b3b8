#pragma once

// The spinspec command line: subcommands return their documents so they can
// be tested in-process; `run` handles flags, files and exit codes.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "scenario.hpp"

namespace spinspec::app {

enum ExitCode { exit_ok = 0, exit_check_failed = 1, exit_config = 2, exit_numerical = 3 };

struct Document {
  std::string file;  // name inside the output directory
  std::string content;
};

struct CommandResult {
  std::vector<Document> documents;  // the first one goes to stdout without --out
  std::vector<std::string> failures;
  std::vector<std::string> warnings;

  int exit_code() const { return failures.empty() ? exit_ok : exit_check_failed; }
};

// %.17g
std::string format_double(double v);

CommandResult spectrum_command(const Scenario& s);
CommandResult verify_command(const Scenario& s);
CommandResult bounds_command(const Scenario& s);
CommandResult convergence_command(const Scenario& s);
CommandResult catalog_command();

// Writes to a temporary sibling and renames it into place.
void write_atomic(const std::filesystem::path& path, const std::string& content);

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace spinspec::app
