#pragma once

// Command dispatch behind the `stripgap` executable. A RunConfig is a command
// name plus a flat key -> value map; run() validates the keys, calls into the
// numerical modules and returns a table that render() turns into CSV, an
// aligned table or a labelled report.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace stripgap::cli {

inline constexpr std::string_view kVersion = "0.1.0";

enum class OutputFormat { csv, report, table };

std::string_view to_string(OutputFormat format);
OutputFormat parse_format(std::string_view text);

struct RunConfig {
  std::string command;
  std::map<std::string, std::string> params;
  OutputFormat format = OutputFormat::csv;
  std::uint64_t seed = 0;
  unsigned workers = 1;  // affects speed only, never output
};

/// Exit statuses.
inline constexpr int kOk = 0;
inline constexpr int kUsageError = 1;
inline constexpr int kConditionFailed = 2;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  /// Scalar results shown by the report and table formats.
  std::vector<std::pair<std::string, std::string>> summary;
};

struct RunResult {
  int status = kOk;
  Table table;
  std::string error;  // set when status == kUsageError
};

/// Every command name accepted by run().
const std::vector<std::string>& command_names();
/// Keys accepted by a command, excluding the sweep-only ones.
const std::vector<std::string>& command_keys(const std::string& command);

RunResult run(const RunConfig& config);

/// 12 significant digits, locale independent.
std::string format_number(double x);

/// Metadata block: version, command, config echo, format and seed, each on a
/// `# ` line.
std::string metadata_block(const RunConfig& config);
/// Rebuilds the config from a metadata block (workers stay at 1).
RunConfig config_from_metadata(std::string_view block);

std::string render(const RunConfig& config, const RunResult& result);

/// Parses argv with CLI11, runs the command and writes the rendered output.
/// Returns the exit status.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace stripgap::cli
