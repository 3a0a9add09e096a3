#pragma once

#include <chrono>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sv2svt {

struct ProcessResult {
  int exit_code = 0;  // -1 when killed or terminated by a signal
  bool timed_out = false;
  std::string out;
  std::string err;
};

/// Runs argv[0] (an existing path) with argv, feeding `stdin_data` (or
/// /dev/null) and capturing stdout and stderr. The child is killed when it
/// outlives `timeout`. Throws AdapterError("process", ...) when it cannot
/// be started.
ProcessResult run_process(const std::vector<std::string>& argv,
                          const std::optional<std::string>& stdin_data,
                          std::chrono::milliseconds timeout);

/// Shell-like word splitting: whitespace separates words, single quotes are
/// literal, double quotes allow \" and \\, a backslash escapes the next
/// character outside quotes. Throws ConfigError for an unterminated quote.
std::vector<std::string> split_command(std::string_view command);

/// Resolves an executable name. Names containing '/' resolve against
/// `base_dir`; bare names search PATH. Empty result when not found or not
/// executable.
std::optional<std::filesystem::path> find_executable(std::string_view name,
                                                     const std::filesystem::path& base_dir);

}  // namespace sv2svt
