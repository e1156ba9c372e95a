#pragma once

#include <chrono>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace inkwarp {

/// Shell-like word splitting: whitespace separates words, single quotes are
/// literal, double quotes group and allow \" and \\ escapes. No expansion.
/// Throws Error on an unterminated quote.
std::vector<std::string> split_command(std::string_view command);

struct ProcessResult {
  int exit_code = 0; // 128 + signal when killed by a signal
};

/// Runs argv[0] (PATH lookup) with stdout/stderr appended to `log_path` when
/// given, otherwise discarded. Throws SpawnError if the program cannot be
/// started and Timeout (after killing it) if it outlives `timeout`.
ProcessResult run_process(const std::vector<std::string>& argv, std::chrono::milliseconds timeout,
                          const std::optional<std::filesystem::path>& log_path = std::nullopt);

} // namespace inkwarp
