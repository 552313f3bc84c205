#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

namespace scenelint {

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& contents);

/// Expands a shell glob pattern. A pattern without wildcards that names an
/// existing file is returned as-is. Results are sorted.
std::vector<std::filesystem::path> expand_glob(const std::string& pattern);

/// Runs `fn(i)` for i in [0, n) on up to `jobs` threads. `jobs == 0` means
/// hardware concurrency. The first exception thrown by any task is rethrown.
void parallel_for(std::size_t n, std::size_t jobs, const std::function<void(std::size_t)>& fn);

std::size_t default_jobs();

}  // namespace scenelint
