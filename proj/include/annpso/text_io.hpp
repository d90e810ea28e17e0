#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace annpso::text {

// Shortest decimal text that parses back to exactly the same double.
std::string format_double(double value);

// Strict parse: the whole token must be a number.
bool parse_double(std::string_view token, double& value);
double parse_double_or_throw(std::string_view token, std::string_view context);

std::string_view trim(std::string_view text) noexcept;
std::vector<std::string_view> split(std::string_view line, char delimiter);
std::string lower(std::string_view text);

// Writes every (name, contents) pair to `<name>.tmp` inside `directory`, then
// renames them into place. Throws Error(io) before any rename if a write fails.
void write_files_atomically(const std::filesystem::path& directory,
                            const std::vector<std::pair<std::string, std::string>>& files);

std::string read_file(const std::filesystem::path& path);

}  // namespace annpso::text
