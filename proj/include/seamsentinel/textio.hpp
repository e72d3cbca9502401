#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace seam {

// Shortest decimal text that parses back to the same double. All persisted
// artifacts go through this, which is what makes round-trips bit-exact and
// repeated runs byte-identical.
std::string format_double(double value);
std::string format_int(long long value);

double parse_double(std::string_view text, const std::string& context);
long long parse_int(std::string_view text, const std::string& context);

std::string_view trim(std::string_view s);
std::vector<std::string_view> split(std::string_view s, char sep);

std::uint64_t fnv1a64(std::string_view data);
std::string to_hex(std::uint64_t value);

// key=value file with '#' comments and blank lines
std::map<std::string, std::string> parse_key_value_file(const std::filesystem::path& path);
std::map<std::string, std::string> parse_key_value_text(std::string_view text,
                                                        const std::string& context);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view content);

}  // namespace seam
