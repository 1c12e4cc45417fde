#pragma once
// Small string helpers shared by the text formats.

#include <string>
#include <string_view>
#include <vector>

namespace ratkit {

std::vector<std::string_view> split_lines(std::string_view text);
std::string_view trim(std::string_view s);
// Drops everything from '#' on, then trims.
std::string_view strip_comment(std::string_view line);
// Whitespace separated tokens.
std::vector<std::string_view> tokens(std::string_view s);
bool starts_with_key(std::string_view line, std::string_view key); // "key:" prefix

} // namespace ratkit
