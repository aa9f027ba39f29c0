#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace kpforge::text {

std::string trim(std::string_view s);
std::string lowercase(std::string_view s);

// Lowercase + collapse all whitespace runs to single spaces + trim.
std::string normalize_ws(std::string_view s);

// Split on whitespace runs; empty tokens never appear.
std::vector<std::string> split_words(std::string_view s);

std::vector<std::string> split(std::string_view s, char sep);

bool starts_with(std::string_view s, std::string_view prefix);
bool contains(std::string_view haystack, std::string_view needle);

// Longest run of consecutive ASCII digits.
size_t longest_digit_run(std::string_view s);

}  // namespace kpforge::text
