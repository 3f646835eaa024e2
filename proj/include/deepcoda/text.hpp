#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

// Small parsing helpers shared by the model, config and CSV readers.
namespace deepcoda {

std::string trim(std::string_view s);
std::vector<std::string> split_whitespace(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);

// Whole-token parses; `what` names the field in error messages.
double parse_double(std::string_view token, std::string_view what);
std::size_t parse_size(std::string_view token, std::string_view what);

// Reads `key = value` lines. Blank lines and text after '#' are ignored;
// duplicate keys are rejected.
std::map<std::string, std::string> parse_key_values(std::istream& in, std::string_view context);

}  // namespace deepcoda
