#include "deepcoda/text.hpp"

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <istream>

#include "deepcoda/error.hpp"

namespace deepcoda {

std::string trim(std::string_view s) {
  std::size_t begin = 0, end = s.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(s[begin]))) ++begin;
  while (end > begin && std::isspace(static_cast<unsigned char>(s[end - 1]))) --end;
  return std::string(s.substr(begin, end - begin));
}

std::vector<std::string> split_whitespace(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    std::size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
    if (j > i) out.emplace_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.emplace_back(s.substr(start));
      return out;
    }
    out.emplace_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

double parse_double(std::string_view token, std::string_view what) {
  const std::string text = trim(token);
  if (text.empty()) throw InvalidInput(std::string(what) + ": empty numeric field");
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (end != text.c_str() + text.size() || errno == ERANGE) {
    throw InvalidInput(std::string(what) + ": cannot parse '" + text + "' as a number");
  }
  if (!std::isfinite(v)) throw InvalidInput(std::string(what) + ": non-finite value '" + text + "'");
  return v;
}

std::size_t parse_size(std::string_view token, std::string_view what) {
  const std::string text = trim(token);
  if (text.empty() || !std::all_of(text.begin(), text.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
    throw InvalidInput(std::string(what) + ": expected a non-negative integer, got '" + text + "'");
  }
  errno = 0;
  const unsigned long long v = std::strtoull(text.c_str(), nullptr, 10);
  if (errno == ERANGE) throw InvalidInput(std::string(what) + ": integer out of range");
  return static_cast<std::size_t>(v);
}

std::map<std::string, std::string> parse_key_values(std::istream& in, std::string_view context) {
  std::map<std::string, std::string> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw InvalidInput(std::string(context) + ": line " + std::to_string(line_no) + " is not 'key = value'");
    }
    std::string key = trim(std::string_view(body).substr(0, eq));
    std::string value = trim(std::string_view(body).substr(eq + 1));
    if (key.empty()) throw InvalidInput(std::string(context) + ": empty key on line " + std::to_string(line_no));
    if (!out.emplace(key, value).second) {
      throw InvalidInput(std::string(context) + ": duplicate key '" + key + "'");
    }
  }
  return out;
}

}  // namespace deepcoda
