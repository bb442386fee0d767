#pragma once

#include <cstdlib>
#include <string>

namespace coactive::detail {

/// Strict base-10 integer parse: the whole token must be consumed.
inline bool parse_int(const std::string& tok, long& out) {
  if (tok.empty()) return false;
  char* end = nullptr;
  out = std::strtol(tok.c_str(), &end, 10);
  return end != nullptr && *end == '\0';
}

inline bool parse_u64(const std::string& tok, unsigned long long& out) {
  if (tok.empty() || tok.front() == '-') return false;
  char* end = nullptr;
  out = std::strtoull(tok.c_str(), &end, 10);
  return end != nullptr && *end == '\0';
}

inline bool parse_real(const std::string& tok, double& out) {
  if (tok.empty()) return false;
  char* end = nullptr;
  out = std::strtod(tok.c_str(), &end);
  return end != nullptr && *end == '\0';
}

}  // namespace coactive::detail
