/// @file  ratings.hpp
/// @brief Reader for delimiter-separated rating triples
///        "<user><delim><item><delim><rating>[<delim><timestamp>]".

#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "coactive/detail/parse.hpp"

namespace coactive {

struct RatingsTriple {
  std::int64_t user = 0;
  std::int64_t item = 0;
  int rating = 0;            // 1..5
  std::int64_t timestamp = -1;  // -1 when absent
};

namespace detail {

inline std::vector<std::string> split_on(const std::string& line,
                                         const std::string& delim) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = line.find(delim, start);
    if (pos == std::string::npos) {
      parts.push_back(line.substr(start));
      return parts;
    }
    parts.push_back(line.substr(start, pos - start));
    start = pos + delim.size();
  }
}

inline std::runtime_error ratings_error(int line_no, const std::string& what) {
  return std::runtime_error("ratings: line " + std::to_string(line_no) + ": " + what);
}

}  // namespace detail

/// Parses rating triples. One rating per (user, item): on duplicates the
/// last occurrence wins in place (the triple keeps its first-occurrence
/// position) and a warning is emitted to `warnings` when provided.
inline std::vector<RatingsTriple> parse_ratings(std::istream& in,
                                                const std::string& delim,
                                                std::ostream* warnings = nullptr) {
  if (delim.empty()) throw std::invalid_argument("parse_ratings: empty delimiter");
  std::vector<RatingsTriple> triples;
  std::map<std::pair<std::int64_t, std::int64_t>, std::size_t> seen;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto parts = detail::split_on(line, delim);
    if (parts.size() != 3 && parts.size() != 4) {
      throw detail::ratings_error(line_no, "expected 3 or 4 fields, got " +
                                               std::to_string(parts.size()));
    }
    long user = 0, item = 0, rating = 0;
    if (!detail::parse_int(parts[0], user) || !detail::parse_int(parts[1], item) ||
        !detail::parse_int(parts[2], rating)) {
      throw detail::ratings_error(line_no, "non-integer field");
    }
    RatingsTriple triple;
    triple.user = user;
    triple.item = item;
    triple.rating = static_cast<int>(rating);
    if (triple.rating < 1 || triple.rating > 5) {
      throw detail::ratings_error(line_no, "rating " + std::to_string(rating) +
                                               " outside 1..5");
    }
    if (parts.size() == 4) {
      long ts = 0;
      if (!detail::parse_int(parts[3], ts)) {
        throw detail::ratings_error(line_no, "non-integer timestamp");
      }
      triple.timestamp = ts;
    }
    const auto key = std::make_pair(triple.user, triple.item);
    if (auto it = seen.find(key); it != seen.end()) {
      if (warnings != nullptr) {
        *warnings << "ratings: line " << line_no << ": duplicate (user " << user
                  << ", item " << item << "), last value wins\n";
      }
      triples[it->second] = triple;
    } else {
      seen.emplace(key, triples.size());
      triples.push_back(triple);
    }
  }
  return triples;
}

}  // namespace coactive
