/// @file  svmlight.hpp
/// @brief Reader for svmlight-style ranking data:
///        "<label> qid:<q> <index>:<value> ..." with 1-based, increasing
///        feature indices. Trailing "# ..." comments are stripped.

#pragma once

#include <cstdlib>
#include <istream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "coactive/detail/parse.hpp"
#include "coactive/ranking.hpp"
#include "coactive/vector.hpp"

namespace coactive {

namespace detail {

inline std::runtime_error svmlight_error(int line_no, const std::string& what) {
  return std::runtime_error("svmlight: line " + std::to_string(line_no) + ": " + what);
}

}  // namespace detail

/// Parses a whole stream into per-query contexts. Documents are grouped by
/// qid in order of first appearance (out-of-order qids still group); within
/// a group, documents keep file order. Missing feature indices are zero;
/// every document is padded to the max index seen in the file.
inline std::vector<RankingContext> parse_svmlight_ranking(std::istream& in) {
  struct RawDoc {
    long qid;
    int label;
    std::vector<std::pair<long, double>> entries;
  };
  std::vector<RawDoc> docs;
  long max_index = 0;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;  // blank line

    long label = 0;
    if (!detail::parse_int(tok, label)) {
      throw detail::svmlight_error(line_no, "non-integer label '" + tok + "'");
    }
    if (!(ls >> tok) || tok.rfind("qid:", 0) != 0) {
      throw detail::svmlight_error(line_no, "expected qid:<q> after the label");
    }
    long qid = 0;
    if (!detail::parse_int(tok.substr(4), qid)) {
      throw detail::svmlight_error(line_no, "malformed qid '" + tok + "'");
    }
    RawDoc doc;
    doc.qid = qid;
    doc.label = static_cast<int>(label);
    long prev_index = 0;
    while (ls >> tok) {
      const auto colon = tok.find(':');
      if (colon == std::string::npos) {
        throw detail::svmlight_error(line_no, "expected <index>:<value>, got '" + tok + "'");
      }
      long index = 0;
      if (!detail::parse_int(tok.substr(0, colon), index) || index < 1) {
        throw detail::svmlight_error(line_no, "bad feature index in '" + tok + "'");
      }
      if (index <= prev_index) {
        throw detail::svmlight_error(line_no, "feature indices must be increasing");
      }
      prev_index = index;
      char* end = nullptr;
      const std::string value_str = tok.substr(colon + 1);
      const double value = std::strtod(value_str.c_str(), &end);
      if (value_str.empty() || end == nullptr || *end != '\0') {
        throw detail::svmlight_error(line_no, "bad feature value in '" + tok + "'");
      }
      doc.entries.emplace_back(index, value);
      if (index > max_index) max_index = index;
    }
    docs.push_back(std::move(doc));
  }

  std::vector<RankingContext> contexts;
  std::map<long, std::size_t> group_of;
  for (const RawDoc& doc : docs) {
    auto [it, inserted] = group_of.try_emplace(doc.qid, contexts.size());
    if (inserted) {
      contexts.emplace_back();
      contexts.back().query_id = static_cast<int>(doc.qid);
    }
    RankingContext& ctx = contexts[it->second];
    FeatureVector features = zeros(static_cast<std::size_t>(max_index));
    for (const auto& [index, value] : doc.entries) {
      features[static_cast<std::size_t>(index - 1)] = value;
    }
    ctx.docs.push_back(std::move(features));
    ctx.labels.push_back(doc.label);
  }
  return contexts;
}

}  // namespace coactive
