#include "archeval/retriever.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

namespace archeval {

namespace {

bool is_blank(std::string_view line) {
  return std::all_of(line.begin(), line.end(), [](char c) {
    return std::isspace(static_cast<unsigned char>(c));
  });
}

bool is_word(char c) {
  auto u = static_cast<unsigned char>(c);
  return std::isalnum(u) || u == '_';
}

bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)); }

using TermVector = std::map<std::string, double>;

TermVector term_counts(std::string_view text) {
  TermVector tf;
  for (auto& t : tfidf_tokens(text)) tf[t] += 1.0;
  return tf;
}

}  // namespace

std::vector<std::string> split_paragraphs(std::string_view doc) {
  std::vector<std::string> out;
  std::string current;
  std::size_t start = 0;
  while (start <= doc.size()) {
    std::size_t end = doc.find('\n', start);
    if (end == std::string_view::npos) end = doc.size();
    std::string_view line = doc.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (is_blank(line)) {
      if (!current.empty()) out.push_back(std::move(current));
      current.clear();
    } else {
      if (!current.empty()) current.push_back('\n');
      current.append(line);
    }
    start = end + 1;
  }
  if (!current.empty()) out.push_back(std::move(current));
  return out;
}

bool references_figure(std::string_view text, int fig_num) {
  if (fig_num < 1) return false;
  const std::string number = std::to_string(fig_num);
  for (std::size_t pos = 0; pos < text.size(); ++pos) {
    if (pos > 0 && is_word(text[pos - 1])) continue;
    std::size_t cur = pos;
    if (text.substr(pos, 6) == "Figure" || text.substr(pos, 6) == "figure") {
      cur += 6;
    } else if (text.substr(pos, 3) == "Fig" || text.substr(pos, 3) == "fig") {
      cur += 3;
    } else {
      continue;
    }
    if (cur < text.size() && text[cur] == '.') ++cur;
    while (cur < text.size() &&
           std::isspace(static_cast<unsigned char>(text[cur]))) {
      ++cur;
    }
    if (text.substr(cur, number.size()) != number) continue;
    cur += number.size();
    if (cur < text.size() && is_digit(text[cur])) continue;
    return true;
  }
  return false;
}

std::vector<ParagraphCandidate> find_figure_paragraphs(std::string_view doc,
                                                       int fig_num) {
  std::vector<ParagraphCandidate> out;
  std::vector<std::string> paragraphs = split_paragraphs(doc);
  for (std::size_t i = 0; i < paragraphs.size(); ++i) {
    if (references_figure(paragraphs[i], fig_num)) {
      out.push_back({i, std::move(paragraphs[i]), 0.0});
    }
  }
  return out;
}

std::vector<std::string> tfidf_tokens(std::string_view text) {
  std::vector<std::string> out;
  std::string word;
  for (char c : text) {
    auto u = static_cast<unsigned char>(c);
    if (std::isalnum(u) || u >= 0x80) {
      word.push_back(static_cast<char>(std::tolower(u)));
    } else if (!word.empty()) {
      out.push_back(std::move(word));
      word.clear();
    }
  }
  if (!word.empty()) out.push_back(std::move(word));
  return out;
}

std::vector<ParagraphCandidate> tfidf_rank(
    std::vector<ParagraphCandidate> candidates, std::string_view query,
    std::size_t k) {
  if (k == 0) throw std::invalid_argument("k must be at least 1");
  if (candidates.empty()) return {};

  std::vector<TermVector> docs;
  docs.reserve(candidates.size() + 1);
  for (const auto& c : candidates) docs.push_back(term_counts(c.text));
  docs.push_back(term_counts(query));

  std::map<std::string, double> df;
  for (const auto& d : docs) {
    for (const auto& [term, count] : d) df[term] += 1.0;
  }
  const double n_docs = static_cast<double>(docs.size());
  for (auto& d : docs) {
    for (auto& [term, weight] : d) weight *= std::log(n_docs / df[term]);
  }
  auto norm = [](const TermVector& v) {
    double s = 0.0;
    for (const auto& [term, w] : v) s += w * w;
    return std::sqrt(s);
  };
  const TermVector& q = docs.back();
  const double q_norm = norm(q);
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    double c_norm = norm(docs[i]);
    double dot = 0.0;
    for (const auto& [term, w] : q) {
      auto it = docs[i].find(term);
      if (it != docs[i].end()) dot += w * it->second;
    }
    double score = (q_norm > 0.0 && c_norm > 0.0) ? dot / (q_norm * c_norm)
                                                  : 0.0;
    candidates[i].score = std::clamp(score, 0.0, 1.0);
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const ParagraphCandidate& a, const ParagraphCandidate& b) {
                     if (a.score != b.score) return a.score > b.score;
                     return a.index < b.index;
                   });
  if (candidates.size() > k) candidates.resize(k);
  return candidates;
}

}  // namespace archeval
