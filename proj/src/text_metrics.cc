#include "archeval/text_metrics.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>
#include <unordered_map>

#include "archeval/dot.h"
#include "archeval/similarity.h"
#include "archeval/unicode.h"

namespace archeval {

namespace {

bool is_word_byte(unsigned char c) {
  return std::isalnum(c) || c == '_' || c >= 0x80;
}

double f_beta(double precision, double recall, double beta) {
  double b2 = beta * beta;
  double den = b2 * precision + recall;
  return den > 0.0 ? (1.0 + b2) * precision * recall / den : 0.0;
}

using NgramCounts = std::unordered_map<std::string, std::size_t>;

NgramCounts count_ngrams(const std::vector<std::string>& tokens,
                         std::size_t n) {
  NgramCounts counts;
  if (tokens.size() < n) return counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    std::string key = tokens[i];
    for (std::size_t k = 1; k < n; ++k) {
      key.push_back('\x1f');
      key += tokens[i + k];
    }
    ++counts[key];
  }
  return counts;
}

double token_weight(const std::string& token) {
  for (std::string_view kw : kDotKeywords) {
    if (token == kw) return kKeywordWeight;
  }
  return 1.0;
}

std::multiset<std::string> statement_units(const DotGraph& graph) {
  DotGraph canon = canonicalize(graph);
  std::multiset<std::string> units;
  std::vector<std::string> labels;
  labels.reserve(canon.nodes.size());
  for (const NodeDef& n : canon.nodes) {
    labels.push_back(normalize_label(n.label));
    units.insert("node\x1f" + labels.back());
  }
  for (auto [s, t] : canon.edge_indices()) {
    units.insert("edge\x1f" + labels[s] + "\x1f" + labels[t]);
  }
  return units;
}

std::set<std::pair<std::string, std::string>> labelled_edges(
    const DotGraph& graph) {
  std::set<std::pair<std::string, std::string>> out;
  for (auto [s, t] : graph.edge_indices()) {
    out.emplace(normalize_label(graph.nodes[s].label),
                normalize_label(graph.nodes[t].label));
  }
  return out;
}

template <typename Fn>
double on_parsed(std::string_view pred, std::string_view ref, Fn&& fn) {
  try {
    return fn(parse_dot(pred), parse_dot(ref));
  } catch (const ParseError&) {
    return 0.0;
  }
}

}  // namespace

void TextMetricConfig::validate() const {
  double sum = 0.0;
  for (double w : codebleu_weights) {
    if (!(w >= 0.0)) throw std::invalid_argument("negative CodeBLEU weight");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw std::invalid_argument("CodeBLEU weights must sum to 1");
  }
  if (chrf_max_n < 1) throw std::invalid_argument("chrf_max_n must be >= 1");
  if (!(chrf_beta > 0.0) || !(rouge_beta > 0.0)) {
    throw std::invalid_argument("beta must be positive");
  }
}

std::vector<std::string> code_tokens(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    auto c = static_cast<unsigned char>(text[i]);
    if (std::isspace(c)) {
      ++i;
    } else if (is_word_byte(c)) {
      std::size_t j = i;
      while (j < text.size() && is_word_byte(static_cast<unsigned char>(text[j]))) ++j;
      out.emplace_back(text.substr(i, j - i));
      i = j;
    } else if (c == '-' && i + 1 < text.size() &&
               (text[i + 1] == '>' || text[i + 1] == '-')) {
      out.emplace_back(text.substr(i, 2));
      i += 2;
    } else {
      out.emplace_back(1, text[i]);
      ++i;
    }
  }
  return out;
}

double rouge_l(std::string_view pred, std::string_view ref, double beta) {
  std::vector<std::string> p = code_tokens(pred);
  std::vector<std::string> r = code_tokens(ref);
  if (p.empty() && r.empty()) return 1.0;
  if (p.empty() || r.empty()) return 0.0;
  std::vector<std::size_t> prev(r.size() + 1, 0), cur(r.size() + 1, 0);
  for (std::size_t i = 1; i <= p.size(); ++i) {
    for (std::size_t j = 1; j <= r.size(); ++j) {
      cur[j] = p[i - 1] == r[j - 1] ? prev[j - 1] + 1
                                    : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  double lcs = static_cast<double>(prev[r.size()]);
  if (lcs == 0.0) return 0.0;
  double recall = lcs / static_cast<double>(r.size());
  double precision = lcs / static_cast<double>(p.size());
  double b2 = beta * beta;
  return (1.0 + b2) * recall * precision / (recall + b2 * precision);
}

std::size_t levenshtein(std::string_view pred, std::string_view ref) {
  std::u32string a = decode_utf8(pred);
  std::u32string b = decode_utf8(ref);
  if (a.size() < b.size()) std::swap(a, b);
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      std::size_t up = row[j];
      std::size_t sub = diag + (a[i - 1] == b[j - 1] ? 0 : 1);
      row[j] = std::min({up + 1, row[j - 1] + 1, sub});
      diag = up;
    }
  }
  return row[b.size()];
}

double chrf(std::string_view pred, std::string_view ref, int max_n,
            double beta) {
  if (max_n < 1) throw std::invalid_argument("chrf max_n must be >= 1");
  std::u32string p = decode_utf8(collapse_whitespace(pred));
  std::u32string r = decode_utf8(collapse_whitespace(ref));
  double total = 0.0;
  int orders = 0;
  for (std::size_t n = 1; n <= static_cast<std::size_t>(max_n); ++n) {
    std::map<std::u32string, std::size_t> pc, rc;
    for (std::size_t i = 0; i + n <= p.size(); ++i) ++pc[p.substr(i, n)];
    for (std::size_t i = 0; i + n <= r.size(); ++i) ++rc[r.substr(i, n)];
    std::size_t p_total = p.size() >= n ? p.size() - n + 1 : 0;
    std::size_t r_total = r.size() >= n ? r.size() - n + 1 : 0;
    if (p_total + r_total == 0) continue;
    std::size_t matches = 0;
    for (const auto& [gram, count] : pc) {
      auto it = rc.find(gram);
      if (it != rc.end()) matches += std::min(count, it->second);
    }
    double precision = p_total ? static_cast<double>(matches) / p_total : 0.0;
    double recall = r_total ? static_cast<double>(matches) / r_total : 0.0;
    total += f_beta(precision, recall, beta);
    ++orders;
  }
  return orders == 0 ? 1.0 : total / orders;
}

double ngram_bleu(const std::vector<std::string>& pred,
                  const std::vector<std::string>& ref, bool keyword_weighted) {
  if (pred.empty()) return ref.empty() ? 1.0 : 0.0;
  constexpr std::size_t kMaxOrder = 4;
  double log_sum = 0.0;
  for (std::size_t n = 1; n <= kMaxOrder; ++n) {
    NgramCounts pc = count_ngrams(pred, n);
    NgramCounts rc = count_ngrams(ref, n);
    const bool weighted = keyword_weighted && n == 1;
    double matches = 0.0;
    double candidates = 0.0;
    for (const auto& [gram, count] : pc) {
      double w = weighted ? token_weight(gram) : 1.0;
      candidates += w * static_cast<double>(count);
      auto it = rc.find(gram);
      if (it != rc.end()) {
        matches += w * static_cast<double>(std::min(count, it->second));
      }
    }
    double precision = matches > 0.0 ? matches / candidates
                                     : 1.0 / (candidates + 1.0);
    log_sum += std::log(precision);
  }
  double c = static_cast<double>(pred.size());
  double r = static_cast<double>(ref.size());
  double brevity = c > r ? 1.0 : std::exp(1.0 - r / c);
  return brevity * std::exp(log_sum / kMaxOrder);
}

double statement_match(std::string_view pred, std::string_view ref) {
  return on_parsed(pred, ref, [](const DotGraph& p, const DotGraph& r) {
    std::multiset<std::string> pu = statement_units(p);
    std::multiset<std::string> ru = statement_units(r);
    if (pu.empty() && ru.empty()) return 1.0;
    if (pu.empty() || ru.empty()) return 0.0;
    std::vector<std::string> common;
    std::set_intersection(pu.begin(), pu.end(), ru.begin(), ru.end(),
                          std::back_inserter(common));
    double shared = static_cast<double>(common.size());
    double precision = shared / static_cast<double>(pu.size());
    double recall = shared / static_cast<double>(ru.size());
    return f_beta(precision, recall, 1.0);
  });
}

double dataflow_match(std::string_view pred, std::string_view ref) {
  return on_parsed(pred, ref, [](const DotGraph& p, const DotGraph& r) {
    auto pe = labelled_edges(p);
    auto re = labelled_edges(r);
    if (pe.empty() && re.empty()) return 1.0;
    std::size_t shared = 0;
    for (const auto& e : pe) shared += re.count(e);
    return static_cast<double>(shared) /
           static_cast<double>(pe.size() + re.size() - shared);
  });
}

CodeBleuResult code_bleu(std::string_view pred, std::string_view ref,
                         const TextMetricConfig& config) {
  config.validate();
  std::vector<std::string> p = code_tokens(pred);
  std::vector<std::string> r = code_tokens(ref);
  CodeBleuResult out;
  out.components.ngram = ngram_bleu(p, r, false);
  out.components.weighted_ngram = ngram_bleu(p, r, true);
  out.components.syntax = statement_match(pred, ref);
  out.components.dataflow = dataflow_match(pred, ref);
  const auto& w = config.codebleu_weights;
  out.score = w[0] * out.components.ngram + w[1] * out.components.weighted_ngram +
              w[2] * out.components.syntax + w[3] * out.components.dataflow;
  return out;
}

TextMetricReport text_metrics(std::string_view pred, std::string_view ref,
                              const TextMetricConfig& config) {
  config.validate();
  TextMetricReport out;
  out.rouge_l = rouge_l(pred, ref, config.rouge_beta);
  out.code_bleu = code_bleu(pred, ref, config).score;
  out.chrf = chrf(pred, ref, config.chrf_max_n, config.chrf_beta);
  if (config.collapse_whitespace_for_edit) {
    out.edit_distance =
        levenshtein(collapse_whitespace(pred), collapse_whitespace(ref));
  } else {
    out.edit_distance = levenshtein(pred, ref);
  }
  return out;
}

}  // namespace archeval
