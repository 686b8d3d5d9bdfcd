// Surface-level code metrics between predicted and reference DOT source.

#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace archeval {

struct TextMetricConfig {
  double rouge_beta = 1.0;
  int chrf_max_n = 6;
  double chrf_beta = 2.0;
  // n-gram BLEU, keyword-weighted BLEU, statement match, edge dataflow.
  std::array<double, 4> codebleu_weights{0.25, 0.25, 0.25, 0.25};
  // Collapse whitespace runs before computing the edit distance.
  bool collapse_whitespace_for_edit = true;

  // Throws std::invalid_argument on negative weights, weights not summing
  // to 1 (within 1e-9), chrf_max_n < 1 or non-positive betas.
  void validate() const;
};

struct CodeBleuComponents {
  double ngram = 0.0;
  double weighted_ngram = 0.0;
  double syntax = 0.0;
  double dataflow = 0.0;
};

struct CodeBleuResult {
  double score = 0.0;
  CodeBleuComponents components;
};

struct TextMetricReport {
  double rouge_l = 0.0;
  double code_bleu = 0.0;
  double chrf = 0.0;
  std::size_t edit_distance = 0;

  bool operator==(const TextMetricReport&) const = default;
};

// Word-level tokens for ROUGE-L and BLEU: runs of identifier characters,
// `->` and `--` as single tokens, and every other symbol on its own.
std::vector<std::string> code_tokens(std::string_view text);

double rouge_l(std::string_view pred, std::string_view ref, double beta = 1.0);

// Character (code point) Levenshtein distance.
std::size_t levenshtein(std::string_view pred, std::string_view ref);

double chrf(std::string_view pred, std::string_view ref, int max_n = 6,
            double beta = 2.0);

// Tokens up-weighted in the keyword-weighted unigram precision.
inline constexpr std::array<std::string_view, 4> kDotKeywords{
    "digraph", "label", "->", "subgraph"};
inline constexpr double kKeywordWeight = 4.0;

// Standard 4-gram BLEU with brevity penalty; an order with no clipped
// matches contributes 1/(candidates+1).
double ngram_bleu(const std::vector<std::string>& pred,
                  const std::vector<std::string>& ref, bool keyword_weighted);

// F1 over canonical statement multisets (one unit per node label and per
// labelled edge). 0 if either side fails to parse.
double statement_match(std::string_view pred, std::string_view ref);

// Jaccard index of (source label, target label) edge sets after label
// normalization. 0 if either side fails to parse.
double dataflow_match(std::string_view pred, std::string_view ref);

CodeBleuResult code_bleu(std::string_view pred, std::string_view ref,
                         const TextMetricConfig& config = {});

TextMetricReport text_metrics(std::string_view pred, std::string_view ref,
                              const TextMetricConfig& config = {});

}  // namespace archeval
