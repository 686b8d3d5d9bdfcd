// Figure-paragraph retrieval: find paragraphs that cite a figure and rank
// them against a caption/OCR query by TF-IDF cosine similarity.

#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace archeval {

struct ParagraphCandidate {
  std::size_t index = 0;  // position among the document's paragraphs
  std::string text;
  double score = 0.0;
};

inline constexpr std::size_t kDefaultTopK = 3;

// Paragraphs are separated by one or more blank lines.
std::vector<std::string> split_paragraphs(std::string_view doc);

// True if `text` cites figure `fig_num` using Figure, Fig, figure or fig,
// each optionally followed by '.', then optional whitespace, then the
// number with no further digit.
bool references_figure(std::string_view text, int fig_num);

std::vector<ParagraphCandidate> find_figure_paragraphs(std::string_view doc,
                                                       int fig_num);

// Lowercased runs of alphanumeric characters (bytes >= 0x80 count as
// alphanumeric).
std::vector<std::string> tfidf_tokens(std::string_view text);

// Scores every candidate against `query` and returns at most k of them,
// best first; ties keep document order. Throws std::invalid_argument if
// k == 0.
std::vector<ParagraphCandidate> tfidf_rank(
    std::vector<ParagraphCandidate> candidates, std::string_view query,
    std::size_t k = kDefaultTopK);

}  // namespace archeval
