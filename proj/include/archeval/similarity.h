// Label normalization and the hybrid string similarity used to align
// ground-truth and predicted nodes.

#pragma once

#include <string>
#include <string_view>

namespace archeval {

// Lowercase, whitespace runs collapsed to one space, ends trimmed.
std::string normalize_label(std::string_view text);

// Ratcliff/Obershelp ratio 2*M/(|a|+|b|) over code points, where M is the
// total size of the recursively found longest matching blocks. No junk
// heuristics. The block search depends on argument order, so M is the larger
// of the two directions, which keeps the score symmetric. Two empty strings
// score 1.
double char_similarity(std::string_view a, std::string_view b);

// Jaccard index of the whitespace-separated token sets. Two empty token
// sets score 1.
double token_jaccard(std::string_view a, std::string_view b);

// max(char_similarity, token_jaccard) on normalized inputs.
double label_similarity(std::string_view a, std::string_view b);

}  // namespace archeval
