#include "archeval/similarity.h"

#include <algorithm>
#include <array>
#include <cctype>
#include <set>
#include <sstream>
#include <vector>

#include "archeval/unicode.h"

namespace archeval {

namespace {

struct Block {
  std::size_t a = 0;
  std::size_t b = 0;
  std::size_t size = 0;
};

// Longest common block of a[alo,ahi) and b[blo,bhi). Among equally long
// blocks the one starting earliest in `a` wins, then earliest in `b`.
Block longest_match(const std::u32string& a, const std::u32string& b,
                    std::size_t alo, std::size_t ahi, std::size_t blo,
                    std::size_t bhi) {
  Block best{alo, blo, 0};
  std::vector<std::size_t> prev(bhi - blo + 1, 0);
  std::vector<std::size_t> cur(bhi - blo + 1, 0);
  for (std::size_t i = alo; i < ahi; ++i) {
    for (std::size_t j = blo; j < bhi; ++j) {
      std::size_t k = 0;
      if (a[i] == b[j]) k = prev[j - blo] + 1;
      cur[j - blo + 1] = k;
      if (k > best.size) best = {i + 1 - k, j + 1 - k, k};
    }
    std::swap(prev, cur);
  }
  return best;
}

std::size_t matched_characters(const std::u32string& a,
                               const std::u32string& b) {
  std::size_t total = 0;
  std::vector<std::array<std::size_t, 4>> pending{{0, a.size(), 0, b.size()}};
  while (!pending.empty()) {
    auto [alo, ahi, blo, bhi] = pending.back();
    pending.pop_back();
    if (alo >= ahi || blo >= bhi) continue;
    Block m = longest_match(a, b, alo, ahi, blo, bhi);
    if (m.size == 0) continue;
    total += m.size;
    pending.push_back({alo, m.a, blo, m.b});
    pending.push_back({m.a + m.size, ahi, m.b + m.size, bhi});
  }
  return total;
}

std::set<std::string> tokens(std::string_view s) {
  std::set<std::string> out;
  std::istringstream in{std::string(s)};
  std::string word;
  while (in >> word) out.insert(word);
  return out;
}

}  // namespace

std::string normalize_label(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (char c : text) {
    auto u = static_cast<unsigned char>(c);
    if (std::isspace(u)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(static_cast<char>(std::tolower(u)));
  }
  return out;
}

double char_similarity(std::string_view a, std::string_view b) {
  std::u32string ua = decode_utf8(a);
  std::u32string ub = decode_utf8(b);
  std::size_t length = ua.size() + ub.size();
  if (length == 0) return 1.0;
  // The block search is order-sensitive, so score both directions.
  std::size_t matched =
      std::max(matched_characters(ua, ub), matched_characters(ub, ua));
  return 2.0 * static_cast<double>(matched) / static_cast<double>(length);
}

double token_jaccard(std::string_view a, std::string_view b) {
  std::set<std::string> ta = tokens(a);
  std::set<std::string> tb = tokens(b);
  if (ta.empty() && tb.empty()) return 1.0;
  std::size_t shared = 0;
  for (const auto& t : ta) shared += tb.count(t);
  return static_cast<double>(shared) /
         static_cast<double>(ta.size() + tb.size() - shared);
}

double label_similarity(std::string_view a, std::string_view b) {
  std::string na = normalize_label(a);
  std::string nb = normalize_label(b);
  if (na == nb) return 1.0;
  return std::max(char_similarity(na, nb), token_jaccard(na, nb));
}

}  // namespace archeval
