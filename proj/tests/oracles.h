// Brute-force reference implementations used only by tests. Each one is
// written independently of the library code path it checks.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace oracle {

// Maximum total similarity over every injective assignment of the smaller
// side into the larger one.
inline double exhaustive_best_total(const std::vector<std::vector<double>>& m) {
  std::size_t rows = m.size();
  std::size_t cols = rows ? m[0].size() : 0;
  if (rows == 0 || cols == 0) return 0.0;
  bool transpose = rows > cols;
  std::size_t small = transpose ? cols : rows;
  std::size_t large = transpose ? rows : cols;
  std::vector<std::size_t> perm(large);
  std::iota(perm.begin(), perm.end(), 0);
  double best = -1.0;
  do {
    double total = 0.0;
    for (std::size_t i = 0; i < small; ++i) {
      total += transpose ? m[perm[i]][i] : m[i][perm[i]];
    }
    best = std::max(best, total);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

// Matching-blocks total by scanning every (i, j, k) triple for the longest
// block, with earliest-in-a then earliest-in-b preference, recursively.
inline std::size_t matching_blocks(const std::u32string& a,
                                   const std::u32string& b) {
  if (a.empty() || b.empty()) return 0;
  std::size_t bi = 0, bj = 0, bk = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      std::size_t k = 0;
      while (i + k < a.size() && j + k < b.size() && a[i + k] == b[j + k]) ++k;
      if (k > bk) {
        bi = i;
        bj = j;
        bk = k;
      }
    }
  }
  if (bk == 0) return 0;
  return bk + matching_blocks(a.substr(0, bi), b.substr(0, bj)) +
         matching_blocks(a.substr(bi + bk), b.substr(bj + bk));
}

inline double ratcliff_obershelp(const std::string& a, const std::string& b) {
  std::u32string ua(a.begin(), a.end());
  std::u32string ub(b.begin(), b.end());
  if (ua.empty() && ub.empty()) return 1.0;
  return 2.0 * static_cast<double>(matching_blocks(ua, ub)) /
         static_cast<double>(ua.size() + ub.size());
}

inline double word_set_jaccard(const std::string& a, const std::string& b) {
  auto split = [](const std::string& s) {
    std::set<std::string> out;
    std::string cur;
    for (char c : s) {
      if (c == ' ') {
        if (!cur.empty()) out.insert(cur);
        cur.clear();
      } else {
        cur.push_back(c);
      }
    }
    if (!cur.empty()) out.insert(cur);
    return out;
  };
  auto sa = split(a), sb = split(b);
  if (sa.empty() && sb.empty()) return 1.0;
  std::set<std::string> uni = sa, inter;
  uni.insert(sb.begin(), sb.end());
  for (const auto& t : sa) {
    if (sb.count(t)) inter.insert(t);
  }
  return static_cast<double>(inter.size()) / static_cast<double>(uni.size());
}

// Full (m+1)x(n+1) Levenshtein table over bytes.
inline std::size_t levenshtein_table(const std::string& a,
                                     const std::string& b) {
  std::vector<std::vector<std::size_t>> d(a.size() + 1,
                                          std::vector<std::size_t>(b.size() + 1));
  for (std::size_t i = 0; i <= a.size(); ++i) d[i][0] = i;
  for (std::size_t j = 0; j <= b.size(); ++j) d[0][j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1,
                          d[i - 1][j - 1] + (a[i - 1] == b[j - 1] ? 0u : 1u)});
    }
  }
  return d[a.size()][b.size()];
}

// LCS length via the full table.
template <typename T>
std::size_t lcs_table(const std::vector<T>& a, const std::vector<T>& b) {
  std::vector<std::vector<std::size_t>> d(a.size() + 1,
                                          std::vector<std::size_t>(b.size() + 1));
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      d[i][j] = a[i - 1] == b[j - 1] ? d[i - 1][j - 1] + 1
                                     : std::max(d[i - 1][j], d[i][j - 1]);
    }
  }
  return d[a.size()][b.size()];
}

inline double rouge_from_lcs(std::size_t lcs, std::size_t m, std::size_t n,
                             double beta) {
  if (m == 0 && n == 0) return 1.0;
  if (lcs == 0) return 0.0;
  double r = static_cast<double>(lcs) / n;
  double p = static_cast<double>(lcs) / m;
  return (1 + beta * beta) * r * p / (r + beta * beta * p);
}

// chrF over single-byte text: counts every substring of length n by direct
// enumeration into a map. Whitespace runs are collapsed first.
inline double chrf_counting(std::string pred, std::string ref, int max_n,
                            double beta) {
  auto collapse = [](const std::string& s) {
    std::string out;
    bool space = false;
    for (char c : s) {
      bool ws = c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
                c == '\v';
      if (ws) {
        if (!space) out.push_back(' ');
      } else {
        out.push_back(c);
      }
      space = ws;
    }
    return out;
  };
  pred = collapse(pred);
  ref = collapse(ref);
  double sum = 0.0;
  int used = 0;
  for (int n = 1; n <= max_n; ++n) {
    std::map<std::string, int> pc, rc;
    int pt = 0, rt = 0;
    for (int i = 0; i + n <= static_cast<int>(pred.size()); ++i) {
      ++pc[pred.substr(i, n)];
      ++pt;
    }
    for (int i = 0; i + n <= static_cast<int>(ref.size()); ++i) {
      ++rc[ref.substr(i, n)];
      ++rt;
    }
    if (pt == 0 && rt == 0) continue;
    int match = 0;
    for (auto& [g, c] : pc) match += std::min(c, rc[g]);
    double p = pt ? static_cast<double>(match) / pt : 0.0;
    double r = rt ? static_cast<double>(match) / rt : 0.0;
    double b2 = beta * beta;
    sum += (p + r) > 0 ? (1 + b2) * p * r / (b2 * p + r) : 0.0;
    ++used;
  }
  return used ? sum / used : 1.0;
}

// Area under (recall, precision) points sorted by recall, padded with
// constant precision out to recall 0 and recall 1.
inline double trapezoid_auc(std::vector<std::pair<double, double>> rp) {
  if (rp.empty()) return 0.0;
  std::sort(rp.begin(), rp.end());
  std::vector<std::pair<double, double>> padded;
  padded.emplace_back(0.0, rp.front().second);
  padded.insert(padded.end(), rp.begin(), rp.end());
  padded.emplace_back(1.0, rp.back().second);
  double area = 0.0;
  for (std::size_t k = 1; k < padded.size(); ++k) {
    area += (padded[k].first - padded[k - 1].first) *
            (padded[k].second + padded[k - 1].second) / 2.0;
  }
  return area;
}

struct EdgeOracleCounts {
  std::size_t tp = 0, fp = 0, fn = 0;
};

// Matched-subgraph edge sets compared by set operations: gt edges among
// matched gt nodes are mapped into pred index space and intersected with
// pred edges among matched pred nodes.
inline EdgeOracleCounts edge_set_oracle(
    const std::set<std::pair<std::size_t, std::size_t>>& gt_edges,
    const std::set<std::pair<std::size_t, std::size_t>>& pred_edges,
    const std::map<std::size_t, std::size_t>& gt_to_pred) {
  std::set<std::size_t> matched_pred;
  for (auto& [g, p] : gt_to_pred) matched_pred.insert(p);
  std::set<std::pair<std::size_t, std::size_t>> adj_gt, adj_pred;
  for (auto [u, v] : gt_edges) {
    if (gt_to_pred.count(u) && gt_to_pred.count(v)) {
      adj_gt.emplace(gt_to_pred.at(u), gt_to_pred.at(v));
    }
  }
  for (auto [u, v] : pred_edges) {
    if (matched_pred.count(u) && matched_pred.count(v)) adj_pred.emplace(u, v);
  }
  EdgeOracleCounts c;
  for (auto& e : adj_gt) {
    if (adj_pred.count(e)) {
      ++c.tp;
    } else {
      ++c.fn;
    }
  }
  for (auto& e : adj_pred) {
    if (!adj_gt.count(e)) ++c.fp;
  }
  return c;
}

// Plain TF-IDF cosine: tf * ln(N/df) over candidates plus query, ranked by
// score descending with index as tiebreak.
inline std::vector<std::size_t> tfidf_order(
    const std::vector<std::vector<std::string>>& candidate_tokens,
    const std::vector<std::string>& query_tokens, std::vector<double>* scores) {
  std::vector<std::vector<std::string>> docs = candidate_tokens;
  docs.push_back(query_tokens);
  std::map<std::string, int> df;
  for (auto& d : docs) {
    std::set<std::string> uniq(d.begin(), d.end());
    for (auto& t : uniq) ++df[t];
  }
  double n = static_cast<double>(docs.size());
  auto vec = [&](const std::vector<std::string>& d) {
    std::map<std::string, double> v;
    for (auto& t : d) v[t] += 1.0;
    for (auto& [t, w] : v) w *= std::log(n / df[t]);
    return v;
  };
  auto q = vec(query_tokens);
  double qn = 0;
  for (auto& [t, w] : q) qn += w * w;
  qn = std::sqrt(qn);
  std::vector<double> s(candidate_tokens.size());
  for (std::size_t i = 0; i < candidate_tokens.size(); ++i) {
    auto c = vec(candidate_tokens[i]);
    double cn = 0, dot = 0;
    for (auto& [t, w] : c) {
      cn += w * w;
      auto it = q.find(t);
      if (it != q.end()) dot += w * it->second;
    }
    cn = std::sqrt(cn);
    s[i] = (cn > 0 && qn > 0) ? dot / (cn * qn) : 0.0;
  }
  std::vector<std::size_t> order(s.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return s[a] > s[b]; });
  if (scores) *scores = s;
  return order;
}

}  // namespace oracle
