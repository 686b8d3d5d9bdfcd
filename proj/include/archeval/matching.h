// Optimal one-to-one alignment of ground-truth and predicted nodes.

#pragma once

#include <cstddef>
#include <vector>

#include "archeval/dot.h"

namespace archeval {

inline constexpr double kDefaultTau = 0.5;

class SimilarityMatrix {
 public:
  SimilarityMatrix() = default;
  // Throws std::invalid_argument if any value lies outside [0,1] or the
  // value count does not equal rows*cols.
  SimilarityMatrix(std::size_t rows, std::size_t cols,
                   std::vector<double> values);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double at(std::size_t row, std::size_t col) const {
    return values_[row * cols_ + col];
  }
  const std::vector<double>& values() const { return values_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
};

struct MatchedPair {
  std::size_t gt = 0;
  std::size_t pred = 0;
  double sim = 0.0;

  bool operator==(const MatchedPair&) const = default;
};

struct MatchResult {
  std::vector<MatchedPair> pairs;
  double tau = kDefaultTau;
  std::size_t n_gt = 0;
  std::size_t n_pred = 0;

  double similarity_sum() const;
};

// Entry (i, j) is label_similarity(gt.nodes[i].label, pred.nodes[j].label).
SimilarityMatrix similarity_matrix(const DotGraph& gt, const DotGraph& pred);

// Maximum-total-similarity assignment of min(rows, cols) pairs, ordered by
// ground-truth index. Among equally good assignments the lexicographically
// smallest (gt, pred) pair sequence is returned.
std::vector<MatchedPair> optimal_assignment(const SimilarityMatrix& matrix);

// Keeps pairs with sim >= tau. Throws std::invalid_argument unless
// 0 <= tau <= 1.
MatchResult filter_by_threshold(const std::vector<MatchedPair>& assignment,
                                double tau, std::size_t n_gt,
                                std::size_t n_pred);

}  // namespace archeval
