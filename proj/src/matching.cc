#include "archeval/matching.h"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "archeval/similarity.h"

namespace archeval {

namespace {

// Reduced costs at or below this are treated as tight.
constexpr double kTightEps = 1e-9;
constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

// Minimum-cost perfect assignment on a square matrix (shortest augmenting
// path form of the Hungarian method). Fills row->col assignment and the
// optimal dual potentials.
struct HungarianSolution {
  std::vector<std::size_t> row_to_col;
  std::vector<double> u;  // row potentials
  std::vector<double> v;  // column potentials
};

HungarianSolution solve_hungarian(const std::vector<double>& cost,
                                  std::size_t n) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  // 1-based with a virtual column 0.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(n + 1, kInf);
    std::vector<char> used(n + 1, false);
    do {
      used[j0] = true;
      std::size_t i0 = p[j0];
      std::size_t j1 = 0;
      double delta = kInf;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        double cur = cost[(i0 - 1) * n + (j - 1)] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  HungarianSolution out;
  out.row_to_col.assign(n, kNone);
  for (std::size_t j = 1; j <= n; ++j) {
    if (p[j] != 0) out.row_to_col[p[j] - 1] = j - 1;
  }
  out.u.assign(u.begin() + 1, u.end());
  out.v.assign(v.begin() + 1, v.end());
  return out;
}

// Walks the equality subgraph of an optimal dual solution and rewires the
// assignment into the lexicographically smallest optimal one. Any perfect
// matching on tight edges is optimal, so only feasibility is checked.
class LexicographicRefiner {
 public:
  LexicographicRefiner(const std::vector<double>& cost, std::size_t n,
                       const HungarianSolution& solution)
      : n_(n),
        tight_(n * n, false),
        row_to_col_(solution.row_to_col),
        col_to_row_(n, kNone),
        col_fixed_(n, false),
        visited_(n, false) {
    for (std::size_t i = 0; i < n; ++i) {
      col_to_row_[row_to_col_[i]] = i;
      for (std::size_t j = 0; j < n; ++j) {
        double reduced = cost[i * n + j] - solution.u[i] - solution.v[j];
        tight_[i * n + j] = reduced <= kTightEps;
      }
      tight_[i * n + row_to_col_[i]] = true;
    }
  }

  std::vector<std::size_t> run() {
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) {
        if (!tight_[i * n_ + j] || col_fixed_[j]) continue;
        if (row_to_col_[i] == j || reroute(i, j)) break;
      }
      col_fixed_[row_to_col_[i]] = true;
    }
    return row_to_col_;
  }

 private:
  bool reroute(std::size_t row, std::size_t col) {
    std::size_t displaced = col_to_row_[col];
    std::size_t freed = row_to_col_[row];
    std::fill(visited_.begin(), visited_.end(), false);
    visited_[col] = true;
    col_to_row_[freed] = kNone;
    if (augment(displaced)) {
      row_to_col_[row] = col;
      col_to_row_[col] = row;
      return true;
    }
    col_to_row_[freed] = row;
    return false;
  }

  bool augment(std::size_t row) {
    for (std::size_t x = 0; x < n_; ++x) {
      if (!tight_[row * n_ + x] || col_fixed_[x] || visited_[x]) continue;
      visited_[x] = true;
      if (col_to_row_[x] == kNone || augment(col_to_row_[x])) {
        col_to_row_[x] = row;
        row_to_col_[row] = x;
        return true;
      }
    }
    return false;
  }

  std::size_t n_;
  std::vector<bool> tight_;
  std::vector<std::size_t> row_to_col_;
  std::vector<std::size_t> col_to_row_;
  std::vector<bool> col_fixed_;
  std::vector<bool> visited_;
};

}  // namespace

SimilarityMatrix::SimilarityMatrix(std::size_t rows, std::size_t cols,
                                   std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  if (values_.size() != rows_ * cols_) {
    throw std::invalid_argument("similarity matrix size mismatch");
  }
  for (double x : values_) {
    if (!(x >= 0.0 && x <= 1.0)) {
      throw std::invalid_argument("similarity values must lie in [0,1]");
    }
  }
}

double MatchResult::similarity_sum() const {
  double total = 0.0;
  for (const MatchedPair& p : pairs) total += p.sim;
  return total;
}

SimilarityMatrix similarity_matrix(const DotGraph& gt, const DotGraph& pred) {
  std::vector<double> values;
  values.reserve(gt.node_count() * pred.node_count());
  for (const NodeDef& g : gt.nodes) {
    for (const NodeDef& p : pred.nodes) {
      values.push_back(label_similarity(g.label, p.label));
    }
  }
  return SimilarityMatrix(gt.node_count(), pred.node_count(),
                          std::move(values));
}

std::vector<MatchedPair> optimal_assignment(const SimilarityMatrix& matrix) {
  const std::size_t rows = matrix.rows();
  const std::size_t cols = matrix.cols();
  if (rows == 0 || cols == 0) return {};
  const std::size_t n = std::max(rows, cols);
  // Padding cells carry similarity 0, i.e. cost 1.
  std::vector<double> cost(n * n, 1.0);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      cost[i * n + j] = 1.0 - matrix.at(i, j);
    }
  }
  HungarianSolution solution = solve_hungarian(cost, n);
  std::vector<std::size_t> assignment =
      LexicographicRefiner(cost, n, solution).run();

  std::vector<MatchedPair> pairs;
  pairs.reserve(std::min(rows, cols));
  for (std::size_t i = 0; i < rows; ++i) {
    std::size_t j = assignment[i];
    if (j < cols) pairs.push_back({i, j, matrix.at(i, j)});
  }
  return pairs;
}

MatchResult filter_by_threshold(const std::vector<MatchedPair>& assignment,
                                double tau, std::size_t n_gt,
                                std::size_t n_pred) {
  if (!(tau >= 0.0 && tau <= 1.0)) {
    throw std::invalid_argument("tau must lie in [0,1]");
  }
  MatchResult out;
  out.tau = tau;
  out.n_gt = n_gt;
  out.n_pred = n_pred;
  for (const MatchedPair& p : assignment) {
    if (p.sim >= tau) out.pairs.push_back(p);
  }
  return out;
}

}  // namespace archeval
