// Node and edge metrics over a matched (ground truth, prediction) graph
// pair, plus precision-recall curves over similarity thresholds.

#pragma once

#include <cstddef>
#include <vector>

#include "archeval/dot.h"
#include "archeval/matching.h"

namespace archeval {

struct NodeScores {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;

  bool operator==(const NodeScores&) const = default;
};

struct EdgeCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;

  bool operator==(const EdgeCounts&) const = default;
};

struct EdgeScores {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double jaccard = 0.0;
};

enum class CurveKind { kNode, kEdge };

// How curve points are ordered before trapezoidal integration.
enum class AucOrder { kByRecall, kByThreshold };

struct CurvePoint {
  double tau = 0.0;
  double precision = 0.0;
  double recall = 0.0;

  bool operator==(const CurvePoint&) const = default;
};

struct PRCurve {
  std::vector<CurvePoint> points;
  double auc = 0.0;

  bool operator==(const PRCurve&) const = default;
};

struct MetricConfig {
  double tau = kDefaultTau;
  std::vector<double> tau_grid;  // empty means default_tau_grid()
  AucOrder auc_order = AucOrder::kByRecall;
  // Count every unmatched-to-gt predicted edge as a false positive, even
  // when an endpoint is unmatched.
  bool count_unmatched_pred_edges = false;
};

struct MetricReport {
  NodeScores node;
  double node_pr_auc = 0.0;
  double edge_precision = 0.0;
  double edge_recall = 0.0;
  double edge_f1 = 0.0;
  double edge_pr_auc = 0.0;
  double jaccard = 0.0;
  double tau = kDefaultTau;

  bool operator==(const MetricReport&) const = default;
};

// Everything computed on the way to a MetricReport; the raw sums feed
// micro-averaged corpus aggregation and curve export.
struct PairEvaluation {
  MetricReport report;
  double similarity_sum = 0.0;
  std::size_t n_gt = 0;
  std::size_t n_pred = 0;
  EdgeCounts edges;
  bool gt_has_edges = false;
  bool pred_has_edges = false;
  PRCurve node_curve;
  PRCurve edge_curve;
};

// {0.00, 0.05, ..., 1.00}
std::vector<double> default_tau_grid();

// Builds the grid start, start+step, ... up to and including stop (within
// 1e-9). Throws std::invalid_argument on an empty or out-of-range grid.
std::vector<double> make_tau_grid(double start, double stop, double step);

NodeScores node_scores(const MatchResult& match);

EdgeCounts edge_counts(const DotGraph& gt, const DotGraph& pred,
                       const MatchResult& match,
                       bool count_unmatched_pred_edges = false);

// `gt_has_edges`/`pred_has_edges` settle 0/0 ratios: two edgeless graphs
// agree perfectly, otherwise an undefined ratio scores 0.
EdgeScores edge_scores(const EdgeCounts& counts, bool gt_has_edges = true,
                       bool pred_has_edges = true);

// Trapezoid area under (recall, precision); precision is held constant
// from recall 0 up to the first point and from the last point up to 1.
double pr_auc(std::vector<CurvePoint> points, AucOrder order);

PRCurve pr_curve(const DotGraph& gt, const DotGraph& pred,
                 const std::vector<double>& taus, CurveKind kind,
                 const MetricConfig& config = {});

MetricReport evaluate_pair(const DotGraph& gt, const DotGraph& pred,
                           const MetricConfig& config = {});

PairEvaluation evaluate_pair_detailed(const DotGraph& gt,
                                      const DotGraph& pred,
                                      const MetricConfig& config = {});

}  // namespace archeval
