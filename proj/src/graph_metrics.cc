#include "archeval/graph_metrics.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

namespace archeval {

namespace {

constexpr std::size_t kUnmatched = std::numeric_limits<std::size_t>::max();

using EdgeSet = std::set<std::pair<std::size_t, std::size_t>>;

EdgeSet edge_set(const DotGraph& g) {
  auto indices = g.edge_indices();
  return EdgeSet(indices.begin(), indices.end());
}

double harmonic_mean(double p, double r) {
  return p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0;
}

void validate_grid(const std::vector<double>& taus) {
  if (taus.empty()) throw std::invalid_argument("empty tau grid");
  for (std::size_t i = 0; i < taus.size(); ++i) {
    if (!(taus[i] >= 0.0 && taus[i] <= 1.0)) {
      throw std::invalid_argument("tau grid values must lie in [0,1]");
    }
    if (i > 0 && !(taus[i] > taus[i - 1])) {
      throw std::invalid_argument("tau grid must be strictly increasing");
    }
  }
}

EdgeCounts count_edges(const EdgeSet& gt_edges, const EdgeSet& pred_edges,
                       std::size_t n_gt, std::size_t n_pred,
                       const MatchResult& match,
                       bool count_unmatched_pred_edges) {
  std::vector<std::size_t> gt_to_pred(n_gt, kUnmatched);
  std::vector<std::size_t> pred_to_gt(n_pred, kUnmatched);
  for (const MatchedPair& p : match.pairs) {
    gt_to_pred[p.gt] = p.pred;
    pred_to_gt[p.pred] = p.gt;
  }
  EdgeCounts counts;
  for (auto [u, v] : gt_edges) {
    std::size_t pu = gt_to_pred[u];
    std::size_t pv = gt_to_pred[v];
    if (pu == kUnmatched || pv == kUnmatched) continue;
    if (pred_edges.count({pu, pv})) {
      ++counts.tp;
    } else {
      ++counts.fn;
    }
  }
  for (auto [u, v] : pred_edges) {
    std::size_t gu = pred_to_gt[u];
    std::size_t gv = pred_to_gt[v];
    if (gu == kUnmatched || gv == kUnmatched) {
      if (count_unmatched_pred_edges) ++counts.fp;
      continue;
    }
    if (!gt_edges.count({gu, gv})) ++counts.fp;
  }
  return counts;
}

// Shared state for one graph pair: the assignment is computed once and
// re-filtered for every threshold.
struct PairContext {
  PairContext(const DotGraph& gt, const DotGraph& pred)
      : n_gt(gt.node_count()),
        n_pred(pred.node_count()),
        gt_edges(edge_set(gt)),
        pred_edges(edge_set(pred)),
        assignment(optimal_assignment(similarity_matrix(gt, pred))) {}

  std::size_t n_gt;
  std::size_t n_pred;
  EdgeSet gt_edges;
  EdgeSet pred_edges;
  std::vector<MatchedPair> assignment;

  MatchResult at(double tau) const {
    return filter_by_threshold(assignment, tau, n_gt, n_pred);
  }

  EdgeScores edges_at(const MatchResult& match, bool unmatched_fp) const {
    return edge_scores(count_edges(gt_edges, pred_edges, n_gt, n_pred, match,
                                   unmatched_fp),
                       !gt_edges.empty(), !pred_edges.empty());
  }

  PRCurve curve(const std::vector<double>& taus, CurveKind kind,
                const MetricConfig& config) const {
    validate_grid(taus);
    PRCurve out;
    out.points.reserve(taus.size());
    for (double tau : taus) {
      MatchResult match = at(tau);
      if (kind == CurveKind::kNode) {
        NodeScores s = node_scores(match);
        out.points.push_back({tau, s.precision, s.recall});
      } else {
        EdgeScores s = edges_at(match, config.count_unmatched_pred_edges);
        out.points.push_back({tau, s.precision, s.recall});
      }
    }
    out.auc = pr_auc(out.points, config.auc_order);
    return out;
  }
};

}  // namespace

std::vector<double> default_tau_grid() { return make_tau_grid(0.0, 1.0, 0.05); }

std::vector<double> make_tau_grid(double start, double stop, double step) {
  if (!(step > 0.0) || !(start >= 0.0) || !(stop <= 1.0) || stop < start) {
    throw std::invalid_argument("tau grid must satisfy 0 <= start <= stop <= 1 "
                                "and step > 0");
  }
  std::vector<double> grid;
  for (std::size_t k = 0;; ++k) {
    double tau = start + static_cast<double>(k) * step;
    if (tau > stop + 1e-9) break;
    // Snap to a clean decimal so that 0.05*3 prints as 0.15.
    tau = std::round(tau * 1e9) / 1e9;
    grid.push_back(std::min(tau, 1.0));
  }
  validate_grid(grid);
  return grid;
}

NodeScores node_scores(const MatchResult& match) {
  if (match.n_gt == 0 && match.n_pred == 0) return {1.0, 1.0, 1.0};
  double total = match.similarity_sum();
  NodeScores s;
  s.precision = match.n_pred > 0 ? total / static_cast<double>(match.n_pred) : 0.0;
  s.recall = match.n_gt > 0 ? total / static_cast<double>(match.n_gt) : 0.0;
  s.f1 = harmonic_mean(s.precision, s.recall);
  return s;
}

EdgeCounts edge_counts(const DotGraph& gt, const DotGraph& pred,
                       const MatchResult& match,
                       bool count_unmatched_pred_edges) {
  return count_edges(edge_set(gt), edge_set(pred), gt.node_count(),
                     pred.node_count(), match, count_unmatched_pred_edges);
}

EdgeScores edge_scores(const EdgeCounts& counts, bool gt_has_edges,
                       bool pred_has_edges) {
  const double undefined = (!gt_has_edges && !pred_has_edges) ? 1.0 : 0.0;
  auto ratio = [undefined](std::size_t num, std::size_t den) {
    return den == 0 ? undefined
                    : static_cast<double>(num) / static_cast<double>(den);
  };
  EdgeScores s;
  s.precision = ratio(counts.tp, counts.tp + counts.fp);
  s.recall = ratio(counts.tp, counts.tp + counts.fn);
  s.f1 = harmonic_mean(s.precision, s.recall);
  s.jaccard = ratio(counts.tp, counts.tp + counts.fp + counts.fn);
  return s;
}

double pr_auc(std::vector<CurvePoint> points, AucOrder order) {
  if (points.empty()) return 0.0;
  if (order == AucOrder::kByRecall) {
    std::sort(points.begin(), points.end(),
              [](const CurvePoint& a, const CurvePoint& b) {
                if (a.recall != b.recall) return a.recall < b.recall;
                return a.precision < b.precision;
              });
  } else {
    std::sort(points.begin(), points.end(),
              [](const CurvePoint& a, const CurvePoint& b) {
                return a.tau > b.tau;
              });
  }
  double area = points.front().recall * points.front().precision;
  for (std::size_t k = 1; k < points.size(); ++k) {
    double width = std::abs(points[k].recall - points[k - 1].recall);
    area += width * (points[k].precision + points[k - 1].precision) / 2.0;
  }
  area += (1.0 - points.back().recall) * points.back().precision;
  return std::clamp(area, 0.0, 1.0);
}

PRCurve pr_curve(const DotGraph& gt, const DotGraph& pred,
                 const std::vector<double>& taus, CurveKind kind,
                 const MetricConfig& config) {
  validate_grid(taus);
  return PairContext(gt, pred).curve(taus, kind, config);
}

PairEvaluation evaluate_pair_detailed(const DotGraph& gt,
                                      const DotGraph& pred,
                                      const MetricConfig& config) {
  const std::vector<double> grid =
      config.tau_grid.empty() ? default_tau_grid() : config.tau_grid;
  validate_grid(grid);
  PairContext ctx(gt, pred);
  MatchResult match = ctx.at(config.tau);

  PairEvaluation out;
  out.n_gt = ctx.n_gt;
  out.n_pred = ctx.n_pred;
  out.similarity_sum = match.similarity_sum();
  out.gt_has_edges = !ctx.gt_edges.empty();
  out.pred_has_edges = !ctx.pred_edges.empty();
  out.edges = count_edges(ctx.gt_edges, ctx.pred_edges, ctx.n_gt, ctx.n_pred,
                          match, config.count_unmatched_pred_edges);
  EdgeScores edges =
      edge_scores(out.edges, out.gt_has_edges, out.pred_has_edges);

  MetricReport& r = out.report;
  r.tau = config.tau;
  r.node = node_scores(match);
  r.edge_precision = edges.precision;
  r.edge_recall = edges.recall;
  r.edge_f1 = edges.f1;
  r.jaccard = edges.jaccard;
  out.node_curve = ctx.curve(grid, CurveKind::kNode, config);
  out.edge_curve = ctx.curve(grid, CurveKind::kEdge, config);
  r.node_pr_auc = out.node_curve.auc;
  r.edge_pr_auc = out.edge_curve.auc;
  return out;
}

MetricReport evaluate_pair(const DotGraph& gt, const DotGraph& pred,
                           const MetricConfig& config) {
  return evaluate_pair_detailed(gt, pred, config).report;
}

}  // namespace archeval
