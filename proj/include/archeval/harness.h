// Corpus-level evaluation: JSON-lines loading, per-record scoring,
// complexity bucketing, aggregation and report output.

#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "archeval/dot.h"
#include "archeval/graph_metrics.h"
#include "archeval/text_metrics.h"

namespace archeval {

struct CorpusRecord {
  std::string id;
  std::optional<std::string> description;
  std::string dot_gt;
  std::string dot_pred;
  std::optional<ComplexityBucket> bucket;
};

// Malformed input: bad JSON, missing fields, duplicate ids, unreadable file.
class CorpusError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RejectedRecord {
  std::size_t line = 0;
  std::string id;
  std::string reason;
};

struct LoadResult {
  std::vector<CorpusRecord> records;
  std::vector<RejectedRecord> rejected;  // ground truth failed to parse
};

// One JSON object per line. Field names are mapped through an alias table
// (e.g. "gt"/"reference" -> dot_gt, "prediction"/"generated" -> dot_pred);
// integer ids are stringified. Blank lines are skipped. A missing bucket is
// derived from the ground-truth node count.
LoadResult load_corpus_text(std::string_view jsonl);
LoadResult load_corpus(const std::string& path);

enum class Aggregation { kMacro, kMicro };

struct EvalConfig {
  MetricConfig metric;
  TextMetricConfig text;
  std::size_t workers = 1;
  Aggregation aggregation = Aggregation::kMacro;
  // Average only over records whose prediction parsed.
  bool compiled_only = false;
  bool keep_curves = false;
};

struct RecordCounts {
  double similarity_sum = 0.0;
  std::size_t n_gt = 0;
  std::size_t n_pred = 0;
  EdgeCounts edges;
  bool gt_has_edges = false;
  bool pred_has_edges = false;

  bool operator==(const RecordCounts&) const = default;
};

struct RecordResult {
  std::string id;
  ComplexityBucket bucket = ComplexityBucket::kEasy;
  bool compiled = false;
  std::optional<ParseErrorKind> error_kind;
  MetricReport graph;
  TextMetricReport text;
  RecordCounts counts;
  PRCurve node_curve;  // filled only with EvalConfig::keep_curves
  PRCurve edge_curve;

  bool operator==(const RecordResult&) const = default;
};

// Field-wise means (or pooled ratios for micro aggregation).
struct MetricSummary {
  std::size_t count = 0;
  double rouge_l = 0.0;
  double code_bleu = 0.0;
  double edit_distance = 0.0;
  double chrf = 0.0;
  double node_precision = 0.0;
  double node_recall = 0.0;
  double node_f1 = 0.0;
  double node_pr_auc = 0.0;
  double edge_precision = 0.0;
  double edge_recall = 0.0;
  double edge_f1 = 0.0;
  double edge_pr_auc = 0.0;
  double jaccard = 0.0;

  bool operator==(const MetricSummary&) const = default;
};

struct AggregateReport {
  std::vector<RecordResult> per_record;  // sorted by id
  MetricSummary macro;
  std::map<ComplexityBucket, MetricSummary> per_bucket;
  double compile_rate = 0.0;
  Aggregation aggregation = Aggregation::kMacro;
  bool compiled_only = false;
  double tau = kDefaultTau;

  bool operator==(const AggregateReport&) const = default;
};

RecordResult evaluate_record(const CorpusRecord& record,
                             const EvalConfig& config);

// Throws std::invalid_argument on an empty corpus or an unparseable ground
// truth. Output is independent of the worker count.
AggregateReport evaluate_corpus(const std::vector<CorpusRecord>& records,
                                const EvalConfig& config = {});

enum class ReportFormat { kJson, kCsv };

std::string report_to_json(const AggregateReport& report);
AggregateReport report_from_json(std::string_view json_text);
std::string report_to_csv(const AggregateReport& report);
// Rows of id,kind,tau,precision,recall.
std::string curves_to_csv(const AggregateReport& report);

// Writes the report; with `write_curves` the curve rows go to
// "<path>.curves.csv". Throws std::runtime_error if a file cannot be
// written.
void write_report(const AggregateReport& report, ReportFormat format,
                  const std::string& path, bool write_curves = false);

// Flat snake_case object named after the result-table columns.
std::string metric_columns_json(const MetricReport& graph,
                                const TextMetricReport& text, int indent = 2);

}  // namespace archeval
