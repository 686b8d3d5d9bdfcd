#include "archeval/harness.h"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <fstream>
#include <sstream>
#include <thread>
#include <unordered_set>

#include "json.hpp"

namespace archeval {

namespace {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

// External corpus schemas map onto CorpusRecord through these aliases,
// checked in order.
constexpr std::string_view kIdKeys[] = {"id", "image_id", "uid", "name"};
constexpr std::string_view kDescriptionKeys[] = {"description", "desc",
                                                 "caption"};
constexpr std::string_view kGtKeys[] = {"dot_gt", "gt", "ground_truth",
                                        "reference", "target", "dot_code"};
constexpr std::string_view kPredKeys[] = {"dot_pred", "pred", "prediction",
                                          "generated", "output"};
constexpr std::string_view kBucketKeys[] = {"bucket", "complexity"};

template <std::size_t N>
const json* find_field(const json& obj, const std::string_view (&keys)[N]) {
  for (std::string_view k : keys) {
    auto it = obj.find(std::string(k));
    if (it != obj.end() && !it->is_null()) return &*it;
  }
  return nullptr;
}

std::string line_prefix(std::size_t line) {
  return "line " + std::to_string(line) + ": ";
}

std::string format_double(double x) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, end);
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) {
    return std::string(s);
  }
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

double safe_ratio(double num, double den, double undefined) {
  return den > 0.0 ? num / den : undefined;
}

MetricSummary summarize(const std::vector<const RecordResult*>& rows,
                        Aggregation aggregation) {
  MetricSummary s;
  s.count = rows.size();
  if (rows.empty()) return s;
  for (const RecordResult* r : rows) {
    s.rouge_l += r->text.rouge_l;
    s.code_bleu += r->text.code_bleu;
    s.edit_distance += static_cast<double>(r->text.edit_distance);
    s.chrf += r->text.chrf;
    s.node_precision += r->graph.node.precision;
    s.node_recall += r->graph.node.recall;
    s.node_f1 += r->graph.node.f1;
    s.node_pr_auc += r->graph.node_pr_auc;
    s.edge_precision += r->graph.edge_precision;
    s.edge_recall += r->graph.edge_recall;
    s.edge_f1 += r->graph.edge_f1;
    s.edge_pr_auc += r->graph.edge_pr_auc;
    s.jaccard += r->graph.jaccard;
  }
  const double n = static_cast<double>(rows.size());
  for (double* field :
       {&s.rouge_l, &s.code_bleu, &s.edit_distance, &s.chrf, &s.node_precision,
        &s.node_recall, &s.node_f1, &s.node_pr_auc, &s.edge_precision,
        &s.edge_recall, &s.edge_f1, &s.edge_pr_auc, &s.jaccard}) {
    *field /= n;
  }
  if (aggregation == Aggregation::kMicro) {
    // Pool similarity sums and edge counts; text metrics and AUCs stay
    // per-record means.
    double sim = 0.0, n_gt = 0.0, n_pred = 0.0;
    EdgeCounts edges;
    bool gt_edges = false, pred_edges = false;
    for (const RecordResult* r : rows) {
      sim += r->counts.similarity_sum;
      n_gt += static_cast<double>(r->counts.n_gt);
      n_pred += static_cast<double>(r->counts.n_pred);
      edges.tp += r->counts.edges.tp;
      edges.fp += r->counts.edges.fp;
      edges.fn += r->counts.edges.fn;
      gt_edges = gt_edges || r->counts.gt_has_edges;
      pred_edges = pred_edges || r->counts.pred_has_edges;
    }
    const double trivial = (n_gt == 0.0 && n_pred == 0.0) ? 1.0 : 0.0;
    s.node_precision = safe_ratio(sim, n_pred, trivial);
    s.node_recall = safe_ratio(sim, n_gt, trivial);
    s.node_f1 = s.node_precision + s.node_recall > 0.0
                    ? 2.0 * s.node_precision * s.node_recall /
                          (s.node_precision + s.node_recall)
                    : 0.0;
    EdgeScores e = edge_scores(edges, gt_edges, pred_edges);
    s.edge_precision = e.precision;
    s.edge_recall = e.recall;
    s.edge_f1 = e.f1;
    s.jaccard = e.jaccard;
  }
  return s;
}

ordered_json summary_json(const MetricSummary& s) {
  ordered_json j;
  j["count"] = s.count;
  j["rouge_l"] = s.rouge_l;
  j["code_bleu"] = s.code_bleu;
  j["edit_distance"] = s.edit_distance;
  j["chrf"] = s.chrf;
  j["node_prec"] = s.node_precision;
  j["node_recall"] = s.node_recall;
  j["node_f1"] = s.node_f1;
  j["node_pr_auc"] = s.node_pr_auc;
  j["edge_prec"] = s.edge_precision;
  j["edge_recall"] = s.edge_recall;
  j["edge_f1"] = s.edge_f1;
  j["edge_pr_auc"] = s.edge_pr_auc;
  j["jaccard_sim"] = s.jaccard;
  return j;
}

MetricSummary summary_from_json(const json& j) {
  MetricSummary s;
  s.count = j.at("count").get<std::size_t>();
  s.rouge_l = j.at("rouge_l").get<double>();
  s.code_bleu = j.at("code_bleu").get<double>();
  s.edit_distance = j.at("edit_distance").get<double>();
  s.chrf = j.at("chrf").get<double>();
  s.node_precision = j.at("node_prec").get<double>();
  s.node_recall = j.at("node_recall").get<double>();
  s.node_f1 = j.at("node_f1").get<double>();
  s.node_pr_auc = j.at("node_pr_auc").get<double>();
  s.edge_precision = j.at("edge_prec").get<double>();
  s.edge_recall = j.at("edge_recall").get<double>();
  s.edge_f1 = j.at("edge_f1").get<double>();
  s.edge_pr_auc = j.at("edge_pr_auc").get<double>();
  s.jaccard = j.at("jaccard_sim").get<double>();
  return s;
}

ordered_json columns_json(const MetricReport& g, const TextMetricReport& t) {
  ordered_json j;
  j["rouge_l"] = t.rouge_l;
  j["code_bleu"] = t.code_bleu;
  j["edit_distance"] = t.edit_distance;
  j["chrf"] = t.chrf;
  j["node_prec"] = g.node.precision;
  j["node_recall"] = g.node.recall;
  j["node_f1"] = g.node.f1;
  j["node_pr_auc"] = g.node_pr_auc;
  j["edge_prec"] = g.edge_precision;
  j["edge_recall"] = g.edge_recall;
  j["edge_f1"] = g.edge_f1;
  j["edge_pr_auc"] = g.edge_pr_auc;
  j["jaccard_sim"] = g.jaccard;
  j["tau"] = g.tau;
  return j;
}

ordered_json curve_json(const PRCurve& c) {
  ordered_json points = ordered_json::array();
  for (const CurvePoint& p : c.points) {
    points.push_back({p.tau, p.precision, p.recall});
  }
  return {{"auc", c.auc}, {"points", points}};
}

PRCurve curve_from_json(const json& j) {
  PRCurve c;
  c.auc = j.at("auc").get<double>();
  for (const json& p : j.at("points")) {
    c.points.push_back({p[0].get<double>(), p[1].get<double>(),
                        p[2].get<double>()});
  }
  return c;
}

ComplexityBucket parse_bucket(const json& j) {
  auto b = bucket_from_string(j.get<std::string>());
  if (!b) throw std::invalid_argument("unknown bucket " + j.dump());
  return *b;
}

}  // namespace

LoadResult load_corpus_text(std::string_view jsonl) {
  LoadResult out;
  std::unordered_set<std::string> ids;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < jsonl.size()) {
    std::size_t end = jsonl.find('\n', start);
    if (end == std::string_view::npos) end = jsonl.size();
    std::string_view line = jsonl.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;

    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error& e) {
      throw CorpusError(line_prefix(line_no) + "malformed JSON: " + e.what());
    }
    if (!obj.is_object()) {
      throw CorpusError(line_prefix(line_no) + "expected a JSON object");
    }
    CorpusRecord rec;
    const json* id = find_field(obj, kIdKeys);
    if (id == nullptr) throw CorpusError(line_prefix(line_no) + "missing id");
    if (id->is_string()) {
      rec.id = id->get<std::string>();
    } else if (id->is_number_integer()) {
      rec.id = std::to_string(id->get<long long>());
    } else {
      throw CorpusError(line_prefix(line_no) + "id must be a string or integer");
    }
    const json* gt = find_field(obj, kGtKeys);
    const json* pred = find_field(obj, kPredKeys);
    if (gt == nullptr || !gt->is_string()) {
      throw CorpusError(line_prefix(line_no) + "missing ground-truth DOT");
    }
    if (pred == nullptr || !pred->is_string()) {
      throw CorpusError(line_prefix(line_no) + "missing predicted DOT");
    }
    rec.dot_gt = gt->get<std::string>();
    rec.dot_pred = pred->get<std::string>();
    if (const json* d = find_field(obj, kDescriptionKeys);
        d != nullptr && d->is_string()) {
      rec.description = d->get<std::string>();
    }
    if (const json* b = find_field(obj, kBucketKeys); b != nullptr) {
      auto parsed = b->is_string() ? bucket_from_string(b->get<std::string>())
                                   : std::nullopt;
      if (!parsed) {
        throw CorpusError(line_prefix(line_no) + "unknown bucket " + b->dump());
      }
      rec.bucket = parsed;
    }
    if (!ids.insert(rec.id).second) {
      throw CorpusError(line_prefix(line_no) + "duplicate id '" + rec.id + "'");
    }
    try {
      DotGraph g = parse_dot(rec.dot_gt);
      if (!rec.bucket) rec.bucket = complexity_bucket(g);
    } catch (const ParseError& e) {
      out.rejected.push_back({line_no, rec.id,
                              std::string(to_string(e.kind())) + ": " + e.what()});
      continue;
    }
    out.records.push_back(std::move(rec));
  }
  return out;
}

LoadResult load_corpus(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CorpusError("cannot open corpus file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_corpus_text(buf.str());
}

RecordResult evaluate_record(const CorpusRecord& record,
                             const EvalConfig& config) {
  DotGraph gt;
  try {
    gt = parse_dot(record.dot_gt);
  } catch (const ParseError& e) {
    throw std::invalid_argument("record '" + record.id +
                                "': ground truth does not parse: " + e.what());
  }
  RecordResult out;
  out.id = record.id;
  out.bucket = record.bucket.value_or(complexity_bucket(gt));
  out.text = text_metrics(record.dot_pred, record.dot_gt, config.text);
  out.graph.tau = config.metric.tau;
  out.counts.n_gt = gt.node_count();
  out.counts.gt_has_edges = gt.edge_count() > 0;

  DotGraph pred;
  try {
    pred = parse_dot(record.dot_pred);
  } catch (const ParseError& e) {
    out.compiled = false;
    out.error_kind = e.kind();
    auto gt_edges = canonicalize(gt).edge_count();
    out.counts.edges.fn = gt_edges;
    return out;
  }
  out.compiled = true;
  PairEvaluation eval = evaluate_pair_detailed(gt, pred, config.metric);
  out.graph = eval.report;
  out.counts = {eval.similarity_sum, eval.n_gt,        eval.n_pred,
                eval.edges,          eval.gt_has_edges, eval.pred_has_edges};
  if (config.keep_curves) {
    out.node_curve = std::move(eval.node_curve);
    out.edge_curve = std::move(eval.edge_curve);
  }
  return out;
}

AggregateReport evaluate_corpus(const std::vector<CorpusRecord>& records,
                                const EvalConfig& config) {
  if (records.empty()) throw std::invalid_argument("empty corpus");
  config.text.validate();

  std::vector<RecordResult> results(records.size());
  const std::size_t workers =
      std::clamp<std::size_t>(config.workers, 1, records.size());
  if (workers == 1) {
    for (std::size_t i = 0; i < records.size(); ++i) {
      results[i] = evaluate_record(records[i], config);
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = next++; i < records.size(); i = next++) {
            results[i] = evaluate_record(records[i], config);
          }
        } catch (...) {
          errors[w] = std::current_exception();
          next = records.size();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }
  std::sort(results.begin(), results.end(),
            [](const RecordResult& a, const RecordResult& b) {
              return a.id < b.id;
            });

  AggregateReport report;
  report.aggregation = config.aggregation;
  report.compiled_only = config.compiled_only;
  report.tau = config.metric.tau;
  std::size_t compiled = 0;
  std::vector<const RecordResult*> included;
  std::map<ComplexityBucket, std::vector<const RecordResult*>> by_bucket;
  for (const RecordResult& r : results) {
    if (r.compiled) ++compiled;
    if (config.compiled_only && !r.compiled) continue;
    included.push_back(&r);
    by_bucket[r.bucket].push_back(&r);
  }
  report.compile_rate =
      static_cast<double>(compiled) / static_cast<double>(results.size());
  report.macro = summarize(included, config.aggregation);
  for (const auto& [bucket, rows] : by_bucket) {
    report.per_bucket[bucket] = summarize(rows, config.aggregation);
  }
  report.per_record = std::move(results);
  return report;
}

std::string report_to_json(const AggregateReport& report) {
  ordered_json j;
  j["aggregation"] =
      report.aggregation == Aggregation::kMacro ? "macro" : "micro";
  j["averaged_over"] = report.compiled_only ? "compiled" : "all";
  j["tau"] = report.tau;
  j["record_count"] = report.per_record.size();
  j["compile_rate"] = report.compile_rate;
  j["macro"] = summary_json(report.macro);
  ordered_json buckets = ordered_json::object();
  for (const auto& [bucket, summary] : report.per_bucket) {
    buckets[std::string(to_string(bucket))] = summary_json(summary);
  }
  j["per_bucket"] = buckets;
  ordered_json records = ordered_json::array();
  for (const RecordResult& r : report.per_record) {
    ordered_json rec;
    rec["id"] = r.id;
    rec["bucket"] = to_string(r.bucket);
    rec["compiled"] = r.compiled;
    rec["error_kind"] = r.error_kind ? ordered_json(to_string(*r.error_kind))
                                     : ordered_json(nullptr);
    rec["metrics"] = columns_json(r.graph, r.text);
    rec["counts"] = {{"similarity_sum", r.counts.similarity_sum},
                     {"n_gt", r.counts.n_gt},
                     {"n_pred", r.counts.n_pred},
                     {"tp", r.counts.edges.tp},
                     {"fp", r.counts.edges.fp},
                     {"fn", r.counts.edges.fn},
                     {"gt_has_edges", r.counts.gt_has_edges},
                     {"pred_has_edges", r.counts.pred_has_edges}};
    if (!r.node_curve.points.empty() || !r.edge_curve.points.empty()) {
      rec["node_curve"] = curve_json(r.node_curve);
      rec["edge_curve"] = curve_json(r.edge_curve);
    }
    records.push_back(std::move(rec));
  }
  j["records"] = records;
  return j.dump(2) + "\n";
}

AggregateReport report_from_json(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("malformed report: ") + e.what());
  }
  try {
    AggregateReport report;
    report.aggregation = j.at("aggregation").get<std::string>() == "micro"
                             ? Aggregation::kMicro
                             : Aggregation::kMacro;
    report.compiled_only = j.at("averaged_over").get<std::string>() == "compiled";
    report.tau = j.at("tau").get<double>();
    report.compile_rate = j.at("compile_rate").get<double>();
    report.macro = summary_from_json(j.at("macro"));
    for (const auto& [name, summary] : j.at("per_bucket").items()) {
      report.per_bucket[parse_bucket(json(name))] = summary_from_json(summary);
    }
    for (const json& rec : j.at("records")) {
      RecordResult r;
      r.id = rec.at("id").get<std::string>();
      r.bucket = parse_bucket(rec.at("bucket"));
      r.compiled = rec.at("compiled").get<bool>();
      if (!rec.at("error_kind").is_null()) {
        std::string kind = rec.at("error_kind").get<std::string>();
        for (auto k : {ParseErrorKind::kSyntax, ParseErrorKind::kTruncated,
                       ParseErrorKind::kEmpty, ParseErrorKind::kNotDigraph}) {
          if (to_string(k) == kind) r.error_kind = k;
        }
      }
      const json& m = rec.at("metrics");
      r.text.rouge_l = m.at("rouge_l").get<double>();
      r.text.code_bleu = m.at("code_bleu").get<double>();
      r.text.edit_distance = m.at("edit_distance").get<std::size_t>();
      r.text.chrf = m.at("chrf").get<double>();
      r.graph.node.precision = m.at("node_prec").get<double>();
      r.graph.node.recall = m.at("node_recall").get<double>();
      r.graph.node.f1 = m.at("node_f1").get<double>();
      r.graph.node_pr_auc = m.at("node_pr_auc").get<double>();
      r.graph.edge_precision = m.at("edge_prec").get<double>();
      r.graph.edge_recall = m.at("edge_recall").get<double>();
      r.graph.edge_f1 = m.at("edge_f1").get<double>();
      r.graph.edge_pr_auc = m.at("edge_pr_auc").get<double>();
      r.graph.jaccard = m.at("jaccard_sim").get<double>();
      r.graph.tau = m.at("tau").get<double>();
      const json& c = rec.at("counts");
      r.counts.similarity_sum = c.at("similarity_sum").get<double>();
      r.counts.n_gt = c.at("n_gt").get<std::size_t>();
      r.counts.n_pred = c.at("n_pred").get<std::size_t>();
      r.counts.edges = {c.at("tp").get<std::size_t>(),
                        c.at("fp").get<std::size_t>(),
                        c.at("fn").get<std::size_t>()};
      r.counts.gt_has_edges = c.at("gt_has_edges").get<bool>();
      r.counts.pred_has_edges = c.at("pred_has_edges").get<bool>();
      if (rec.contains("node_curve")) {
        r.node_curve = curve_from_json(rec["node_curve"]);
        r.edge_curve = curve_from_json(rec["edge_curve"]);
      }
      report.per_record.push_back(std::move(r));
    }
    return report;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("report schema mismatch: ") +
                                e.what());
  }
}

std::string report_to_csv(const AggregateReport& report) {
  std::ostringstream out;
  out << "id,bucket,compiled,rouge_l,code_bleu,edit_distance,chrf,node_prec,"
         "node_recall,node_f1,node_pr_auc,edge_prec,edge_recall,edge_f1,"
         "edge_pr_auc,jaccard_sim\n";
  for (const RecordResult& r : report.per_record) {
    const MetricReport& g = r.graph;
    out << csv_field(r.id) << ',' << to_string(r.bucket) << ','
        << (r.compiled ? 1 : 0) << ',' << format_double(r.text.rouge_l) << ','
        << format_double(r.text.code_bleu) << ',' << r.text.edit_distance
        << ',' << format_double(r.text.chrf) << ','
        << format_double(g.node.precision) << ','
        << format_double(g.node.recall) << ',' << format_double(g.node.f1)
        << ',' << format_double(g.node_pr_auc) << ','
        << format_double(g.edge_precision) << ','
        << format_double(g.edge_recall) << ',' << format_double(g.edge_f1)
        << ',' << format_double(g.edge_pr_auc) << ','
        << format_double(g.jaccard) << '\n';
  }
  const MetricSummary& m = report.macro;
  out << (report.aggregation == Aggregation::kMacro ? "macro" : "micro")
      << ",," << format_double(report.compile_rate) << ','
      << format_double(m.rouge_l) << ',' << format_double(m.code_bleu) << ','
      << format_double(m.edit_distance) << ',' << format_double(m.chrf) << ','
      << format_double(m.node_precision) << ',' << format_double(m.node_recall)
      << ',' << format_double(m.node_f1) << ','
      << format_double(m.node_pr_auc) << ','
      << format_double(m.edge_precision) << ','
      << format_double(m.edge_recall) << ',' << format_double(m.edge_f1) << ','
      << format_double(m.edge_pr_auc) << ',' << format_double(m.jaccard)
      << '\n';
  return out.str();
}

std::string curves_to_csv(const AggregateReport& report) {
  std::ostringstream out;
  out << "id,kind,tau,precision,recall\n";
  for (const RecordResult& r : report.per_record) {
    for (const auto& [kind, curve] :
         {std::pair{"node", &r.node_curve}, std::pair{"edge", &r.edge_curve}}) {
      for (const CurvePoint& p : curve->points) {
        out << csv_field(r.id) << ',' << kind << ',' << format_double(p.tau)
            << ',' << format_double(p.precision) << ','
            << format_double(p.recall) << '\n';
      }
    }
  }
  return out.str();
}

void write_report(const AggregateReport& report, ReportFormat format,
                  const std::string& path, bool write_curves) {
  auto write_file = [](const std::string& file, const std::string& body) {
    std::ofstream out(file, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + file);
    out << body;
    if (!out) throw std::runtime_error("write failed for " + file);
  };
  write_file(path, format == ReportFormat::kJson ? report_to_json(report)
                                                 : report_to_csv(report));
  if (write_curves) write_file(path + ".curves.csv", curves_to_csv(report));
}

std::string metric_columns_json(const MetricReport& graph,
                                const TextMetricReport& text, int indent) {
  return columns_json(graph, text).dump(indent);
}

}  // namespace archeval
