// archeval: command-line front end for DOT diagram evaluation.
//
// Exit codes: 0 success, 1 usage error, 2 input or parse error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "archeval/assembler.h"
#include "archeval/dot.h"
#include "archeval/graph_metrics.h"
#include "archeval/harness.h"
#include "archeval/retriever.h"
#include "archeval/text_metrics.h"

namespace {

using namespace archeval;

constexpr int kUsageError = 1;
constexpr int kInputError = 2;

// Input problems surface as this and map to exit code 2.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write " + path);
  out << body;
}

DotGraph parse_file(const std::string& path) {
  std::string text = read_file(path);
  try {
    return parse_dot(text);
  } catch (const ParseError& e) {
    std::ostringstream msg;
    msg << path << ':' << e.position().line << ':' << e.position().column
        << ": " << to_string(e.kind()) << " error: " << e.what();
    throw InputError(msg.str());
  }
}

std::vector<double> parse_grid(const std::string& spec) {
  double start = 0.0, stop = 0.0, step = 0.0;
  char c1 = 0, c2 = 0;
  std::istringstream in(spec);
  if (!(in >> start >> c1 >> stop >> c2 >> step) || c1 != ':' || c2 != ':' ||
      !in.eof()) {
    throw CLI::ValidationError("--tau-grid", "expected start:stop:step");
  }
  try {
    return make_tau_grid(start, stop, step);
  } catch (const std::invalid_argument& e) {
    throw CLI::ValidationError("--tau-grid", e.what());
  }
}

std::string curve_csv(const PRCurve& curve) {
  std::ostringstream out;
  out << "tau,precision,recall\n";
  out.precision(17);
  for (const CurvePoint& p : curve.points) {
    out << p.tau << ',' << p.precision << ',' << p.recall << '\n';
  }
  return out.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Evaluate generated architecture-diagram DOT code"};
  app.require_subcommand(1);

  std::string file;
  auto* parse_cmd = app.add_subcommand("parse", "Parse DOT and print it back");
  parse_cmd->add_option("file", file, "DOT file")->required();
  auto* canon_cmd = app.add_subcommand("canon", "Print the canonical form");
  canon_cmd->add_option("file", file, "DOT file")->required();
  auto* bucket_cmd = app.add_subcommand("bucket", "Print easy|medium|hard");
  bucket_cmd->add_option("file", file, "DOT file")->required();

  std::string gt_path, pred_path, grid_spec;
  double tau = kDefaultTau;
  bool as_json = false;
  auto* pair_cmd = app.add_subcommand("eval-pair", "Score one prediction");
  pair_cmd->add_option("--gt", gt_path, "Ground-truth DOT")->required();
  pair_cmd->add_option("--pred", pred_path, "Predicted DOT")->required();
  pair_cmd->add_option("--tau", tau, "Node-match threshold")
      ->check(CLI::Range(0.0, 1.0));
  pair_cmd->add_option("--tau-grid", grid_spec, "PR sweep as start:stop:step");
  pair_cmd->add_flag("--json", as_json, "Emit JSON");

  std::string input, out_path, format = "json";
  std::size_t workers = 1;
  bool micro = false, compiled_only = false, with_curves = false;
  auto* corpus_cmd = app.add_subcommand("eval-corpus", "Score a JSONL corpus");
  corpus_cmd->add_option("--input", input, "JSON-lines corpus")->required();
  corpus_cmd->add_option("--out", out_path, "Report path")->required();
  corpus_cmd->add_option("--format", format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  corpus_cmd->add_option("--tau", tau, "Node-match threshold")
      ->check(CLI::Range(0.0, 1.0));
  corpus_cmd->add_option("--tau-grid", grid_spec, "PR sweep as start:stop:step");
  corpus_cmd->add_option("--workers", workers, "Worker threads")
      ->check(CLI::PositiveNumber);
  corpus_cmd->add_flag("--micro", micro, "Pool counts instead of averaging");
  corpus_cmd->add_flag("--compiled-only", compiled_only,
                       "Average over parseable predictions only");
  corpus_cmd->add_flag("--pr-curves", with_curves,
                       "Also write <out>.curves.csv");

  std::string kind = "node";
  auto* curve_cmd = app.add_subcommand("pr-curve", "Export a PR curve");
  curve_cmd->add_option("--gt", gt_path, "Ground-truth DOT")->required();
  curve_cmd->add_option("--pred", pred_path, "Predicted DOT")->required();
  curve_cmd->add_option("--kind", kind, "node or edge")
      ->check(CLI::IsMember({"node", "edge"}));
  curve_cmd->add_option("--out", out_path, "CSV path")->required();
  curve_cmd->add_option("--tau-grid", grid_spec, "start:stop:step");

  std::string detections;
  auto* assemble_cmd =
      app.add_subcommand("assemble", "Build DOT from detections JSON");
  assemble_cmd->add_option("--detections", detections, "Detections JSON")
      ->required();
  assemble_cmd->add_option("--out", out_path, "DOT output path")->required();

  std::string doc, query;
  int fig = 0;
  std::size_t k = kDefaultTopK;
  auto* retrieve_cmd =
      app.add_subcommand("retrieve", "Rank paragraphs citing a figure");
  retrieve_cmd->add_option("--doc", doc, "Plain-text paper")->required();
  retrieve_cmd->add_option("--fig", fig, "Figure number")
      ->required()
      ->check(CLI::PositiveNumber);
  retrieve_cmd->add_option("--query", query, "File with caption + OCR text")
      ->required();
  retrieve_cmd->add_option("--k", k, "Paragraphs to keep")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }

  try {
    MetricConfig metric;
    metric.tau = tau;
    if (!grid_spec.empty()) metric.tau_grid = parse_grid(grid_spec);

    if (parse_cmd->parsed()) {
      std::cout << render_dot(parse_file(file));
    } else if (canon_cmd->parsed()) {
      std::cout << render_dot(canonicalize(parse_file(file)));
    } else if (bucket_cmd->parsed()) {
      std::cout << to_string(complexity_bucket(parse_file(file))) << '\n';
    } else if (pair_cmd->parsed()) {
      DotGraph gt = parse_file(gt_path);
      std::string pred_text = read_file(pred_path);
      std::string gt_text = read_file(gt_path);
      TextMetricReport text = text_metrics(pred_text, gt_text);
      ParseReport compiled = check_compiles(pred_text);
      MetricReport graph;
      graph.tau = tau;
      if (compiled.ok) graph = evaluate_pair(gt, parse_dot(pred_text), metric);
      if (as_json) {
        auto j = nlohmann::ordered_json::parse(metric_columns_json(graph, text));
        j["compiled"] = compiled.ok;
        std::cout << j.dump(2) << '\n';
      } else {
        std::printf("compiled      %s\n", compiled.ok ? "yes" : "no");
        std::printf("ROUGE-L       %.4f\n", text.rouge_l);
        std::printf("CodeBLEU      %.4f\n", text.code_bleu);
        std::printf("Edit Distance %zu\n", text.edit_distance);
        std::printf("chrF          %.4f\n", text.chrf);
        std::printf("Node Prec     %.4f\n", graph.node.precision);
        std::printf("Node Recall   %.4f\n", graph.node.recall);
        std::printf("Node F1       %.4f\n", graph.node.f1);
        std::printf("Node PR-AUC   %.4f\n", graph.node_pr_auc);
        std::printf("Edge Prec     %.4f\n", graph.edge_precision);
        std::printf("Edge Recall   %.4f\n", graph.edge_recall);
        std::printf("Edge F1       %.4f\n", graph.edge_f1);
        std::printf("Edge PR-AUC   %.4f\n", graph.edge_pr_auc);
        std::printf("Jaccard Sim.  %.4f\n", graph.jaccard);
      }
    } else if (corpus_cmd->parsed()) {
      LoadResult loaded;
      try {
        loaded = load_corpus(input);
      } catch (const CorpusError& e) {
        throw InputError(e.what());
      }
      for (const RejectedRecord& r : loaded.rejected) {
        std::cerr << "rejected line " << r.line << " (" << r.id
                  << "): " << r.reason << '\n';
      }
      if (loaded.records.empty()) throw InputError("no usable records");
      EvalConfig config;
      config.metric = metric;
      config.workers = workers;
      config.aggregation = micro ? Aggregation::kMicro : Aggregation::kMacro;
      config.compiled_only = compiled_only;
      config.keep_curves = with_curves;
      AggregateReport report = evaluate_corpus(loaded.records, config);
      try {
        write_report(report,
                     format == "csv" ? ReportFormat::kCsv : ReportFormat::kJson,
                     out_path, with_curves);
      } catch (const std::runtime_error& e) {
        throw InputError(e.what());
      }
    } else if (curve_cmd->parsed()) {
      DotGraph gt = parse_file(gt_path);
      DotGraph pred = parse_file(pred_path);
      std::vector<double> grid =
          metric.tau_grid.empty() ? default_tau_grid() : metric.tau_grid;
      PRCurve curve = pr_curve(gt, pred, grid,
                               kind == "edge" ? CurveKind::kEdge
                                              : CurveKind::kNode,
                               metric);
      write_file(out_path, curve_csv(curve));
    } else if (assemble_cmd->parsed()) {
      DetectionSet set;
      try {
        set = detections_from_json(read_file(detections));
      } catch (const std::invalid_argument& e) {
        throw InputError(e.what());
      }
      AssemblyResult result = assemble_dot(set);
      if (result.dropped_arrows > 0) {
        std::cerr << "warning: dropped " << result.dropped_arrows
                  << " unlinkable arrow(s)\n";
      }
      write_file(out_path, render_dot(result.graph));
    } else if (retrieve_cmd->parsed()) {
      auto candidates = find_figure_paragraphs(read_file(doc), fig);
      auto ranked = tfidf_rank(std::move(candidates), read_file(query), k);
      nlohmann::ordered_json out = nlohmann::ordered_json::array();
      for (const auto& c : ranked) {
        out.push_back({{"index", c.index}, {"score", c.score}, {"text", c.text}});
      }
      std::cout << out.dump(2) << '\n';
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  }
  return 0;
}
