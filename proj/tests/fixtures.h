// Shared test inputs: the attention-gate diagram and seeded fuzzers.

#pragma once

#include <algorithm>
#include <cstddef>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "archeval/assembler.h"
#include "archeval/dot.h"

namespace fixtures {

inline constexpr const char* kAttentionGate = R"(digraph {
0 [label="Sigmoid"]; 1 [label="Output"]; 2 [label="1x1 Conv"]; 3 [label="Resampler"]; 4 [label="Wx:1x1 Conv"]; 5 [label="g"]; 6 [label="ReLU"]; 7 [label="x"]; 8 [label="Wg:1x1 Conv"];
5 -> 8; 7 -> 4; 8 -> 6; 4 -> 6; 6 -> 2; 2 -> 0; 0 -> 3; 3 -> 1; 7 -> 1;
}
)";

inline const std::vector<std::pair<int, int>>& attention_gate_edges() {
  static const std::vector<std::pair<int, int>> edges{
      {5, 8}, {7, 4}, {8, 6}, {4, 6}, {6, 2}, {2, 0}, {0, 3}, {3, 1}, {7, 1}};
  return edges;
}

inline const std::vector<std::string>& attention_gate_labels() {
  static const std::vector<std::string> labels{
      "Sigmoid", "Output", "1x1 Conv", "Resampler", "Wx:1x1 Conv",
      "g",       "ReLU",   "x",        "Wg:1x1 Conv"};
  return labels;
}

inline const std::vector<std::string>& vocabulary() {
  static const std::vector<std::string> words{
      "conv",    "3x3",   "1x1",     "relu",    "pool",  "max",   "avg",
      "input",   "output", "encoder", "decoder", "attention", "softmax",
      "sigmoid", "linear", "norm",   "layer",   "dropout", "embed", "concat",
      "add",     "block", "head",    "fc",      "lstm",  "gate",  "image"};
  return words;
}

inline std::string random_label(std::mt19937& rng) {
  const auto& words = vocabulary();
  std::uniform_int_distribution<std::size_t> pick(0, words.size() - 1);
  std::uniform_int_distribution<int> len(1, 3);
  std::string out;
  int n = len(rng);
  for (int i = 0; i < n; ++i) {
    if (i) out += ' ';
    out += words[pick(rng)];
  }
  return out;
}

// Graph with integer ids, random labels and up to `max_edges` distinct
// non-loop edges.
inline archeval::DotGraph random_graph(std::mt19937& rng, std::size_t nodes,
                                       std::size_t max_edges) {
  archeval::DotGraph g;
  for (std::size_t i = 0; i < nodes; ++i) {
    g.nodes.push_back({std::to_string(i), random_label(rng), {}});
  }
  if (nodes < 2) return g;
  std::uniform_int_distribution<std::size_t> pick(0, nodes - 1);
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (std::size_t k = 0; k < max_edges; ++k) {
    std::size_t u = pick(rng), v = pick(rng);
    if (u == v || !seen.emplace(u, v).second) continue;
    g.edges.push_back({std::to_string(u), std::to_string(v), {}});
  }
  return g;
}

// Perturbed copy: labels occasionally edited or swapped, edges dropped
// and added, nodes dropped or appended.
inline archeval::DotGraph perturb(const archeval::DotGraph& g,
                                  std::mt19937& rng) {
  std::bernoulli_distribution coin(0.25);
  archeval::DotGraph out;
  std::set<std::string> kept;
  for (const auto& n : g.nodes) {
    if (coin(rng) && g.node_count() > 1) continue;
    archeval::NodeDef copy = n;
    if (coin(rng)) copy.label = random_label(rng);
    if (coin(rng)) copy.label += " v2";
    kept.insert(copy.id);
    out.nodes.push_back(copy);
  }
  for (const auto& e : g.edges) {
    if (!kept.count(e.source) || !kept.count(e.target) || coin(rng)) continue;
    out.edges.push_back(e);
  }
  std::uniform_int_distribution<int> extra(0, 3);
  int add = extra(rng);
  for (int i = 0; i < add; ++i) {
    out.nodes.push_back({"n" + std::to_string(i), random_label(rng), {}});
  }
  if (out.node_count() >= 2) {
    std::uniform_int_distribution<std::size_t> pick(0, out.node_count() - 1);
    for (int i = 0; i < 3; ++i) {
      std::size_t u = pick(rng), v = pick(rng);
      if (u != v) out.edges.push_back({out.nodes[u].id, out.nodes[v].id, {}});
    }
  }
  return out;
}

// DOT text for `g` with statements shuffled, mixed separators and some
// decorative attributes, exercising more of the grammar than render_dot.
inline std::string messy_dot(const archeval::DotGraph& g, std::mt19937& rng) {
  std::vector<std::string> stmts;
  std::bernoulli_distribution coin(0.5);
  for (const auto& n : g.nodes) {
    std::string s = "\"" + n.id + "\" [label=\"";
    for (char c : n.label) {
      if (c == '"' || c == '\\') s += '\\';
      s += c;
    }
    s += "\"";
    if (coin(rng)) s += ", shape=box";
    if (coin(rng)) s += " pos=\"1,2\"";
    s += "]";
    stmts.push_back(s);
  }
  for (const auto& e : g.edges) {
    std::string s = "\"" + e.source + "\" -> \"" + e.target + "\"";
    if (coin(rng)) s += " [color=red]";
    stmts.push_back(s);
  }
  stmts.push_back("rankdir=LR");
  stmts.push_back("node [shape=box]");
  std::shuffle(stmts.begin(), stmts.end(), rng);
  std::string out = "digraph G {\n  // generated\n";
  for (const auto& s : stmts) {
    out += "  " + s + (coin(rng) ? ";\n" : "\n");
  }
  out += "}\n";
  return out;
}

// Boxes on a 3-column grid; each arrow runs between box centers.
inline archeval::DetectionSet attention_gate_detections() {
  archeval::DetectionSet set;
  const auto& labels = attention_gate_labels();
  for (std::size_t i = 0; i < labels.size(); ++i) {
    double x = 200.0 * static_cast<double>(i % 3);
    double y = 120.0 * static_cast<double>(i / 3);
    set.boxes.push_back({static_cast<long long>(i), {x, y, x + 120, y + 50},
                         labels[i]});
  }
  auto center = [&](int id) {
    const auto& b = set.boxes[id].bbox;
    return archeval::Point{(b.x0 + b.x1) / 2, (b.y0 + b.y1) / 2};
  };
  for (auto [u, v] : attention_gate_edges()) {
    set.arrows.push_back({center(u), center(v)});
  }
  return set;
}

inline archeval::DetectionSet random_detections(std::mt19937& rng) {
  std::uniform_int_distribution<int> box_count(0, 8);
  std::uniform_int_distribution<int> arrow_count(0, 12);
  std::uniform_real_distribution<double> coord(0.0, 500.0);
  std::uniform_real_distribution<double> size(1.0, 80.0);
  std::uniform_int_distribution<long long> id_step(1, 5);
  archeval::DetectionSet set;
  int nb = box_count(rng);
  long long id = 0;
  for (int i = 0; i < nb; ++i) {
    id += id_step(rng);
    double x = coord(rng), y = coord(rng);
    std::string text = (i % 3 == 0) ? "" : random_label(rng);
    set.boxes.push_back({id, {x, y, x + size(rng), y + size(rng)}, text});
  }
  int na = arrow_count(rng);
  for (int i = 0; i < na; ++i) {
    set.arrows.push_back({{coord(rng), coord(rng)}, {coord(rng), coord(rng)}});
  }
  return set;
}

}  // namespace fixtures
