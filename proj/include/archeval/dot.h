// DOT-language graph model: parsing, canonicalization, rendering and
// complexity bucketing for architecture diagrams.
//
// Only the directed subset used by diagram code is accepted: a single
// `digraph` with node statements, edge statements (chains expand pairwise),
// attribute statements and subgraphs. Subgraph contents are flattened into
// the parent graph. Ports and HTML-like labels are rejected.

#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace archeval {

using Attribute = std::pair<std::string, std::string>;

struct NodeDef {
  std::string id;
  std::string label;
  // Everything except `label`, in source order. Never consulted by metrics.
  std::vector<Attribute> style_attrs;

  bool operator==(const NodeDef&) const = default;
};

struct EdgeDef {
  std::string source;
  std::string target;
  std::vector<Attribute> style_attrs;

  bool operator==(const EdgeDef&) const = default;
};

class DotGraph {
 public:
  std::optional<std::string> name;
  std::vector<NodeDef> nodes;
  std::vector<EdgeDef> edges;

  bool operator==(const DotGraph&) const = default;

  std::size_t node_count() const { return nodes.size(); }
  std::size_t edge_count() const { return edges.size(); }

  // Position of the node with identifier `id`, or nullopt.
  std::optional<std::size_t> index_of(std::string_view id) const;

  // Edges as (source index, target index), in statement order, duplicates
  // kept. Throws std::logic_error if an endpoint is undeclared.
  std::vector<std::pair<std::size_t, std::size_t>> edge_indices() const;
};

enum class ParseErrorKind { kSyntax, kTruncated, kEmpty, kNotDigraph };

std::string_view to_string(ParseErrorKind kind);

struct SourcePosition {
  int line = 1;
  int column = 1;

  bool operator==(const SourcePosition&) const = default;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(ParseErrorKind kind, SourcePosition position,
             const std::string& message);

  ParseErrorKind kind() const { return kind_; }
  SourcePosition position() const { return position_; }

 private:
  ParseErrorKind kind_;
  SourcePosition position_;
};

struct ParseReport {
  bool ok = true;
  std::optional<ParseErrorKind> error_kind;
  std::optional<SourcePosition> position;
  std::string message;
};

// Throws ParseError on failure.
DotGraph parse_dot(std::string_view text);

// Never throws; ok is true exactly when parse_dot would succeed.
ParseReport check_compiles(std::string_view text);

// Sorted nodes (by normalized label, then raw label, then original id),
// ids renumbered 0..N-1, edges sorted by (source, target) and deduplicated,
// all non-label attributes and the graph name dropped.
DotGraph canonicalize(const DotGraph& graph);

// Emits `digraph {` ... `}` with two-space indentation and `;`-terminated
// statements. parse_dot(render_dot(g)) == g for any well-formed g.
std::string render_dot(const DotGraph& graph);

enum class ComplexityBucket { kEasy, kMedium, kHard };

std::string_view to_string(ComplexityBucket bucket);
std::optional<ComplexityBucket> bucket_from_string(std::string_view text);

ComplexityBucket complexity_bucket_for_count(std::size_t node_count);
inline ComplexityBucket complexity_bucket(const DotGraph& graph) {
  return complexity_bucket_for_count(graph.node_count());
}

}  // namespace archeval
