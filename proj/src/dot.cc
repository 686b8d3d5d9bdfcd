#include "archeval/dot.h"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

#include "archeval/similarity.h"

namespace archeval {

namespace {

enum class Tok {
  kId,
  kLBrace,
  kRBrace,
  kLBracket,
  kRBracket,
  kSemi,
  kComma,
  kEq,
  kArrow,
  kUndirected,
  kColon,
  kPlus,
  kEnd,
};

struct Token {
  Tok kind;
  std::string text;
  bool quoted = false;
  SourcePosition pos;
};

bool is_id_start(unsigned char c) {
  return std::isalpha(c) || c == '_' || c >= 0x80;
}

bool is_id_char(unsigned char c) {
  return std::isalnum(c) || c == '_' || c >= 0x80;
}

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) ==
                  std::tolower(static_cast<unsigned char>(y));
         });
}

bool is_keyword(std::string_view word) {
  for (std::string_view kw :
       {"node", "edge", "graph", "digraph", "subgraph", "strict"}) {
    if (iequals(word, kw)) return true;
  }
  return false;
}

[[noreturn]] void fail(ParseErrorKind kind, SourcePosition pos,
                       const std::string& message) {
  throw ParseError(kind, pos, message);
}

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_blank();
      SourcePosition start = pos_;
      if (at_end()) {
        out.push_back({Tok::kEnd, "", false, start});
        return out;
      }
      char c = peek();
      switch (c) {
        case '{': advance(); out.push_back({Tok::kLBrace, "{", false, start}); continue;
        case '}': advance(); out.push_back({Tok::kRBrace, "}", false, start}); continue;
        case '[': advance(); out.push_back({Tok::kLBracket, "[", false, start}); continue;
        case ']': advance(); out.push_back({Tok::kRBracket, "]", false, start}); continue;
        case ';': advance(); out.push_back({Tok::kSemi, ";", false, start}); continue;
        case ',': advance(); out.push_back({Tok::kComma, ",", false, start}); continue;
        case '=': advance(); out.push_back({Tok::kEq, "=", false, start}); continue;
        case ':': advance(); out.push_back({Tok::kColon, ":", false, start}); continue;
        case '+': advance(); out.push_back({Tok::kPlus, "+", false, start}); continue;
        case '"': out.push_back(quoted(start)); continue;
        case '<':
          fail(ParseErrorKind::kSyntax, start,
               "HTML-like labels are not supported");
        default: break;
      }
      if (c == '-' && peek(1) == '>') {
        advance(2);
        out.push_back({Tok::kArrow, "->", false, start});
        continue;
      }
      if (c == '-' && peek(1) == '-') {
        advance(2);
        out.push_back({Tok::kUndirected, "--", false, start});
        continue;
      }
      if (c == '-' || c == '.' || std::isdigit(static_cast<unsigned char>(c))) {
        out.push_back(numeral(start));
        continue;
      }
      if (is_id_start(static_cast<unsigned char>(c))) {
        std::size_t begin = offset_;
        while (!at_end() && is_id_char(static_cast<unsigned char>(peek()))) {
          advance();
        }
        out.push_back({Tok::kId, std::string(text_.substr(begin, offset_ - begin)),
                       false, start});
        continue;
      }
      fail(ParseErrorKind::kSyntax, start,
           std::string("unexpected character '") + c + "'");
    }
  }

 private:
  bool at_end() const { return offset_ >= text_.size(); }
  char peek(std::size_t ahead = 0) const {
    return offset_ + ahead < text_.size() ? text_[offset_ + ahead] : '\0';
  }
  void advance(std::size_t n = 1) {
    for (std::size_t i = 0; i < n && !at_end(); ++i) {
      if (text_[offset_] == '\n') {
        ++pos_.line;
        pos_.column = 1;
      } else {
        ++pos_.column;
      }
      ++offset_;
    }
  }

  void skip_blank() {
    for (;;) {
      while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) {
        advance();
      }
      if (peek() == '/' && peek(1) == '/') {
        while (!at_end() && peek() != '\n') advance();
      } else if (peek() == '/' && peek(1) == '*') {
        SourcePosition start = pos_;
        advance(2);
        while (!(peek() == '*' && peek(1) == '/')) {
          if (at_end()) {
            fail(ParseErrorKind::kTruncated, start, "unterminated comment");
          }
          advance();
        }
        advance(2);
      } else if (peek() == '#' && pos_.column == 1) {
        while (!at_end() && peek() != '\n') advance();
      } else {
        return;
      }
    }
  }

  Token quoted(SourcePosition start) {
    advance();  // opening quote
    std::string value;
    for (;;) {
      if (at_end()) {
        fail(ParseErrorKind::kTruncated, start, "unterminated string");
      }
      char c = peek();
      if (c == '"') {
        advance();
        break;
      }
      if (c == '\\') {
        char next = peek(1);
        if (next == '"' || next == '\\') {
          value.push_back(next);
          advance(2);
          continue;
        }
        if (next == '\n') {
          advance(2);
          continue;
        }
        if (next == '\0' && offset_ + 1 >= text_.size()) {
          fail(ParseErrorKind::kTruncated, start, "unterminated string");
        }
      }
      value.push_back(c);
      advance();
    }
    return {Tok::kId, std::move(value), true, start};
  }

  Token numeral(SourcePosition start) {
    std::size_t begin = offset_;
    if (peek() == '-') advance();
    bool digits = false;
    while (std::isdigit(static_cast<unsigned char>(peek()))) {
      advance();
      digits = true;
    }
    if (peek() == '.') {
      advance();
      while (std::isdigit(static_cast<unsigned char>(peek()))) {
        advance();
        digits = true;
      }
    }
    if (!digits) {
      fail(ParseErrorKind::kSyntax, start, "malformed numeral");
    }
    if (!at_end() && is_id_start(static_cast<unsigned char>(peek()))) {
      fail(ParseErrorKind::kSyntax, pos_,
           "numeral immediately followed by identifier characters");
    }
    return {Tok::kId, std::string(text_.substr(begin, offset_ - begin)), false,
            start};
  }

  std::string_view text_;
  std::size_t offset_ = 0;
  SourcePosition pos_;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  DotGraph run() {
    if (peek().kind == Tok::kEnd) {
      fail(ParseErrorKind::kEmpty, peek().pos, "empty input");
    }
    if (is_bare_keyword(peek(), "strict")) next();
    const Token& head = peek();
    if (is_bare_keyword(head, "graph")) {
      fail(ParseErrorKind::kNotDigraph, head.pos,
           "undirected graphs are not supported");
    }
    if (!is_bare_keyword(head, "digraph")) {
      error_at(head, "expected 'digraph'");
    }
    next();
    if (peek().kind == Tok::kId) {
      const Token& name = next();
      if (!name.quoted && is_keyword(name.text)) {
        error_at(name, "keyword used as graph name");
      }
      graph_.name = name.text;
    }
    expect(Tok::kLBrace, "expected '{'");
    statements();
    expect(Tok::kRBrace, "expected '}'");
    if (peek().kind != Tok::kEnd) {
      error_at(peek(), "unexpected content after graph body");
    }
    return std::move(graph_);
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    std::size_t i = std::min(cursor_ + ahead, tokens_.size() - 1);
    return tokens_[i];
  }
  const Token& next() {
    const Token& t = peek();
    if (cursor_ < tokens_.size() - 1) ++cursor_;
    return t;
  }

  [[noreturn]] void error_at(const Token& t, const std::string& message) const {
    if (t.kind == Tok::kEnd) {
      fail(ParseErrorKind::kTruncated, t.pos,
           message + " (unexpected end of input)");
    }
    fail(ParseErrorKind::kSyntax, t.pos, message);
  }

  const Token& expect(Tok kind, const char* message) {
    if (peek().kind != kind) error_at(peek(), message);
    return next();
  }

  static bool is_bare_keyword(const Token& t, std::string_view kw) {
    return t.kind == Tok::kId && !t.quoted && iequals(t.text, kw);
  }

  // ID, including `"a" + "b"` concatenation of quoted strings.
  std::string identifier(const char* what) {
    const Token& t = peek();
    if (t.kind != Tok::kId) error_at(t, std::string("expected ") + what);
    next();
    std::string value = t.text;
    if (t.quoted) {
      while (peek().kind == Tok::kPlus) {
        next();
        const Token& more = peek();
        if (more.kind != Tok::kId || !more.quoted) {
          error_at(more, "expected quoted string after '+'");
        }
        value += next().text;
      }
    }
    return value;
  }

  void statements() {
    while (peek().kind != Tok::kRBrace) {
      if (peek().kind == Tok::kEnd) error_at(peek(), "expected '}'");
      statement();
      if (peek().kind == Tok::kSemi) next();
    }
  }

  void statement() {
    const Token& t = peek();
    if (t.kind == Tok::kLBrace || is_bare_keyword(t, "subgraph")) {
      std::vector<std::size_t> members = subgraph();
      if (peek().kind == Tok::kArrow || peek().kind == Tok::kUndirected) {
        edge_chain(std::move(members));
      }
      return;
    }
    if (is_bare_keyword(t, "graph") || is_bare_keyword(t, "node") ||
        is_bare_keyword(t, "edge")) {
      next();
      if (peek().kind != Tok::kLBracket) {
        error_at(peek(), "expected '[' after attribute statement keyword");
      }
      attribute_list();  // defaults carry layout only; discarded
      return;
    }
    if (t.kind != Tok::kId) error_at(t, "expected statement");
    if (!t.quoted && is_keyword(t.text)) {
      error_at(t, "unexpected keyword '" + t.text + "'");
    }
    if (peek(1).kind == Tok::kEq) {
      identifier("attribute name");
      next();
      identifier("attribute value");  // graph attribute, discarded
      return;
    }
    std::string id = identifier("node identifier");
    if (peek().kind == Tok::kColon) {
      error_at(peek(), "port syntax is not supported");
    }
    if (peek().kind == Tok::kArrow || peek().kind == Tok::kUndirected) {
      edge_chain({touch_node(id)});
      return;
    }
    std::size_t index = touch_node(id);
    if (peek().kind == Tok::kLBracket) {
      for (auto& [key, value] : attribute_list()) {
        NodeDef& node = graph_.nodes[index];
        if (key == "label") {
          node.label = value;
        } else {
          set_attr(node.style_attrs, key, value);
        }
      }
    }
  }

  void edge_chain(std::vector<std::size_t> first) {
    std::vector<std::vector<std::size_t>> operands;
    operands.push_back(std::move(first));
    while (peek().kind == Tok::kArrow || peek().kind == Tok::kUndirected) {
      const Token& op = next();
      if (op.kind == Tok::kUndirected) {
        fail(ParseErrorKind::kSyntax, op.pos,
             "undirected edge operator '--' in digraph");
      }
      const Token& t = peek();
      if (t.kind == Tok::kLBrace || is_bare_keyword(t, "subgraph")) {
        operands.push_back(subgraph());
        continue;
      }
      if (t.kind != Tok::kId || (!t.quoted && is_keyword(t.text))) {
        error_at(t, "expected edge target");
      }
      std::string id = identifier("edge target");
      if (peek().kind == Tok::kColon) {
        error_at(peek(), "port syntax is not supported");
      }
      operands.push_back({touch_node(id)});
    }
    std::vector<Attribute> attrs;
    if (peek().kind == Tok::kLBracket) {
      for (auto& [key, value] : attribute_list()) set_attr(attrs, key, value);
    }
    for (std::size_t k = 0; k + 1 < operands.size(); ++k) {
      for (std::size_t s : operands[k]) {
        for (std::size_t d : operands[k + 1]) {
          graph_.edges.push_back(
              {graph_.nodes[s].id, graph_.nodes[d].id, attrs});
        }
      }
    }
  }

  std::vector<std::size_t> subgraph() {
    if (is_bare_keyword(peek(), "subgraph")) {
      next();
      if (peek().kind == Tok::kId) identifier("subgraph name");
    }
    expect(Tok::kLBrace, "expected '{' to open subgraph");
    collectors_.emplace_back();
    statements();
    expect(Tok::kRBrace, "expected '}' to close subgraph");
    std::vector<std::size_t> members = std::move(collectors_.back());
    collectors_.pop_back();
    return members;
  }

  std::vector<Attribute> attribute_list() {
    std::vector<Attribute> attrs;
    while (peek().kind == Tok::kLBracket) {
      next();
      while (peek().kind != Tok::kRBracket) {
        std::string key = identifier("attribute name");
        expect(Tok::kEq, "expected '=' in attribute");
        std::string value = identifier("attribute value");
        attrs.emplace_back(std::move(key), std::move(value));
        if (peek().kind == Tok::kComma || peek().kind == Tok::kSemi) next();
      }
      next();
    }
    return attrs;
  }

  static void set_attr(std::vector<Attribute>& attrs, const std::string& key,
                       const std::string& value) {
    for (auto& attr : attrs) {
      if (attr.first == key) {
        attr.second = value;
        return;
      }
    }
    attrs.emplace_back(key, value);
  }

  std::size_t touch_node(const std::string& id) {
    auto [it, inserted] = index_.try_emplace(id, graph_.nodes.size());
    if (inserted) graph_.nodes.push_back({id, id, {}});
    for (auto& members : collectors_) {
      if (std::find(members.begin(), members.end(), it->second) ==
          members.end()) {
        members.push_back(it->second);
      }
    }
    return it->second;
  }

  std::vector<Token> tokens_;
  std::size_t cursor_ = 0;
  DotGraph graph_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::vector<std::size_t>> collectors_;
};

bool is_plain_identifier(std::string_view s) {
  if (s.empty() || !is_id_start(static_cast<unsigned char>(s[0]))) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return is_id_char(static_cast<unsigned char>(c));
  });
}

bool is_unsigned_integer(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
    return std::isdigit(static_cast<unsigned char>(c));
  });
}

std::string quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string render_id(std::string_view s) {
  if (is_unsigned_integer(s) || (is_plain_identifier(s) && !is_keyword(s))) {
    return std::string(s);
  }
  return quote(s);
}

void render_attrs(std::ostringstream& out,
                  const std::vector<Attribute>& attrs) {
  bool first = true;
  for (const auto& [key, value] : attrs) {
    out << (first ? "" : ", ") << render_id(key) << '=' << quote(value);
    first = false;
  }
}

// Unsigned integers order numerically and before everything else, so that
// renumbered ids keep their relative order on a second canonicalization.
bool id_less(std::string_view a, std::string_view b) {
  bool na = is_unsigned_integer(a);
  bool nb = is_unsigned_integer(b);
  if (na != nb) return na;
  if (na) {
    auto strip = [](std::string_view s) {
      std::size_t i = s.find_first_not_of('0');
      return i == std::string_view::npos ? std::string_view() : s.substr(i);
    };
    std::string_view sa = strip(a);
    std::string_view sb = strip(b);
    if (sa.size() != sb.size()) return sa.size() < sb.size();
    if (sa != sb) return sa < sb;
  }
  return a < b;
}

}  // namespace

std::optional<std::size_t> DotGraph::index_of(std::string_view id) const {
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].id == id) return i;
  }
  return std::nullopt;
}

std::vector<std::pair<std::size_t, std::size_t>> DotGraph::edge_indices()
    const {
  std::unordered_map<std::string_view, std::size_t> index;
  for (std::size_t i = 0; i < nodes.size(); ++i) index.emplace(nodes[i].id, i);
  std::vector<std::pair<std::size_t, std::size_t>> out;
  out.reserve(edges.size());
  for (const EdgeDef& e : edges) {
    auto s = index.find(e.source);
    auto t = index.find(e.target);
    if (s == index.end() || t == index.end()) {
      throw std::logic_error("edge endpoint is not a declared node: " +
                             (s == index.end() ? e.source : e.target));
    }
    out.emplace_back(s->second, t->second);
  }
  return out;
}

std::string_view to_string(ParseErrorKind kind) {
  switch (kind) {
    case ParseErrorKind::kSyntax: return "syntax";
    case ParseErrorKind::kTruncated: return "truncated";
    case ParseErrorKind::kEmpty: return "empty";
    case ParseErrorKind::kNotDigraph: return "not-digraph";
  }
  return "syntax";
}

ParseError::ParseError(ParseErrorKind kind, SourcePosition position,
                       const std::string& message)
    : std::runtime_error(message), kind_(kind), position_(position) {}

DotGraph parse_dot(std::string_view text) {
  return Parser(Lexer(text).run()).run();
}

ParseReport check_compiles(std::string_view text) {
  try {
    parse_dot(text);
    return {};
  } catch (const ParseError& e) {
    return {false, e.kind(), e.position(), e.what()};
  }
}

DotGraph canonicalize(const DotGraph& graph) {
  auto edges = graph.edge_indices();
  std::vector<std::string> keys;
  keys.reserve(graph.nodes.size());
  for (const NodeDef& n : graph.nodes) keys.push_back(normalize_label(n.label));

  std::vector<std::size_t> order(graph.nodes.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (keys[a] != keys[b]) return keys[a] < keys[b];
    const NodeDef& na = graph.nodes[a];
    const NodeDef& nb = graph.nodes[b];
    if (na.label != nb.label) return na.label < nb.label;
    return id_less(na.id, nb.id);
  });

  std::vector<std::size_t> rank(order.size());
  DotGraph out;
  out.nodes.reserve(order.size());
  for (std::size_t r = 0; r < order.size(); ++r) {
    rank[order[r]] = r;
    out.nodes.push_back({std::to_string(r), graph.nodes[order[r]].label, {}});
  }
  std::set<std::pair<std::size_t, std::size_t>> unique;
  for (auto [s, t] : edges) unique.emplace(rank[s], rank[t]);
  out.edges.reserve(unique.size());
  for (auto [s, t] : unique) {
    out.edges.push_back({std::to_string(s), std::to_string(t), {}});
  }
  return out;
}

std::string render_dot(const DotGraph& graph) {
  std::ostringstream out;
  out << "digraph ";
  if (graph.name) out << render_id(*graph.name) << ' ';
  out << "{\n";
  for (const NodeDef& n : graph.nodes) {
    out << "  " << render_id(n.id) << " [label=" << quote(n.label);
    if (!n.style_attrs.empty()) {
      out << ", ";
      render_attrs(out, n.style_attrs);
    }
    out << "];\n";
  }
  for (const EdgeDef& e : graph.edges) {
    out << "  " << render_id(e.source) << " -> " << render_id(e.target);
    if (!e.style_attrs.empty()) {
      out << " [";
      render_attrs(out, e.style_attrs);
      out << ']';
    }
    out << ";\n";
  }
  out << "}\n";
  return out.str();
}

std::string_view to_string(ComplexityBucket bucket) {
  switch (bucket) {
    case ComplexityBucket::kEasy: return "easy";
    case ComplexityBucket::kMedium: return "medium";
    case ComplexityBucket::kHard: return "hard";
  }
  return "easy";
}

std::optional<ComplexityBucket> bucket_from_string(std::string_view text) {
  if (text == "easy") return ComplexityBucket::kEasy;
  if (text == "medium") return ComplexityBucket::kMedium;
  if (text == "hard") return ComplexityBucket::kHard;
  return std::nullopt;
}

ComplexityBucket complexity_bucket_for_count(std::size_t node_count) {
  if (node_count <= 14) return ComplexityBucket::kEasy;
  if (node_count <= 24) return ComplexityBucket::kMedium;
  return ComplexityBucket::kHard;
}

}  // namespace archeval
