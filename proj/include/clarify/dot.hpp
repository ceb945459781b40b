#pragma once

// A positioned subset of the Graphviz DOT language: one graph or digraph
// whose nodes all carry pos="x,y" (as produced by neato -n2 and friends),
// edges optionally carrying spline pos="e,x,y x1,y1 ...". Subgraphs, ports
// and HTML strings are rejected.

#include <cctype>
#include <cstdlib>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "clarify/collision.hpp"
#include "clarify/error.hpp"
#include "clarify/geometry.hpp"

namespace clarify {

using Attributes = std::vector<std::pair<std::string, std::string>>;

inline const std::string* find_attr(const Attributes& attrs, std::string_view key) {
  for (auto it = attrs.rbegin(); it != attrs.rend(); ++it)
    if (it->first == key) return &it->second;
  return nullptr;
}

inline void set_attr(Attributes& attrs, const std::string& key, std::string value) {
  bool replaced = false;
  for (auto& [k, v] : attrs) {
    if (k == key) {
      v = value;
      replaced = true;
    }
  }
  if (!replaced) attrs.emplace_back(key, std::move(value));
}

struct DotDocument {
  struct Default {
    std::string kind;  // "graph", "node", "edge", or "" for a bare key=value
    Attributes attrs;
  };
  struct Node {
    std::string id;
    Attributes attrs;
    int line = 0;
  };
  struct Edge {
    std::string tail;
    std::string head;
    Attributes attrs;
    int line = 0;
  };

  bool strict = false;
  bool directed = false;
  std::string name;
  std::vector<Default> preamble;
  std::vector<Node> nodes;
  std::vector<Edge> edges;
};

namespace dot_detail {

enum class Tok { Id, LBrace, RBrace, LBracket, RBracket, Semi, Comma, Equal, Colon, EdgeOp, End };

struct Token {
  Tok kind;
  std::string text;
  bool quoted = false;
  int line = 0;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    skip_space_and_comments();
    if (pos_ >= src_.size()) return {Tok::End, "", false, line_};
    const char c = src_[pos_];
    const int line = line_;
    switch (c) {
      case '{': ++pos_; return {Tok::LBrace, "{", false, line};
      case '}': ++pos_; return {Tok::RBrace, "}", false, line};
      case '[': ++pos_; return {Tok::LBracket, "[", false, line};
      case ']': ++pos_; return {Tok::RBracket, "]", false, line};
      case ';': ++pos_; return {Tok::Semi, ";", false, line};
      case ',': ++pos_; return {Tok::Comma, ",", false, line};
      case '=': ++pos_; return {Tok::Equal, "=", false, line};
      case ':': ++pos_; return {Tok::Colon, ":", false, line};
      case '<': throw ParseError("HTML-like labels are not supported", line);
      case '"': return quoted();
      default: break;
    }
    if (c == '-' && pos_ + 1 < src_.size() && (src_[pos_ + 1] == '-' || src_[pos_ + 1] == '>')) {
      const std::string op(src_.substr(pos_, 2));
      pos_ += 2;
      return {Tok::EdgeOp, op, false, line};
    }
    if (is_id_char(c) || c == '-' || c == '.') return bare();
    throw ParseError(std::string("unexpected character '") + c + "'", line);
  }

 private:
  static bool is_id_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || static_cast<unsigned char>(c) >= 0x80;
  }

  void skip_space_and_comments() {
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (c == '\n') {
        ++line_;
        ++pos_;
        at_line_start_ = true;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else if (c == '#' && at_line_start_) {
        while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
      } else if (src_.substr(pos_, 2) == "//") {
        while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
      } else if (src_.substr(pos_, 2) == "/*") {
        const int start = line_;
        pos_ += 2;
        while (pos_ < src_.size() && src_.substr(pos_, 2) != "*/") {
          if (src_[pos_] == '\n') ++line_;
          ++pos_;
        }
        if (pos_ >= src_.size()) throw ParseError("unterminated comment", start);
        pos_ += 2;
      } else {
        at_line_start_ = false;
        return;
      }
    }
  }

  Token quoted() {
    const int line = line_;
    std::string text;
    for (;;) {
      ++pos_;  // opening quote
      for (;;) {
        if (pos_ >= src_.size()) throw ParseError("unterminated string", line);
        const char c = src_[pos_];
        if (c == '"') {
          ++pos_;
          break;
        }
        if (c == '\\' && pos_ + 1 < src_.size()) {
          const char n = src_[pos_ + 1];
          if (n == '"') {
            text.push_back('"');
            pos_ += 2;
            continue;
          }
          if (n == '\n') {  // line continuation
            ++line_;
            pos_ += 2;
            continue;
          }
          if (n == '\r' && pos_ + 2 < src_.size() && src_[pos_ + 2] == '\n') {
            ++line_;
            pos_ += 3;
            continue;
          }
        }
        if (c == '\n') ++line_;
        text.push_back(c);
        ++pos_;
      }
      // "a" + "b" concatenation
      const std::size_t save_pos = pos_;
      const int save_line = line_;
      skip_space_and_comments();
      if (pos_ < src_.size() && src_[pos_] == '+') {
        ++pos_;
        skip_space_and_comments();
        if (pos_ < src_.size() && src_[pos_] == '"') continue;
        throw ParseError("'+' must join two quoted strings", line_);
      }
      pos_ = save_pos;
      line_ = save_line;
      return {Tok::Id, text, true, line};
    }
  }

  Token bare() {
    const int line = line_;
    const std::size_t start = pos_;
    if (src_[pos_] == '-' || src_[pos_] == '.' || std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
      if (src_[pos_] == '-') ++pos_;
      while (pos_ < src_.size() && (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.')) ++pos_;
      if (pos_ == start + (src_[start] == '-' ? 1u : 0u)) throw ParseError("malformed numeral", line);
    } else {
      while (pos_ < src_.size() && is_id_char(src_[pos_])) ++pos_;
    }
    return {Tok::Id, std::string(src_.substr(start, pos_ - start)), false, line};
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  bool at_line_start_ = true;
};

inline std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

inline bool is_keyword(const Token& t, std::string_view kw) { return t.kind == Tok::Id && !t.quoted && lower(t.text) == kw; }

class Parser {
 public:
  explicit Parser(std::string_view src) : lex_(src) { advance(); }

  DotDocument parse() {
    DotDocument doc;
    if (is_keyword(cur_, "strict")) {
      doc.strict = true;
      advance();
    }
    if (is_keyword(cur_, "digraph")) doc.directed = true;
    else if (!is_keyword(cur_, "graph")) throw ParseError("expected 'graph' or 'digraph'", cur_.line);
    advance();
    if (cur_.kind == Tok::Id) {
      doc.name = cur_.text;
      advance();
    }
    expect(Tok::LBrace, "'{'");
    while (cur_.kind != Tok::RBrace) {
      if (cur_.kind == Tok::End) throw ParseError("missing closing '}'", cur_.line);
      statement(doc);
    }
    advance();
    if (cur_.kind != Tok::End) throw ParseError("only one graph per file is supported", cur_.line);
    return doc;
  }

 private:
  void advance() { cur_ = lex_.next(); }

  void expect(Tok kind, const char* what) {
    if (cur_.kind != kind) throw ParseError(std::string("expected ") + what, cur_.line);
    advance();
  }

  void statement(DotDocument& doc) {
    if (cur_.kind == Tok::Semi) {
      advance();
      return;
    }
    if (cur_.kind == Tok::LBrace || is_keyword(cur_, "subgraph"))
      throw ParseError("subgraphs are not supported", cur_.line);
    if (cur_.kind != Tok::Id) throw ParseError("expected a statement, found '" + cur_.text + "'", cur_.line);

    if (!cur_.quoted) {
      const std::string kw = lower(cur_.text);
      if (kw == "graph" || kw == "node" || kw == "edge") {
        advance();
        Attributes attrs = attr_lists(true);
        doc.preamble.push_back({kw, std::move(attrs)});
        return;
      }
    }

    const Token first = cur_;
    advance();
    if (cur_.kind == Tok::Equal) {
      advance();
      if (cur_.kind != Tok::Id) throw ParseError("expected a value after '='", cur_.line);
      doc.preamble.push_back({"", {{first.text, cur_.text}}});
      advance();
      return;
    }
    if (cur_.kind == Tok::Colon) throw ParseError("node ports are not supported", cur_.line);

    if (cur_.kind == Tok::EdgeOp) {
      std::vector<std::string> chain{first.text};
      while (cur_.kind == Tok::EdgeOp) {
        if ((cur_.text == "->") != doc.directed)
          throw ParseError("edge operator '" + cur_.text + "' does not match the graph kind", cur_.line);
        advance();
        if (cur_.kind == Tok::LBrace || is_keyword(cur_, "subgraph"))
          throw ParseError("subgraphs are not supported", cur_.line);
        if (cur_.kind != Tok::Id) throw ParseError("expected a node id after edge operator", cur_.line);
        chain.push_back(cur_.text);
        advance();
        if (cur_.kind == Tok::Colon) throw ParseError("node ports are not supported", cur_.line);
      }
      Attributes attrs = attr_lists(false);
      for (const auto& id : chain) touch_node(doc, id, first.line);
      for (std::size_t i = 0; i + 1 < chain.size(); ++i) doc.edges.push_back({chain[i], chain[i + 1], attrs, first.line});
      return;
    }

    Attributes attrs = attr_lists(false);
    DotDocument::Node& node = touch_node(doc, first.text, first.line);
    for (auto& [k, v] : attrs) set_attr(node.attrs, k, v);
  }

  DotDocument::Node& touch_node(DotDocument& doc, const std::string& id, int line) {
    auto it = index_.find(id);
    if (it != index_.end()) return doc.nodes[it->second];
    index_.emplace(id, doc.nodes.size());
    doc.nodes.push_back({id, {}, line});
    return doc.nodes.back();
  }

  Attributes attr_lists(bool required) {
    Attributes attrs;
    if (required && cur_.kind != Tok::LBracket) throw ParseError("expected '['", cur_.line);
    while (cur_.kind == Tok::LBracket) {
      advance();
      while (cur_.kind != Tok::RBracket) {
        if (cur_.kind != Tok::Id) throw ParseError("expected an attribute name", cur_.line);
        std::string key = cur_.text;
        advance();
        std::string value = "true";
        if (cur_.kind == Tok::Equal) {
          advance();
          if (cur_.kind != Tok::Id) throw ParseError("expected a value for attribute '" + key + "'", cur_.line);
          value = cur_.text;
          advance();
        }
        attrs.emplace_back(std::move(key), std::move(value));
        if (cur_.kind == Tok::Comma || cur_.kind == Tok::Semi) advance();
      }
      advance();
    }
    return attrs;
  }

  Lexer lex_;
  Token cur_{Tok::End, "", false, 0};
  std::map<std::string, std::size_t> index_;
};

inline double parse_number(std::string_view s, int line, std::string_view what) {
  const std::string str(s);
  char* end = nullptr;
  const double v = std::strtod(str.c_str(), &end);
  if (str.empty() || end != str.c_str() + str.size() || !std::isfinite(v))
    throw ParseError("malformed " + std::string(what) + " '" + str + "'", line);
  return v;
}

inline Point2 parse_xy(std::string_view s, int line, std::string_view what) {
  const auto comma = s.find(',');
  if (comma == std::string_view::npos) throw ParseError("malformed " + std::string(what) + " '" + std::string(s) + "'", line);
  std::string_view ys = s.substr(comma + 1);
  if (const auto extra = ys.find(','); extra != std::string_view::npos) ys = ys.substr(0, extra);  // drop z
  return {parse_number(s.substr(0, comma), line, what), parse_number(ys, line, what)};
}

}  // namespace dot_detail

inline DotDocument parse_dot(std::string_view text) { return dot_detail::Parser(text).parse(); }

/// Node position from a pos attribute "x,y" (a trailing '!' is allowed).
inline Point2 parse_node_pos(std::string_view pos, int line = 0) {
  std::string_view s = pos;
  while (!s.empty() && (s.back() == '!' || std::isspace(static_cast<unsigned char>(s.back())))) s.remove_suffix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  return dot_detail::parse_xy(s, line, "node pos");
}

/// Spline control data from an edge pos attribute "[e,x,y] [s,x,y] x1,y1 ...".
inline SplineControl parse_edge_pos(std::string_view pos, int line = 0) {
  SplineControl spline;
  std::istringstream in{std::string(pos)};
  std::string tok;
  while (in >> tok) {
    if (tok.rfind("e,", 0) == 0) spline.end_arrow = dot_detail::parse_xy(std::string_view(tok).substr(2), line, "edge pos");
    else if (tok.rfind("s,", 0) == 0) spline.start_arrow = dot_detail::parse_xy(std::string_view(tok).substr(2), line, "edge pos");
    else spline.controls.push_back(dot_detail::parse_xy(tok, line, "edge pos"));
  }
  if (spline.controls.empty()) throw ParseError("edge pos has no control points", line);
  return spline;
}

/// Geometry of a parsed document. Edge k of the layout is edge k of the document.
inline LayoutGraph to_layout(const DotDocument& doc, double flatten_tol = GeomConfig{}.spline_flatten_tol) {
  LayoutGraph g;
  std::map<std::string, std::size_t> index;
  for (const auto& n : doc.nodes) {
    const std::string* pos = find_attr(n.attrs, "pos");
    if (!pos) throw ParseError("node '" + n.id + "' has no pos attribute", n.line);
    std::optional<std::string> label;
    if (const std::string* l = find_attr(n.attrs, "label")) label = *l;
    index[n.id] = g.add_node(n.id, parse_node_pos(*pos, n.line), label);
  }
  for (const auto& e : doc.edges) {
    const std::size_t tail = index.at(e.tail);
    const std::size_t head = index.at(e.head);
    if (const std::string* pos = find_attr(e.attrs, "pos")) {
      try {
        g.add_edge(tail, head, flatten_polyline(parse_edge_pos(*pos, e.line), flatten_tol));
      } catch (const ParseError& err) {
        throw ParseError(err.what(), err.line() > 0 ? err.line() : e.line);
      } catch (const PreconditionError& err) {
        throw ParseError(err.what(), e.line);
      }
    } else {
      if (g.nodes[tail].pos == g.nodes[head].pos)
        throw ParseError("edge '" + e.tail + "' -- '" + e.head + "' has zero length and no spline pos", e.line);
      g.add_edge(tail, head);
    }
  }
  return g;
}

inline LayoutGraph parse_layout(std::string_view text, double flatten_tol = GeomConfig{}.spline_flatten_tol) {
  return to_layout(parse_dot(text), flatten_tol);
}

namespace dot_detail {

inline std::string quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\\\"";
    else out.push_back(c);
  }
  out += "\"";
  return out;
}

inline std::string attr_list(const Attributes& attrs) {
  std::string out = "[";
  for (std::size_t i = 0; i < attrs.size(); ++i) {
    if (i) out += ", ";
    out += quote(attrs[i].first) + "=" + quote(attrs[i].second);
  }
  return out + "]";
}

}  // namespace dot_detail

/// The document with color="#rrggbb" set on every edge (one entry per edge).
/// Attributes are preserved; layout and formatting are canonicalized.
inline std::string emit_colored_dot(const DotDocument& doc, const std::vector<std::string>& edge_colors) {
  using dot_detail::attr_list;
  using dot_detail::quote;
  if (edge_colors.size() != doc.edges.size()) throw PreconditionError("need exactly one color per edge");
  std::ostringstream os;
  if (doc.strict) os << "strict ";
  os << (doc.directed ? "digraph" : "graph");
  if (!doc.name.empty()) os << " " << quote(doc.name);
  os << " {\n";
  for (const auto& d : doc.preamble) {
    if (d.kind.empty()) os << "  " << quote(d.attrs[0].first) << "=" << quote(d.attrs[0].second) << ";\n";
    else os << "  " << d.kind << " " << attr_list(d.attrs) << ";\n";
  }
  for (const auto& n : doc.nodes) {
    os << "  " << quote(n.id);
    if (!n.attrs.empty()) os << " " << attr_list(n.attrs);
    os << ";\n";
  }
  const char* op = doc.directed ? " -> " : " -- ";
  for (std::size_t k = 0; k < doc.edges.size(); ++k) {
    const auto& e = doc.edges[k];
    Attributes attrs = e.attrs;
    set_attr(attrs, "color", edge_colors[k]);
    os << "  " << quote(e.tail) << op << quote(e.head) << " " << attr_list(attrs) << ";\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace clarify
