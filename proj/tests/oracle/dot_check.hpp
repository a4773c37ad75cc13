#pragma once

// Grammar-level DOT checker covering the subset of the language any exporter
// would reasonably emit: graph/digraph, node, edge and attribute statements,
// ID = ID, nested subgraphs, quoted strings with escapes, comments.

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

namespace oracle {

class DotCheck {
 public:
  explicit DotCheck(std::string_view text) : s_(text) {}

  // Empty string when the text is a single well-formed graph; otherwise a
  // message with the byte offset of the problem.
  std::string run() {
    try {
      tokenize();
      graph();
      if (peek().kind != Tok::End) fail("trailing input");
    } catch (const std::string& msg) {
      return msg;
    }
    return {};
  }

 private:
  struct Tok {
    enum Kind { Id, Punct, Arrow, End } kind;
    std::string text;
    std::size_t at;
  };

  [[noreturn]] void fail(const std::string& what) const {
    const std::size_t at = i_ < toks_.size() ? toks_[i_].at : s_.size();
    throw what + " at offset " + std::to_string(at);
  }

  void tokenize() {
    std::size_t p = 0;
    while (p < s_.size()) {
      char c = s_[p];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++p;
      } else if (c == '/' && p + 1 < s_.size() && s_[p + 1] == '/') {
        while (p < s_.size() && s_[p] != '\n') ++p;
      } else if (c == '/' && p + 1 < s_.size() && s_[p + 1] == '*') {
        auto end = s_.find("*/", p + 2);
        if (end == std::string_view::npos) throw std::string("unterminated comment");
        p = end + 2;
      } else if (c == '"') {
        std::size_t start = p++;
        std::string text;
        while (p < s_.size() && s_[p] != '"') {
          if (s_[p] == '\\' && p + 1 < s_.size()) text += s_[p++];
          text += s_[p++];
        }
        if (p >= s_.size()) throw "unterminated string at offset " + std::to_string(start);
        ++p;
        toks_.push_back({Tok::Id, text, start});
      } else if (c == '-' && p + 1 < s_.size() && (s_[p + 1] == '>' || s_[p + 1] == '-')) {
        toks_.push_back({Tok::Arrow, std::string(s_.substr(p, 2)), p});
        p += 2;
      } else if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '-') {
        std::size_t start = p;
        while (p < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[p])) || s_[p] == '_' || s_[p] == '.'))
          ++p;
        if (p == start) ++p;
        std::string word(s_.substr(start, p - start));
        const bool numeral = word.find_first_not_of("-.0123456789") == std::string::npos;
        const bool ident = !std::isdigit(static_cast<unsigned char>(word[0])) && word.find('.') == std::string::npos &&
                           word[0] != '-';
        if (!numeral && !ident) throw "bad identifier '" + word + "' at offset " + std::to_string(start);
        toks_.push_back({Tok::Id, word, start});
      } else if (std::string_view("{}[];,=:").find(c) != std::string_view::npos) {
        toks_.push_back({Tok::Punct, std::string(1, c), p});
        ++p;
      } else {
        throw "unexpected character '" + std::string(1, c) + "' at offset " + std::to_string(p);
      }
    }
    toks_.push_back({Tok::End, "", s_.size()});
  }

  const Tok& peek() const { return toks_[i_]; }
  bool is(const char* punct) const { return peek().kind == Tok::Punct && peek().text == punct; }
  bool keyword(const char* kw) const {
    if (peek().kind != Tok::Id) return false;
    std::string lower;
    for (char c : peek().text) lower += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return lower == kw;
  }
  void expect(const char* punct) {
    if (!is(punct)) fail(std::string("expected '") + punct + "'");
    ++i_;
  }
  void id() {
    if (peek().kind != Tok::Id) fail("expected an identifier");
    ++i_;
  }

  void graph() {
    if (keyword("strict")) ++i_;
    if (keyword("digraph"))
      directed_ = true;
    else if (!keyword("graph"))
      fail("expected graph or digraph");
    ++i_;
    if (peek().kind == Tok::Id) ++i_;
    expect("{");
    stmt_list();
    expect("}");
  }

  void stmt_list() {
    while (!is("}") && peek().kind != Tok::End) {
      stmt();
      if (is(";")) ++i_;
    }
  }

  void attr_list() {
    while (is("[")) {
      ++i_;
      while (!is("]")) {
        id();
        if (is("=")) {
          ++i_;
          id();
        }
        if (is(";") || is(",")) ++i_;
      }
      ++i_;
    }
  }

  void subgraph() {
    if (keyword("subgraph")) {
      ++i_;
      if (peek().kind == Tok::Id) ++i_;
    }
    expect("{");
    stmt_list();
    expect("}");
  }

  void node_or_subgraph() {
    if (keyword("subgraph") || is("{")) {
      subgraph();
      return;
    }
    id();
    if (is(":")) {  // port
      ++i_;
      id();
      if (is(":")) {
        ++i_;
        id();
      }
    }
  }

  void stmt() {
    if (keyword("graph") || keyword("node") || keyword("edge")) {
      ++i_;
      if (!is("[")) fail("expected attribute list");
      attr_list();
      return;
    }
    if (peek().kind == Tok::Id && !keyword("subgraph") && toks_[i_ + 1].kind == Tok::Punct &&
        toks_[i_ + 1].text == "=") {
      i_ += 2;
      id();
      return;
    }
    node_or_subgraph();
    while (peek().kind == Tok::Arrow) {
      if ((peek().text == "->") != directed_) fail("edge operator does not match graph kind");
      ++i_;
      node_or_subgraph();
    }
    attr_list();
  }

  std::string_view s_;
  std::vector<Tok> toks_;
  std::size_t i_ = 0;
  bool directed_ = false;
};

inline std::string dot_error(std::string_view text) { return DotCheck(text).run(); }

}  // namespace oracle
