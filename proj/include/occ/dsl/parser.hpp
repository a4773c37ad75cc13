#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "occ/dsl/document.hpp"
#include "occ/dsl/lexer.hpp"

namespace occ::dsl {

namespace detail {

inline const std::set<std::string, std::less<>>& top_keywords() {
  static const std::set<std::string, std::less<>> k{"var",  "thimac", "flow",     "trigger", "event",
                                                    "edge", "negedge", "queue",   "scenario", "timeline"};
  return k;
}

// Words that may follow an action inside a thimac body.
inline const std::set<std::string, std::less<>>& thimac_words() {
  static const std::set<std::string, std::less<>> k{"create",  "process", "release", "transfer",
                                                    "receive", "thimac",  "note",    "as"};
  return k;
}

class Parser {
 public:
  Parser(std::vector<Token> toks, Diagnostics& errors) : toks_(std::move(toks)), errors_(errors) {}

  Document document(const std::string& file) {
    Document doc;
    doc.file = file;
    while (!at(Tok::End)) {
      if (accept(Tok::Semicolon)) continue;
      try {
        statement(doc);
      } catch (const Abort&) {
        recover();
      }
    }
    return doc;
  }

  ExprPtr expression_only() {
    try {
      ExprPtr e = expression();
      if (!at(Tok::End)) fail("expected end of expression, found " + found());
      return e;
    } catch (const Abort&) {
      return nullptr;
    }
  }

 private:
  struct Abort {};

  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  bool at(Tok k) const { return peek().kind == k; }
  bool at_word(std::string_view w) const { return at(Tok::Ident) && peek().text == w; }

  Token next() {
    const Token& t = peek();
    if (t.kind == Tok::LBrace) ++depth_;
    if (t.kind == Tok::RBrace) --depth_;
    if (pos_ < toks_.size() - 1) ++pos_;
    return t;
  }
  bool accept(Tok k) {
    if (!at(k)) return false;
    next();
    return true;
  }
  bool accept_word(std::string_view w) {
    if (!at_word(w)) return false;
    next();
    return true;
  }

  std::string found() const {
    const Token& t = peek();
    if (t.kind == Tok::Ident || t.kind == Tok::Int || t.kind == Tok::Time) return "'" + t.text + "'";
    return describe(t.kind);
  }

  [[noreturn]] void fail(const std::string& message) {
    errors_.push_back({"SyntaxError", message, peek().span, peek().text});
    throw Abort{};
  }

  Token expect(Tok k, const char* what = nullptr) {
    if (!at(k)) fail(std::string("expected ") + (what ? what : describe(k)) + ", found " + found());
    return next();
  }
  void expect_word(std::string_view w) {
    if (!at_word(w)) fail("expected '" + std::string(w) + "', found " + found());
    next();
  }
  std::int64_t int_of(const Token& t) {
    try {
      return std::stoll(t.text);
    } catch (const std::out_of_range&) {
      errors_.push_back({"SyntaxError", "integer " + t.text + " is out of range", t.span, t.text});
      throw Abort{};
    }
  }
  std::string name(const char* what = "name") { return expect(Tok::Ident, what).text; }

  // Skips to the next top-level keyword outside any braces.
  void recover() {
    if (!at(Tok::End)) next();
    while (!at(Tok::End)) {
      if (depth_ <= 0 && at(Tok::Ident) && top_keywords().count(peek().text)) break;
      next();
    }
    depth_ = 0;
  }

  void declare(std::set<std::string>& names, const std::string& kind, const Token& tok) {
    if (!names.insert(tok.text).second)
      errors_.push_back({"DuplicateName", kind + " '" + tok.text + "' is already declared", tok.span, tok.text});
  }

  void statement(Document& doc) {
    const Token& t = peek();
    if (t.kind != Tok::Ident || !top_keywords().count(t.text))
      fail("expected a declaration, found " + found());
    const std::string kw = t.text;
    const SourceSpan span = t.span;
    next();
    if (kw == "var") return variable(doc, span);
    if (kw == "thimac") return thimac(doc, std::nullopt, span);
    if (kw == "flow") return flow(doc, span);
    if (kw == "trigger") return trigger(doc, span);
    if (kw == "event") return event(doc, span);
    if (kw == "edge") return edge(doc, span, EdgeKind::Sequence);
    if (kw == "negedge") return edge(doc, span, EdgeKind::Negative);
    if (kw == "queue") {
      Token n = expect(Tok::Ident, "queue name");
      declare(queues_, "queue", n);
      doc.queues.push_back({n.text, span});
      return;
    }
    if (kw == "scenario") return scenario(doc, span);
    if (kw == "timeline") return timeline(doc, span);
  }

  Value literal_value() {
    if (at(Tok::Minus)) {
      next();
      return -int_of(expect(Tok::Int, "integer"));
    }
    if (at(Tok::Int)) return int_of(next());
    if (at(Tok::String)) return next().text;
    if (accept_word("true")) return true;
    if (accept_word("false")) return false;
    fail("expected a literal value, found " + found());
  }

  std::int64_t integer() {
    bool neg = accept(Tok::Minus);
    std::int64_t v = int_of(expect(Tok::Int, "integer"));
    return neg ? -v : v;
  }

  void variable(Document& doc, const SourceSpan& span) {
    Token n = expect(Tok::Ident, "variable name");
    declare(vars_, "variable", n);
    VarDecl v;
    v.name = n.text;
    v.span = span;
    expect(Tok::Colon);
    std::string type = name("type");
    if (type == "int")
      v.type = Type::Int;
    else if (type == "text")
      v.type = Type::Text;
    else if (type == "bool")
      v.type = Type::Bool;
    else
      fail("unknown type '" + type + "'");
    if (accept(Tok::Equals)) v.initial = literal_value();
    if (accept_word("in")) {
      auto lo = integer();
      expect(Tok::DotDot);
      auto hi = integer();
      v.domain = std::make_pair(lo, hi);
    }
    doc.model.variables.push_back(std::move(v));
  }

  void thimac(Document& doc, std::optional<std::string> parent, const SourceSpan& span) {
    Token n = expect(Tok::Ident, "thimac name");
    declare(thimacs_, "thimac", n);
    const std::size_t slot = doc.model.thimacs.size();
    doc.model.thimacs.push_back({n.text, parent, {}, "", span});
    expect(Tok::LBrace);
    while (!accept(Tok::RBrace)) {
      if (accept(Tok::Semicolon)) continue;
      if (at(Tok::End)) fail("expected '}', found end of input");
      const Token kw = peek();
      if (kw.kind != Tok::Ident) fail("expected an action, 'thimac' or 'note', found " + found());
      next();
      if (kw.text == "thimac") {
        thimac(doc, n.text, kw.span);
        continue;
      }
      if (kw.text == "note") {
        doc.model.thimacs[slot].note = expect(Tok::String, "note text").text;
        continue;
      }
      ActionDecl a;
      a.span = kw.span;
      if (kw.text == "create") {
        a.kind = ActionKind::Create;
        if (at(Tok::String) || (at(Tok::Ident) && !thimac_words().count(peek().text))) a.entity = next().text;
      } else if (kw.text == "process") {
        a.kind = ActionKind::Process;
      } else if (kw.text == "release") {
        a.kind = ActionKind::Release;
      } else if (kw.text == "receive") {
        a.kind = ActionKind::Receive;
      } else if (kw.text == "transfer") {
        if (accept_word("in"))
          a.kind = ActionKind::TransferIn;
        else if (accept_word("out"))
          a.kind = ActionKind::TransferOut;
        else
          fail("expected 'in' or 'out' after 'transfer', found " + found());
      } else {
        pos_ -= 1;
        fail("unknown action '" + kw.text + "'");
      }
      if (accept_word("as")) a.name = name("action name");
      doc.model.thimacs[slot].actions.push_back(std::move(a));
    }
  }

  std::string action_ref() {
    std::string t = name("thimac name");
    expect(Tok::Dot);
    return t + "." + name("action name");
  }

  void flow(Document& doc, const SourceSpan& span) {
    std::string label;
    if (at(Tok::Ident) && peek(1).kind == Tok::Colon) {
      label = next().text;
      next();
    }
    SourceSpan from_span = peek().span;
    std::string from = action_ref();
    expect(Tok::Arrow);
    do {
      SourceSpan to_span = peek().span;
      std::string to = action_ref();
      doc.model.flows.push_back({from, to, label, from_span.known() ? from_span : span});
      from = to;
      from_span = to_span;
    } while (accept(Tok::Arrow));
  }

  void trigger(Document& doc, const SourceSpan& span) {
    SourceSpan from_span = peek().span;
    std::string from = action_ref();
    if (!accept(Tok::Arrow) && !accept(Tok::FatArrow)) fail("expected '->', found " + found());
    std::string to = action_ref();
    doc.model.triggers.push_back({from, to, "", from_span.known() ? from_span : span});
  }

  void event(Document& doc, const SourceSpan& span) {
    Token id = expect(Tok::Ident, "event id");
    declare(events_, "event", id);
    EventDecl e;
    e.id = id.text;
    e.span = span;
    if (at(Tok::String)) e.label = next().text;
    expect(Tok::Equals);
    expect_word("region");
    expect(Tok::LBrace);
    if (!at(Tok::RBrace)) {
      do {
        std::string from = action_ref();
        if (!at(Tok::Arrow) && !at(Tok::FatArrow)) {
          e.actions.push_back(from);
          continue;
        }
        while (at(Tok::Arrow) || at(Tok::FatArrow)) {
          ArcKind kind = next().kind == Tok::Arrow ? ArcKind::Flow : ArcKind::Trigger;
          std::string to = action_ref();
          e.arcs.push_back({kind, from, to});
          from = to;
        }
      } while (accept(Tok::Comma));
    }
    expect(Tok::RBrace);
    for (;;) {
      if (accept_word("effect")) {
        do {
          std::string target = name("variable name");
          expect(Tok::Assign);
          e.effects.push_back({target, expression()});
        } while (accept(Tok::Comma));
      } else if (accept_word("guard")) {
        if (e.guard) fail("event '" + e.id + "' already has a guard");
        e.guard = expression();
      } else if (accept_word("external")) {
        e.external = true;
      } else if (accept_word("note")) {
        e.note = expect(Tok::String, "note text").text;
      } else {
        break;
      }
    }
    doc.events.push_back(std::move(e));
  }

  void edge(Document& doc, const SourceSpan& span, EdgeKind kind) {
    std::vector<std::string> chain{name("event id")};
    expect(Tok::Arrow);
    if (kind == EdgeKind::Negative) {
      expect_word("revert");
      chain.push_back(name("event id"));
    } else {
      do chain.push_back(name("event id"));
      while (accept(Tok::Arrow));
    }
    ExprPtr guard;
    if (accept_word("guard")) {
      if (chain.size() > 2) fail("a guarded edge must have a single step");
      guard = expression();
    }
    for (std::size_t i = 0; i + 1 < chain.size(); ++i) doc.edges.push_back({chain[i], chain[i + 1], kind, guard, span});
  }

  void scenario(Document& doc, const SourceSpan& span) {
    if (!at(Tok::String) && !at(Tok::Ident)) fail("expected scenario name, found " + found());
    Token n = next();
    declare(scenarios_, "scenario", n);
    ScenarioDecl s;
    s.name = n.text;
    s.span = span;
    expect(Tok::LBrace);
    while (!accept(Tok::RBrace)) {
      if (accept(Tok::Semicolon)) continue;
      if (accept_word("bind")) {
        std::string var = name("variable name");
        expect(Tok::Equals);
        s.bindings.emplace_back(var, literal_value());
      } else if (accept_word("stimulus")) {
        std::string ev = name("event id");
        expect_word("at");
        s.stimuli.push_back({ev, integer()});
      } else {
        fail("expected 'bind' or 'stimulus', found " + found());
      }
    }
    doc.scenarios.push_back(std::move(s));
  }

  TimePoint time_value() {
    Token t = expect(Tok::Time, "date");
    auto tp = parse_time(t.text);
    if (!tp) {
      errors_.push_back({"InvalidTime", "'" + t.text + "' is not a valid date", t.span, t.text});
      throw Abort{};
    }
    return *tp;
  }

  void timeline(Document& doc, const SourceSpan& span) {
    Token n = expect(Tok::Ident, "timeline name");
    declare(timelines_, "timeline", n);
    Timeline tl;
    tl.name = n.text;
    tl.span = span;
    expect(Tok::LBrace);
    while (!accept(Tok::RBrace)) {
      if (accept(Tok::Semicolon)) continue;
      ClinicalEvent e;
      e.span = peek().span;
      expect_word("event");
      e.id = name("event id");
      if (accept(Tok::Colon)) {
        Token cat = expect(Tok::Ident, "category");
        auto c = category_from(cat.text);
        if (!c) {
          pos_ -= 1;
          fail("unknown category '" + cat.text + "'");
        }
        e.category = *c;
      }
      if (at(Tok::String)) e.label = next().text;
      if (accept_word("at")) {
        e.anchor = TimeAnchor::instant(time_value());
      } else if (accept_word("from")) {
        TimePoint s = time_value();
        expect_word("to");
        e.anchor = TimeAnchor::interval(s, time_value());
      } else if (accept_word("after")) {
        e.anchor = TimeAnchor::after(time_value());
      } else if (accept_word("unknown")) {
        e.anchor = TimeAnchor::unknown();
      } else {
        fail("expected 'at', 'from', 'after' or 'unknown', found " + found());
      }
      tl.events.push_back(std::move(e));
    }
    doc.timelines.push_back(std::move(tl));
  }

  // expression := or
  ExprPtr expression() { return binary_level(1); }

  std::optional<Op> binary_op(int level) const {
    const Tok k = peek().kind;
    switch (level) {
      case 1: return k == Tok::OrOr ? std::optional(Op::Or) : std::nullopt;
      case 2: return k == Tok::AndAnd ? std::optional(Op::And) : std::nullopt;
      case 3:
        if (k == Tok::EqEq) return Op::Eq;
        if (k == Tok::NotEq) return Op::Ne;
        return std::nullopt;
      case 4:
        if (k == Tok::Less) return Op::Lt;
        if (k == Tok::LessEq) return Op::Le;
        if (k == Tok::Greater) return Op::Gt;
        if (k == Tok::GreaterEq) return Op::Ge;
        return std::nullopt;
      case 5:
        if (k == Tok::Plus) return Op::Add;
        if (k == Tok::Minus) return Op::Sub;
        return std::nullopt;
    }
    return std::nullopt;
  }

  ExprPtr binary_level(int level) {
    if (level > 5) return unary_expr();
    ExprPtr lhs = binary_level(level + 1);
    while (auto op = binary_op(level)) {
      next();
      lhs = binary(*op, lhs, binary_level(level + 1));
    }
    return lhs;
  }

  ExprPtr unary_expr() {
    if (accept(Tok::Minus)) {
      ExprPtr operand = unary_expr();
      if (operand->kind == Expr::Kind::Literal)
        if (auto i = std::get_if<std::int64_t>(&operand->literal)) return literal(-*i);
      return unary(Op::Neg, operand);
    }
    if (accept(Tok::Bang)) return unary(Op::Not, unary_expr());
    return primary();
  }

  ExprPtr primary() {
    if (accept(Tok::LParen)) {
      ExprPtr e = expression();
      expect(Tok::RParen);
      return e;
    }
    if (at(Tok::Int)) return literal(int_of(next()));
    if (at(Tok::String)) return literal(next().text);
    if (accept_word("true")) return literal(true);
    if (accept_word("false")) return literal(false);
    if (at(Tok::Ident)) return occ::variable(next().text);
    fail("expected an expression, found " + found());
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  int depth_ = 0;
  Diagnostics& errors_;
  std::set<std::string> vars_, thimacs_, events_, queues_, scenarios_, timelines_;
};

}  // namespace detail

/// Parses a `.tm` document. All syntax errors are collected; parsing resumes
/// at the next top-level declaration after each one.
inline Result<Document> parse(std::string_view text, const std::string& file = "<input>") {
  Diagnostics errors;
  auto toks = tokenize(text, file, errors);
  detail::Parser p(std::move(toks), errors);
  Document doc = p.document(file);
  if (!errors.empty()) return errors;
  return doc;
}

/// Parses a standalone guard or effect expression.
inline Result<ExprPtr> parse_expression(std::string_view text) {
  Diagnostics errors;
  auto toks = tokenize(text, "<expr>", errors);
  detail::Parser p(std::move(toks), errors);
  ExprPtr e = p.expression_only();
  if (!errors.empty() || !e) {
    if (errors.empty()) errors.push_back({"SyntaxError", "empty expression", {}, ""});
    return errors;
  }
  return e;
}

}  // namespace occ::dsl
