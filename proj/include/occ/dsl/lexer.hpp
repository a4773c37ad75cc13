#pragma once

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "occ/diagnostics.hpp"

namespace occ::dsl {

enum class Tok {
  Ident,
  Int,
  String,
  Time,  // ISO-8601 date or date-time
  LBrace,
  RBrace,
  LParen,
  RParen,
  Comma,
  Semicolon,
  Colon,
  Dot,
  DotDot,
  Arrow,      // ->
  FatArrow,   // =>
  Assign,     // :=
  Equals,     // =
  EqEq,
  NotEq,
  Less,
  LessEq,
  Greater,
  GreaterEq,
  Plus,
  Minus,
  Bang,
  AndAnd,
  OrOr,
  End,
  Invalid,
};

inline const char* describe(Tok t) {
  switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::Int: return "integer";
    case Tok::String: return "string";
    case Tok::Time: return "date";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::Comma: return "','";
    case Tok::Semicolon: return "';'";
    case Tok::Colon: return "':'";
    case Tok::Dot: return "'.'";
    case Tok::DotDot: return "'..'";
    case Tok::Arrow: return "'->'";
    case Tok::FatArrow: return "'=>'";
    case Tok::Assign: return "':='";
    case Tok::Equals: return "'='";
    case Tok::EqEq: return "'=='";
    case Tok::NotEq: return "'!='";
    case Tok::Less: return "'<'";
    case Tok::LessEq: return "'<='";
    case Tok::Greater: return "'>'";
    case Tok::GreaterEq: return "'>='";
    case Tok::Plus: return "'+'";
    case Tok::Minus: return "'-'";
    case Tok::Bang: return "'!'";
    case Tok::AndAnd: return "'&&'";
    case Tok::OrOr: return "'||'";
    case Tok::End: return "end of input";
    case Tok::Invalid: return "invalid character";
  }
  return "?";
}

struct Token {
  Tok kind = Tok::End;
  std::string text;  // identifier name, decoded string, digits, date
  SourceSpan span;
};

namespace detail {

inline bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
inline bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
inline bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

/// Length of an ISO date / date-time starting at `s`, or 0.
inline std::size_t date_length(std::string_view s) {
  auto digits_at = [&](std::size_t pos, std::size_t n) {
    if (pos + n > s.size()) return false;
    for (std::size_t i = pos; i < pos + n; ++i)
      if (!is_digit(s[i])) return false;
    return true;
  };
  if (!digits_at(0, 4) || s.size() < 10 || s[4] != '-' || !digits_at(5, 2) || s[7] != '-' || !digits_at(8, 2))
    return 0;
  std::size_t n = 10;
  if (s.size() >= 16 && s[10] == 'T' && digits_at(11, 2) && s[13] == ':' && digits_at(14, 2)) {
    n = 16;
    if (s.size() >= 19 && s[16] == ':' && digits_at(17, 2)) n = 19;
  }
  if (n < s.size() && is_ident_char(s[n])) return 0;
  return n;
}

}  // namespace detail

/// Splits `text` into tokens. `#` starts a comment running to end of line.
/// Lexical errors are reported and lexing continues.
inline std::vector<Token> tokenize(std::string_view text, const std::string& file, Diagnostics& errors) {
  std::vector<Token> out;
  int line = 1;
  int col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < text.size(); ++k, ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  auto push = [&](Tok kind, std::string t, std::size_t len) {
    out.push_back({kind, std::move(t), {file, line, col}});
    advance(len);
  };

  while (i < text.size()) {
    const char c = text[i];
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    const std::string_view rest = text.substr(i);
    auto starts = [&](std::string_view p) { return rest.substr(0, p.size()) == p; };

    if (detail::is_digit(c)) {
      if (auto n = detail::date_length(rest)) {
        push(Tok::Time, std::string(rest.substr(0, n)), n);
        continue;
      }
      std::size_t n = 0;
      while (n < rest.size() && detail::is_digit(rest[n])) ++n;
      if (n < rest.size() && detail::is_ident_start(rest[n])) {
        errors.push_back({"SyntaxError", "malformed number", {file, line, col}, std::string(rest.substr(0, n + 1))});
        advance(n);
        continue;
      }
      push(Tok::Int, std::string(rest.substr(0, n)), n);
      continue;
    }
    if (detail::is_ident_start(c)) {
      std::size_t n = 0;
      while (n < rest.size() && detail::is_ident_char(rest[n])) ++n;
      push(Tok::Ident, std::string(rest.substr(0, n)), n);
      continue;
    }
    if (c == '"') {
      SourceSpan span{file, line, col};
      std::string value;
      std::size_t n = 1;
      bool closed = false;
      while (n < rest.size()) {
        char d = rest[n];
        if (d == '"') {
          closed = true;
          ++n;
          break;
        }
        if (d == '\n') break;
        if (d == '\\' && n + 1 < rest.size()) {
          char e = rest[n + 1];
          value += e == 'n' ? '\n' : e == 't' ? '\t' : e;
          n += 2;
          continue;
        }
        value += d;
        ++n;
      }
      if (!closed) errors.push_back({"SyntaxError", "unterminated string", span, ""});
      out.push_back({Tok::String, std::move(value), span});
      advance(n);
      continue;
    }

    struct Punct {
      std::string_view text;
      Tok kind;
    };
    static constexpr Punct puncts[] = {
        {"->", Tok::Arrow},  {"=>", Tok::FatArrow}, {":=", Tok::Assign},   {"==", Tok::EqEq},
        {"!=", Tok::NotEq},  {"<=", Tok::LessEq},   {">=", Tok::GreaterEq}, {"&&", Tok::AndAnd},
        {"||", Tok::OrOr},   {"..", Tok::DotDot},   {"{", Tok::LBrace},     {"}", Tok::RBrace},
        {"(", Tok::LParen},  {")", Tok::RParen},    {",", Tok::Comma},      {";", Tok::Semicolon},
        {":", Tok::Colon},   {".", Tok::Dot},       {"=", Tok::Equals},     {"<", Tok::Less},
        {">", Tok::Greater}, {"+", Tok::Plus},      {"-", Tok::Minus},      {"!", Tok::Bang},
    };
    bool matched = false;
    for (const auto& p : puncts) {
      if (starts(p.text)) {
        push(p.kind, std::string(p.text), p.text.size());
        matched = true;
        break;
      }
    }
    if (matched) continue;

    // Skip one UTF-8 code point.
    std::size_t n = 1;
    while (n < rest.size() && (static_cast<unsigned char>(rest[n]) & 0xC0) == 0x80) ++n;
    errors.push_back({"SyntaxError", "unexpected character", {file, line, col}, std::string(rest.substr(0, n))});
    advance(n);
  }
  out.push_back({Tok::End, "", {file, line, col}});
  return out;
}

}  // namespace occ::dsl
