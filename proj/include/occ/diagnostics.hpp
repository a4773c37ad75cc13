#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace occ {

/// Location of a declaration or error inside a source file. Line and column
/// are 1-based; a default-constructed span means "no source" (programmatic
/// construction).
struct SourceSpan {
  std::string file;
  int line = 0;
  int column = 0;

  bool known() const { return line >= 1 && column >= 1; }
  friend bool operator==(const SourceSpan&, const SourceSpan&) = default;
};

inline std::string to_string(const SourceSpan& span) {
  std::string out = span.file.empty() ? std::string("<input>") : span.file;
  out += ':' + std::to_string(span.line) + ':' + std::to_string(span.column);
  return out;
}

/// One rule violation or error. `rule` is a stable machine-readable name
/// (IllegalAdjacency, UnknownReference, ...), `subject` the offending id.
struct Diagnostic {
  std::string rule;
  std::string message;
  SourceSpan span;
  std::string subject;
  bool warning = false;

  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

inline std::ostream& operator<<(std::ostream& os, const Diagnostic& d) {
  return os << to_string(d.span) << ' ' << d.rule << ' ' << d.message;
}

using Diagnostics = std::vector<Diagnostic>;

inline bool has_rule(const Diagnostics& ds, std::string_view rule) {
  for (const auto& d : ds)
    if (d.rule == rule) return true;
  return false;
}

/// Either a value or the complete list of errors that prevented it.
template <typename T>
class Result {
 public:
  Result(T value) : data_(std::move(value)) {}  // NOLINT(google-explicit-constructor)
  Result(Diagnostics errors) : data_(std::move(errors)) {}  // NOLINT
  Result(Diagnostic error) : data_(Diagnostics{std::move(error)}) {}  // NOLINT

  bool ok() const { return std::holds_alternative<T>(data_); }
  explicit operator bool() const { return ok(); }

  const T& value() const& {
    if (!ok()) throw std::logic_error("Result::value() on error: " + first_error());
    return std::get<T>(data_);
  }
  T& value() & {
    if (!ok()) throw std::logic_error("Result::value() on error: " + first_error());
    return std::get<T>(data_);
  }
  T&& value() && {
    if (!ok()) throw std::logic_error("Result::value() on error: " + first_error());
    return std::get<T>(std::move(data_));
  }

  const Diagnostics& errors() const {
    static const Diagnostics none;
    return ok() ? none : std::get<Diagnostics>(data_);
  }

  /// "Rule: message" of the first error; empty for a value.
  std::string first_error() const {
    if (ok()) return {};
    const auto& es = std::get<Diagnostics>(data_);
    return es.empty() ? std::string("<no diagnostics>") : es.front().rule + ": " + es.front().message;
  }

 private:
  std::variant<T, Diagnostics> data_;
};

/// Runtime failure of an operation (engine, timeline lookup, queue).
class Error : public std::runtime_error {
 public:
  Error(std::string rule, const std::string& message, SourceSpan span = {})
      : std::runtime_error(rule + ": " + message), rule_(std::move(rule)), span_(std::move(span)) {}

  const std::string& rule() const { return rule_; }
  const SourceSpan& span() const { return span_; }

 private:
  std::string rule_;
  SourceSpan span_;
};

}  // namespace occ
