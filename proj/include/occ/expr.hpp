#pragma once

// Guard and effect expressions: integer/boolean/text values, variables,
// arithmetic, comparison and logical connectives.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "occ/diagnostics.hpp"

namespace occ {

enum class Type { Int, Text, Bool };

inline const char* to_string(Type t) {
  switch (t) {
    case Type::Int: return "int";
    case Type::Text: return "text";
    case Type::Bool: return "bool";
  }
  return "?";
}

using Value = std::variant<std::int64_t, bool, std::string>;
using Env = std::map<std::string, Value>;

inline Type type_of(const Value& v) {
  if (std::holds_alternative<std::int64_t>(v)) return Type::Int;
  if (std::holds_alternative<bool>(v)) return Type::Bool;
  return Type::Text;
}

inline std::string quote_text(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  return out + '"';
}

inline std::string to_string(const Value& v) {
  if (auto i = std::get_if<std::int64_t>(&v)) return std::to_string(*i);
  if (auto b = std::get_if<bool>(&v)) return *b ? "true" : "false";
  return quote_text(std::get<std::string>(v));
}

enum class Op { Neg, Not, Add, Sub, Eq, Ne, Lt, Le, Gt, Ge, And, Or };

inline const char* symbol(Op op) {
  switch (op) {
    case Op::Neg: return "-";
    case Op::Not: return "!";
    case Op::Add: return "+";
    case Op::Sub: return "-";
    case Op::Eq: return "==";
    case Op::Ne: return "!=";
    case Op::Lt: return "<";
    case Op::Le: return "<=";
    case Op::Gt: return ">";
    case Op::Ge: return ">=";
    case Op::And: return "&&";
    case Op::Or: return "||";
  }
  return "?";
}

inline int precedence(Op op) {
  switch (op) {
    case Op::Or: return 1;
    case Op::And: return 2;
    case Op::Eq:
    case Op::Ne: return 3;
    case Op::Lt:
    case Op::Le:
    case Op::Gt:
    case Op::Ge: return 4;
    case Op::Add:
    case Op::Sub: return 5;
    case Op::Neg:
    case Op::Not: return 6;
  }
  return 0;
}

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

/// Immutable expression tree node. Children are shared, so copies are cheap.
struct Expr {
  enum class Kind { Literal, Variable, Unary, Binary };

  Kind kind = Kind::Literal;
  Value literal{std::int64_t{0}};
  std::string name;
  Op op = Op::Add;
  ExprPtr lhs;
  ExprPtr rhs;
};

inline ExprPtr literal(Value v) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::Literal;
  e->literal = std::move(v);
  return e;
}
inline ExprPtr variable(std::string name) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::Variable;
  e->name = std::move(name);
  return e;
}
inline ExprPtr unary(Op op, ExprPtr operand) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::Unary;
  e->op = op;
  e->lhs = std::move(operand);
  return e;
}
inline ExprPtr binary(Op op, ExprPtr lhs, ExprPtr rhs) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::Binary;
  e->op = op;
  e->lhs = std::move(lhs);
  e->rhs = std::move(rhs);
  return e;
}

inline bool equal(const ExprPtr& a, const ExprPtr& b) {
  if (!a || !b) return !a && !b;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case Expr::Kind::Literal: return a->literal == b->literal;
    case Expr::Kind::Variable: return a->name == b->name;
    case Expr::Kind::Unary: return a->op == b->op && equal(a->lhs, b->lhs);
    case Expr::Kind::Binary: return a->op == b->op && equal(a->lhs, b->lhs) && equal(a->rhs, b->rhs);
  }
  return false;
}

namespace detail {
inline int node_precedence(const Expr& e) {
  if (e.kind == Expr::Kind::Unary || e.kind == Expr::Kind::Binary) return precedence(e.op);
  return 7;
}
}  // namespace detail

/// Canonical text form with the minimum parentheses needed to reparse to the
/// same tree (binary operators are left-associative).
inline std::string to_string(const ExprPtr& e) {
  if (!e) return "";
  switch (e->kind) {
    case Expr::Kind::Literal: return to_string(e->literal);
    case Expr::Kind::Variable: return e->name;
    case Expr::Kind::Unary: {
      std::string inner = to_string(e->lhs);
      if (detail::node_precedence(*e->lhs) < 6) inner = "(" + inner + ")";
      return std::string(symbol(e->op)) + inner;
    }
    case Expr::Kind::Binary: {
      const int p = precedence(e->op);
      std::string l = to_string(e->lhs);
      std::string r = to_string(e->rhs);
      if (detail::node_precedence(*e->lhs) < p) l = "(" + l + ")";
      if (detail::node_precedence(*e->rhs) <= p) r = "(" + r + ")";
      return l + " " + symbol(e->op) + " " + r;
    }
  }
  return "";
}

inline void collect_variables(const ExprPtr& e, std::set<std::string>& out) {
  if (!e) return;
  if (e->kind == Expr::Kind::Variable) out.insert(e->name);
  collect_variables(e->lhs, out);
  collect_variables(e->rhs, out);
}

inline std::set<std::string> variables_of(const ExprPtr& e) {
  std::set<std::string> out;
  collect_variables(e, out);
  return out;
}

/// `target := value`
struct Assignment {
  std::string target;
  ExprPtr value;
};

inline bool equal(const Assignment& a, const Assignment& b) {
  return a.target == b.target && equal(a.value, b.value);
}

inline std::string to_string(const Assignment& a) { return a.target + " := " + to_string(a.value); }

/// Static type of `e` given declared variable types. Reports
/// UndeclaredVariable and `mismatch_rule` (type mismatches).
inline Result<Type> typecheck(const ExprPtr& e, const std::map<std::string, Type>& vars,
                              const std::string& mismatch_rule = "GuardTypeError") {
  Diagnostics errors;
  auto mismatch = [&](const std::string& msg) { errors.push_back({mismatch_rule, msg, {}, to_string(e)}); };

  struct Checker {
    const std::map<std::string, Type>& vars;
    Diagnostics& errors;
    const std::string& rule;

    std::optional<Type> operator()(const ExprPtr& n) {
      switch (n->kind) {
        case Expr::Kind::Literal: return type_of(n->literal);
        case Expr::Kind::Variable: {
          auto it = vars.find(n->name);
          if (it == vars.end()) {
            errors.push_back({"UndeclaredVariable", "variable '" + n->name + "' is not declared", {}, n->name});
            return std::nullopt;
          }
          return it->second;
        }
        case Expr::Kind::Unary: {
          auto t = (*this)(n->lhs);
          if (!t) return std::nullopt;
          Type want = n->op == Op::Neg ? Type::Int : Type::Bool;
          if (*t != want) {
            errors.push_back({rule,
                              std::string("operator ") + symbol(n->op) + " expects " + occ::to_string(want) +
                                  ", got " + occ::to_string(*t),
                              {}, to_string(n)});
            return std::nullopt;
          }
          return want;
        }
        case Expr::Kind::Binary: {
          auto l = (*this)(n->lhs);
          auto r = (*this)(n->rhs);
          if (!l || !r) return std::nullopt;
          auto fail = [&](const std::string& msg) -> std::optional<Type> {
            errors.push_back({rule, msg, {}, to_string(n)});
            return std::nullopt;
          };
          switch (n->op) {
            case Op::Add:
            case Op::Sub:
              if (*l != Type::Int || *r != Type::Int)
                return fail(std::string("operator ") + symbol(n->op) + " expects int operands");
              return Type::Int;
            case Op::Lt:
            case Op::Le:
            case Op::Gt:
            case Op::Ge:
              if (*l != Type::Int || *r != Type::Int)
                return fail(std::string("operator ") + symbol(n->op) + " expects int operands");
              return Type::Bool;
            case Op::Eq:
            case Op::Ne:
              if (*l != *r) return fail(std::string("operator ") + symbol(n->op) + " compares different types");
              return Type::Bool;
            case Op::And:
            case Op::Or:
              if (*l != Type::Bool || *r != Type::Bool)
                return fail(std::string("operator ") + symbol(n->op) + " expects bool operands");
              return Type::Bool;
            default: return fail("unexpected operator");
          }
        }
      }
      return std::nullopt;
    }
  };

  Checker check{vars, errors, mismatch_rule};
  auto t = check(e);
  if (!errors.empty()) return errors;
  if (!t) {
    mismatch("ill-typed expression");
    return errors;
  }
  return *t;
}

/// Evaluates `e` under `env`. Throws Error(UnboundVariable) for a missing
/// variable and Error(type_rule) for a runtime type mismatch.
inline Value evaluate(const ExprPtr& e, const Env& env, const std::string& type_rule = "EffectTypeError") {
  switch (e->kind) {
    case Expr::Kind::Literal: return e->literal;
    case Expr::Kind::Variable: {
      auto it = env.find(e->name);
      if (it == env.end()) throw Error("UnboundVariable", "variable '" + e->name + "' has no value");
      return it->second;
    }
    case Expr::Kind::Unary: {
      Value v = evaluate(e->lhs, env, type_rule);
      if (e->op == Op::Neg) {
        if (auto i = std::get_if<std::int64_t>(&v)) return -*i;
      } else if (auto b = std::get_if<bool>(&v)) {
        return !*b;
      }
      throw Error(type_rule, "bad operand for " + std::string(symbol(e->op)) + " in " + to_string(e));
    }
    case Expr::Kind::Binary: {
      // && and || short-circuit.
      if (e->op == Op::And || e->op == Op::Or) {
        Value l = evaluate(e->lhs, env, type_rule);
        auto lb = std::get_if<bool>(&l);
        if (!lb) throw Error(type_rule, "non-boolean operand in " + to_string(e));
        if (e->op == Op::And && !*lb) return false;
        if (e->op == Op::Or && *lb) return true;
        Value r = evaluate(e->rhs, env, type_rule);
        auto rb = std::get_if<bool>(&r);
        if (!rb) throw Error(type_rule, "non-boolean operand in " + to_string(e));
        return *rb;
      }
      Value l = evaluate(e->lhs, env, type_rule);
      Value r = evaluate(e->rhs, env, type_rule);
      if (e->op == Op::Eq) {
        if (l.index() != r.index()) throw Error(type_rule, "== on different types in " + to_string(e));
        return l == r;
      }
      if (e->op == Op::Ne) {
        if (l.index() != r.index()) throw Error(type_rule, "!= on different types in " + to_string(e));
        return l != r;
      }
      auto li = std::get_if<std::int64_t>(&l);
      auto ri = std::get_if<std::int64_t>(&r);
      if (!li || !ri) throw Error(type_rule, "non-integer operand in " + to_string(e));
      switch (e->op) {
        case Op::Add: return *li + *ri;
        case Op::Sub: return *li - *ri;
        case Op::Lt: return *li < *ri;
        case Op::Le: return *li <= *ri;
        case Op::Gt: return *li > *ri;
        case Op::Ge: return *li >= *ri;
        default: break;
      }
      throw Error(type_rule, "unexpected operator in " + to_string(e));
    }
  }
  throw Error(type_rule, "malformed expression");
}

inline bool evaluate_guard(const ExprPtr& guard, const Env& env) {
  if (!guard) return true;
  Value v = evaluate(guard, env, "GuardTypeError");
  auto b = std::get_if<bool>(&v);
  if (!b) throw Error("GuardTypeError", "guard does not evaluate to a boolean: " + to_string(guard));
  return *b;
}

}  // namespace occ
