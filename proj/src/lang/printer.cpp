// Copyright 2026 The rdemon Authors
// SPDX-License-Identifier: Apache-2.0

#include "rdemon/lang/printer.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

namespace rdemon::lang {

std::string format_number(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  std::string s(buf, end);
  if (std::isfinite(v) && s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

std::string format_duration(double seconds) {
  std::string s = format_number(seconds);
  if (s.size() > 2 && s.ends_with(".0")) s.resize(s.size() - 2);
  return s;
}

namespace {

// Binding strength; higher binds tighter.
enum Prec : int { kCond = 0, kOr = 1, kAnd = 2, kCmp = 3, kAdd = 4, kMul = 5, kUnary = 6, kPostfix = 7 };

int precedence(BinaryOp op) {
  switch (op) {
    case BinaryOp::Or: return kOr;
    case BinaryOp::And: return kAnd;
    case BinaryOp::Add:
    case BinaryOp::Sub: return kAdd;
    case BinaryOp::Mul:
    case BinaryOp::Div: return kMul;
    default: return kCmp;
  }
}

int precedence(const Expr& e) {
  if (const auto* b = std::get_if<Binary>(&e.node)) return precedence(b->op);
  if (std::holds_alternative<Unary>(e.node)) return kUnary;
  if (std::holds_alternative<Conditional>(e.node)) return kCond;
  return kPostfix;
}

std::string format_value(const Value& v) {
  if (const auto* b = std::get_if<bool>(&v)) return *b ? "true" : "false";
  return format_number(std::get<double>(v));
}

void emit(std::ostream& os, const Expr& e, int min_prec);

void emit_wrapped(std::ostream& os, const Expr& e, int min_prec) {
  if (precedence(e) < min_prec) {
    os << '(';
    emit(os, e, kCond);
    os << ')';
  } else {
    emit(os, e, min_prec);
  }
}

void emit(std::ostream& os, const Expr& e, int /*min_prec*/) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, NumberLit>) {
          os << format_number(n.value);
        } else if constexpr (std::is_same_v<T, BoolLit>) {
          os << (n.value ? "true" : "false");
        } else if constexpr (std::is_same_v<T, StreamRef>) {
          os << n.name;
        } else if constexpr (std::is_same_v<T, Unary>) {
          os << (n.op == UnaryOp::Neg ? "-" : "¬");
          emit_wrapped(os, *n.operand, kUnary);
        } else if constexpr (std::is_same_v<T, Binary>) {
          const int p = precedence(n.op);
          // Left-associative chains keep the lhs bare; comparisons never chain.
          emit_wrapped(os, *n.lhs, p == kCmp ? p + 1 : p);
          os << ' ' << to_string(n.op) << ' ';
          emit_wrapped(os, *n.rhs, p + 1);
        } else if constexpr (std::is_same_v<T, WindowExpr>) {
          os << n.stream << ".aggregate(over: " << format_duration(n.duration_s)
             << ", using: " << to_string(n.fn) << ')';
        } else if constexpr (std::is_same_v<T, DefaultExpr>) {
          emit_wrapped(os, *n.expr, kPostfix);
          os << ".defaults(to: " << format_value(n.fallback) << ')';
        } else if constexpr (std::is_same_v<T, Conditional>) {
          os << "if ";
          emit(os, *n.condition, kCond);
          os << " then ";
          emit(os, *n.then_branch, kCond);
          os << " else ";
          emit(os, *n.else_branch, kCond);
        }
      },
      e.node);
}

}  // namespace

std::string print(const Expr& e) {
  std::ostringstream os;
  emit(os, e, kCond);
  return os.str();
}

std::string print(const Specification& spec) {
  std::ostringstream os;
  for (const auto& in : spec.inputs) {
    os << "input " << in.name << ": " << to_string(in.type) << '\n';
  }
  for (const auto& out : spec.outputs) {
    os << "output " << out.name;
    if (out.type) os << " : " << to_string(*out.type);
    if (out.rate_hz) os << " @" << format_number(*out.rate_hz) << "Hz";
    if (out.filter) os << " filter: " << print(*out.filter);
    os << " := " << print(*out.body) << '\n';
  }
  for (const auto& trig : spec.triggers) {
    os << "trigger " << print(*trig.condition);
    if (trig.message) {
      os << " \"";
      for (char c : *trig.message) {
        switch (c) {
          case '"': os << "\\\""; break;
          case '\\': os << "\\\\"; break;
          case '\n': os << "\\n"; break;
          case '\t': os << "\\t"; break;
          default: os << c;
        }
      }
      os << '"';
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace rdemon::lang
