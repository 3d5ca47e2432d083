// Copyright 2026 The rdemon Authors
// SPDX-License-Identifier: Apache-2.0

#include "rdemon/lang/ast.hpp"

#include <cstdio>

namespace rdemon::lang {

std::string_view to_string(ValueType t) {
  return t == ValueType::Float64 ? "Float64" : "Bool";
}

ValueType type_of(const Value& v) {
  return std::holds_alternative<bool>(v) ? ValueType::Bool : ValueType::Float64;
}

std::string_view to_string(UnaryOp op) {
  return op == UnaryOp::Neg ? "-" : "¬";
}

std::string_view to_string(BinaryOp op) {
  switch (op) {
    case BinaryOp::Add: return "+";
    case BinaryOp::Sub: return "-";
    case BinaryOp::Mul: return "*";
    case BinaryOp::Div: return "/";
    case BinaryOp::Lt: return "<";
    case BinaryOp::Le: return "<=";
    case BinaryOp::Gt: return ">";
    case BinaryOp::Ge: return ">=";
    case BinaryOp::Eq: return "==";
    case BinaryOp::Ne: return "!=";
    case BinaryOp::And: return "∧";
    case BinaryOp::Or: return "∨";
  }
  return "?";
}

std::string to_string(const Aggregation& agg) {
  switch (agg.kind) {
    case AggregationKind::Avg: return "avg";
    case AggregationKind::Sum: return "sum";
    case AggregationKind::Count: return "count";
    case AggregationKind::Min: return "min";
    case AggregationKind::Max: return "max";
    case AggregationKind::Integral: return "integral";
    case AggregationKind::Percentile: {
      char buf[64];
      std::snprintf(buf, sizeof buf, "pctl(%g)", agg.percentile);
      return buf;
    }
  }
  return "?";
}

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

ExprPtr clone_or_null(const ExprPtr& e) { return e ? clone(*e) : nullptr; }

}  // namespace

ExprPtr clone(const Expr& e) {
  auto copy = std::visit(
      overloaded{
          [](const NumberLit& n) -> Expr::Node { return n; },
          [](const BoolLit& b) -> Expr::Node { return b; },
          [](const StreamRef& r) -> Expr::Node { return r; },
          [](const Unary& u) -> Expr::Node { return Unary{u.op, clone(*u.operand)}; },
          [](const Binary& b) -> Expr::Node {
            return Binary{b.op, clone(*b.lhs), clone(*b.rhs)};
          },
          [](const WindowExpr& w) -> Expr::Node { return w; },
          [](const DefaultExpr& d) -> Expr::Node { return DefaultExpr{clone(*d.expr), d.fallback}; },
          [](const Conditional& c) -> Expr::Node {
            return Conditional{clone(*c.condition), clone(*c.then_branch), clone(*c.else_branch)};
          },
      },
      e.node);
  auto out = std::make_unique<Expr>(NumberLit{}, e.pos);
  out->node = std::move(copy);
  out->id = e.id;
  return out;
}

bool structurally_equal(const Expr& a, const Expr& b) {
  if (a.node.index() != b.node.index()) return false;
  return std::visit(
      overloaded{
          [&](const NumberLit& n) { return n.value == std::get<NumberLit>(b.node).value; },
          [&](const BoolLit& v) { return v.value == std::get<BoolLit>(b.node).value; },
          [&](const StreamRef& r) { return r.name == std::get<StreamRef>(b.node).name; },
          [&](const Unary& u) {
            const auto& o = std::get<Unary>(b.node);
            return u.op == o.op && structurally_equal(*u.operand, *o.operand);
          },
          [&](const Binary& x) {
            const auto& o = std::get<Binary>(b.node);
            return x.op == o.op && structurally_equal(*x.lhs, *o.lhs) &&
                   structurally_equal(*x.rhs, *o.rhs);
          },
          [&](const WindowExpr& w) {
            const auto& o = std::get<WindowExpr>(b.node);
            return w.stream == o.stream && w.duration_s == o.duration_s && w.fn == o.fn;
          },
          [&](const DefaultExpr& d) {
            const auto& o = std::get<DefaultExpr>(b.node);
            return d.fallback == o.fallback && structurally_equal(*d.expr, *o.expr);
          },
          [&](const Conditional& c) {
            const auto& o = std::get<Conditional>(b.node);
            return structurally_equal(*c.condition, *o.condition) &&
                   structurally_equal(*c.then_branch, *o.then_branch) &&
                   structurally_equal(*c.else_branch, *o.else_branch);
          },
      },
      a.node);
}

Specification::Specification(const Specification& other)
    : inputs(other.inputs) {
  outputs.reserve(other.outputs.size());
  for (const auto& o : other.outputs) {
    outputs.push_back(OutputDecl{o.name, o.type, o.rate_hz, clone_or_null(o.filter),
                                 clone_or_null(o.body), o.pos});
  }
  triggers.reserve(other.triggers.size());
  for (const auto& t : other.triggers) {
    triggers.push_back(TriggerDecl{clone_or_null(t.condition), t.message, t.pos});
  }
}

Specification& Specification::operator=(const Specification& other) {
  if (this != &other) {
    Specification copy(other);
    *this = std::move(copy);
  }
  return *this;
}

namespace {

bool equal_or_both_null(const ExprPtr& a, const ExprPtr& b) {
  if (!a || !b) return !a && !b;
  return structurally_equal(*a, *b);
}

}  // namespace

bool structurally_equal(const Specification& a, const Specification& b) {
  if (a.inputs.size() != b.inputs.size() || a.outputs.size() != b.outputs.size() ||
      a.triggers.size() != b.triggers.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.inputs.size(); ++i) {
    if (a.inputs[i].name != b.inputs[i].name || a.inputs[i].type != b.inputs[i].type) return false;
  }
  for (std::size_t i = 0; i < a.outputs.size(); ++i) {
    const auto& x = a.outputs[i];
    const auto& y = b.outputs[i];
    if (x.name != y.name || x.type != y.type || x.rate_hz != y.rate_hz) return false;
    if (!equal_or_both_null(x.filter, y.filter) || !equal_or_both_null(x.body, y.body)) {
      return false;
    }
  }
  for (std::size_t i = 0; i < a.triggers.size(); ++i) {
    if (a.triggers[i].message != b.triggers[i].message ||
        !equal_or_both_null(a.triggers[i].condition, b.triggers[i].condition)) {
      return false;
    }
  }
  return true;
}

}  // namespace rdemon::lang
