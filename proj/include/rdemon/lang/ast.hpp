// Copyright 2026 The rdemon Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace rdemon::lang {

enum class ValueType { Float64, Bool };

std::string_view to_string(ValueType t);

/// A runtime value carried by a stream. Integers are represented as Float64.
using Value = std::variant<double, bool>;

ValueType type_of(const Value& v);

struct SourcePos {
  int line = 1;
  int column = 1;
};

enum class UnaryOp { Neg, Not };

enum class BinaryOp { Add, Sub, Mul, Div, Lt, Le, Gt, Ge, Eq, Ne, And, Or };

std::string_view to_string(UnaryOp op);
std::string_view to_string(BinaryOp op);

enum class AggregationKind { Avg, Sum, Count, Min, Max, Integral, Percentile };

struct Aggregation {
  AggregationKind kind = AggregationKind::Avg;
  double percentile = 0.0;  // only meaningful for Percentile, 0 < p < 100

  friend bool operator==(const Aggregation&, const Aggregation&) = default;
};

std::string to_string(const Aggregation& agg);

struct Expr;
using ExprPtr = std::unique_ptr<Expr>;

struct NumberLit {
  double value = 0.0;
};

struct BoolLit {
  bool value = false;
};

struct StreamRef {
  std::string name;
  int resolved = -1;  // stream id, filled in by the typechecker
};

struct Unary {
  UnaryOp op;
  ExprPtr operand;
};

struct Binary {
  BinaryOp op;
  ExprPtr lhs;
  ExprPtr rhs;
};

// `stream.aggregate(over: D, using: F)`
struct WindowExpr {
  std::string stream;
  double duration_s = 0.0;
  Aggregation fn;
  int resolved = -1;  // source stream id
  int slot = -1;      // window bookkeeping id
};

// `expr.defaults(to: c)`
struct DefaultExpr {
  ExprPtr expr;
  Value fallback;
};

struct Conditional {
  ExprPtr condition;
  ExprPtr then_branch;
  ExprPtr else_branch;
};

struct Expr {
  using Node = std::variant<NumberLit, BoolLit, StreamRef, Unary, Binary, WindowExpr,
                            DefaultExpr, Conditional>;

  Node node;
  SourcePos pos;
  int id = -1;  // dense node index assigned by the typechecker

  template <typename T>
  Expr(T n, SourcePos p = {}) : node(std::move(n)), pos(p) {}
};

template <typename T>
ExprPtr make_expr(T node, SourcePos pos = {}) {
  return std::make_unique<Expr>(std::move(node), pos);
}

ExprPtr clone(const Expr& e);

/// Structural equality; ignores source positions and typechecker bookkeeping.
bool structurally_equal(const Expr& a, const Expr& b);

struct InputDecl {
  std::string name;
  ValueType type = ValueType::Float64;
  SourcePos pos;
};

struct OutputDecl {
  std::string name;
  std::optional<ValueType> type;
  std::optional<double> rate_hz;
  ExprPtr filter;  // may be null
  ExprPtr body;
  SourcePos pos;
};

struct TriggerDecl {
  ExprPtr condition;
  std::optional<std::string> message;
  SourcePos pos;
};

struct Specification {
  std::vector<InputDecl> inputs;
  std::vector<OutputDecl> outputs;
  std::vector<TriggerDecl> triggers;

  Specification() = default;
  Specification(Specification&&) = default;
  Specification& operator=(Specification&&) = default;
  Specification(const Specification& other);
  Specification& operator=(const Specification& other);
};

bool structurally_equal(const Specification& a, const Specification& b);

}  // namespace rdemon::lang
