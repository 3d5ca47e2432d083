// Copyright 2026 The rdemon Authors
// SPDX-License-Identifier: Apache-2.0

#include "rdemon/lang/parser.hpp"

#include <functional>
#include <unordered_map>
#include <unordered_set>

namespace rdemon::lang {

namespace {

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  Specification parse_spec() {
    Specification spec;
    for (;;) {
      switch (peek().kind) {
        case TokenKind::End: return spec;
        case TokenKind::KwInput: parse_input(spec); break;
        case TokenKind::KwOutput: spec.outputs.push_back(parse_output()); break;
        case TokenKind::KwTrigger: spec.triggers.push_back(parse_trigger()); break;
        default: fail("unexpected " + std::string(describe(peek().kind)), {"'input'", "'output'", "'trigger'", "end of input"});
      }
    }
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    const std::size_t k = std::min(i_ + ahead, toks_.size() - 1);
    return toks_[k];
  }
  const Token& take() {
    const Token& t = toks_[i_];
    if (i_ + 1 < toks_.size()) ++i_;
    return t;
  }
  bool accept(TokenKind kind) {
    if (peek().kind != kind) return false;
    take();
    return true;
  }

  [[noreturn]] void fail(const std::string& msg, std::vector<std::string> expected) const {
    throw ParseError(peek().pos, msg, std::move(expected));
  }

  const Token& expect(TokenKind kind) {
    if (peek().kind != kind) {
      fail("unexpected " + std::string(describe(peek().kind)), {std::string(describe(kind))});
    }
    return take();
  }

  void expect_word(std::string_view word) {
    if (peek().kind != TokenKind::Ident || peek().text != word) {
      fail("unexpected " + std::string(describe(peek().kind)), {"'" + std::string(word) + "'"});
    }
    take();
  }

  ValueType parse_type() {
    const Token& t = peek();
    if (t.kind == TokenKind::Ident && t.text == "Float64") {
      take();
      return ValueType::Float64;
    }
    if (t.kind == TokenKind::Ident && t.text == "Bool") {
      take();
      return ValueType::Bool;
    }
    fail("unknown type", {"'Float64'", "'Bool'"});
  }

  void parse_input(Specification& spec) {
    expect(TokenKind::KwInput);
    std::vector<std::pair<std::string, SourcePos>> names;
    do {
      const Token& id = expect(TokenKind::Ident);
      names.emplace_back(id.text, id.pos);
    } while (accept(TokenKind::Comma));
    expect(TokenKind::Colon);
    const ValueType ty = parse_type();
    for (auto& [name, pos] : names) spec.inputs.push_back(InputDecl{name, ty, pos});
  }

  OutputDecl parse_output() {
    OutputDecl out;
    out.pos = expect(TokenKind::KwOutput).pos;
    out.name = expect(TokenKind::Ident).text;
    if (accept(TokenKind::Colon)) out.type = parse_type();
    if (accept(TokenKind::At)) {
      const Token& n = expect(TokenKind::Number);
      if (!(n.number > 0.0)) throw ParseError(n.pos, "rate must be positive", {});
      expect_word("Hz");
      out.rate_hz = n.number;
    }
    if (accept(TokenKind::KwFilter)) {
      expect(TokenKind::Colon);
      out.filter = parse_expr();
    }
    if (peek().kind != TokenKind::Assign) {
      std::vector<std::string> expected;
      if (!out.filter) {
        if (!out.rate_hz) {
          if (!out.type) expected.push_back("':'");
          expected.push_back("'@'");
        }
        expected.push_back("'filter'");
      }
      expected.push_back("':='");
      fail("unexpected " + std::string(describe(peek().kind)), std::move(expected));
    }
    take();
    out.body = parse_expr();
    return out;
  }

  TriggerDecl parse_trigger() {
    TriggerDecl trig;
    trig.pos = expect(TokenKind::KwTrigger).pos;
    trig.condition = parse_expr();
    if (peek().kind == TokenKind::String) trig.message = take().text;
    return trig;
  }

  // Precedence climbing: ∨ < ∧ < comparison < additive < multiplicative < unary < postfix.
  ExprPtr parse_expr() { return parse_or(); }

  ExprPtr parse_or() {
    auto lhs = parse_and();
    while (peek().kind == TokenKind::Or) {
      const SourcePos pos = take().pos;
      lhs = make_expr(Binary{BinaryOp::Or, std::move(lhs), parse_and()}, pos);
    }
    return lhs;
  }

  ExprPtr parse_and() {
    auto lhs = parse_comparison();
    while (peek().kind == TokenKind::And) {
      const SourcePos pos = take().pos;
      lhs = make_expr(Binary{BinaryOp::And, std::move(lhs), parse_comparison()}, pos);
    }
    return lhs;
  }

  static std::optional<BinaryOp> comparison_op(TokenKind k) {
    switch (k) {
      case TokenKind::Lt: return BinaryOp::Lt;
      case TokenKind::Le: return BinaryOp::Le;
      case TokenKind::Gt: return BinaryOp::Gt;
      case TokenKind::Ge: return BinaryOp::Ge;
      case TokenKind::EqEq: return BinaryOp::Eq;
      case TokenKind::NotEq: return BinaryOp::Ne;
      default: return std::nullopt;
    }
  }

  ExprPtr parse_comparison() {
    auto lhs = parse_additive();
    if (auto op = comparison_op(peek().kind)) {
      const SourcePos pos = take().pos;
      lhs = make_expr(Binary{*op, std::move(lhs), parse_additive()}, pos);
      if (comparison_op(peek().kind)) {
        fail("comparisons do not chain; add parentheses", {});
      }
    }
    return lhs;
  }

  ExprPtr parse_additive() {
    auto lhs = parse_multiplicative();
    for (;;) {
      BinaryOp op;
      if (peek().kind == TokenKind::Plus) {
        op = BinaryOp::Add;
      } else if (peek().kind == TokenKind::Minus) {
        op = BinaryOp::Sub;
      } else {
        return lhs;
      }
      const SourcePos pos = take().pos;
      lhs = make_expr(Binary{op, std::move(lhs), parse_multiplicative()}, pos);
    }
  }

  ExprPtr parse_multiplicative() {
    auto lhs = parse_unary();
    for (;;) {
      BinaryOp op;
      if (peek().kind == TokenKind::Star) {
        op = BinaryOp::Mul;
      } else if (peek().kind == TokenKind::Slash) {
        op = BinaryOp::Div;
      } else {
        return lhs;
      }
      const SourcePos pos = take().pos;
      lhs = make_expr(Binary{op, std::move(lhs), parse_unary()}, pos);
    }
  }

  ExprPtr parse_unary() {
    if (peek().kind == TokenKind::Minus) {
      const SourcePos pos = take().pos;
      return make_expr(Unary{UnaryOp::Neg, parse_unary()}, pos);
    }
    if (peek().kind == TokenKind::Not) {
      const SourcePos pos = take().pos;
      return make_expr(Unary{UnaryOp::Not, parse_unary()}, pos);
    }
    return parse_postfix();
  }

  ExprPtr parse_postfix() {
    auto e = parse_primary();
    while (peek().kind == TokenKind::Dot) {
      take();
      const Token& method = expect(TokenKind::Ident);
      if (method.text == "aggregate") {
        auto* ref = std::get_if<StreamRef>(&e->node);
        if (ref == nullptr) {
          throw ParseError(method.pos, "aggregate() must be applied to a stream name", {});
        }
        e = make_expr(parse_window_args(ref->name), e->pos);
      } else if (method.text == "defaults") {
        expect(TokenKind::LParen);
        expect_word("to");
        expect(TokenKind::Colon);
        Value fallback = parse_constant();
        expect(TokenKind::RParen);
        e = make_expr(DefaultExpr{std::move(e), fallback}, method.pos);
      } else {
        throw ParseError(method.pos, "unknown method '" + method.text + "'",
                         {"'aggregate'", "'defaults'"});
      }
    }
    return e;
  }

  Value parse_constant() {
    if (accept(TokenKind::KwTrue)) return true;
    if (accept(TokenKind::KwFalse)) return false;
    const bool negative = accept(TokenKind::Minus);
    if (peek().kind != TokenKind::Number) fail("expected a constant", {"number", "'true'", "'false'"});
    const double v = take().number;
    return negative ? -v : v;
  }

  WindowExpr parse_window_args(const std::string& stream) {
    WindowExpr w;
    w.stream = stream;
    expect(TokenKind::LParen);
    expect_word("over");
    expect(TokenKind::Colon);
    const Token& dur = expect(TokenKind::Number);
    double seconds = dur.number;
    if (peek().kind == TokenKind::Ident) {
      const std::string& unit = peek().text;
      if (unit == "s" || unit == "sec") {
        take();
      } else if (unit == "min") {
        take();
        seconds *= 60.0;
      } else if (unit == "h") {
        take();
        seconds *= 3600.0;
      } else {
        fail("unknown duration unit '" + unit + "'", {"'s'", "'min'", "'h'", "','"});
      }
    }
    if (!(seconds > 0.0)) throw ParseError(dur.pos, "window duration must be positive", {});
    w.duration_s = seconds;
    expect(TokenKind::Comma);
    expect_word("using");
    expect(TokenKind::Colon);
    w.fn = parse_aggregation();
    expect(TokenKind::RParen);
    return w;
  }

  Aggregation parse_aggregation() {
    static const std::unordered_map<std::string, AggregationKind> names = {
        {"avg", AggregationKind::Avg},     {"sum", AggregationKind::Sum},
        {"count", AggregationKind::Count}, {"min", AggregationKind::Min},
        {"max", AggregationKind::Max},     {"integral", AggregationKind::Integral},
    };
    const std::vector<std::string> expected = {"'avg'", "'sum'", "'count'", "'min'",
                                               "'max'", "'integral'", "'pctl'"};
    if (peek().kind != TokenKind::Ident) fail("expected an aggregation function", expected);
    const Token& name = take();
    if (name.text == "pctl") {
      expect(TokenKind::LParen);
      const Token& p = expect(TokenKind::Number);
      if (!(p.number > 0.0 && p.number < 100.0)) {
        throw ParseError(p.pos, "percentile must lie strictly between 0 and 100", {});
      }
      expect(TokenKind::RParen);
      return Aggregation{AggregationKind::Percentile, p.number};
    }
    auto it = names.find(name.text);
    if (it == names.end()) {
      throw ParseError(name.pos, "unknown aggregation '" + name.text + "'", expected);
    }
    return Aggregation{it->second, 0.0};
  }

  ExprPtr parse_primary() {
    const Token& t = peek();
    switch (t.kind) {
      case TokenKind::Number: {
        const Token& n = take();
        return make_expr(NumberLit{n.number}, n.pos);
      }
      case TokenKind::KwTrue: return make_expr(BoolLit{true}, take().pos);
      case TokenKind::KwFalse: return make_expr(BoolLit{false}, take().pos);
      case TokenKind::Ident: {
        const Token& id = take();
        return make_expr(StreamRef{id.text}, id.pos);
      }
      case TokenKind::LParen: {
        take();
        auto inner = parse_expr();
        expect(TokenKind::RParen);
        return inner;
      }
      case TokenKind::KwIf: {
        const SourcePos pos = take().pos;
        auto cond = parse_expr();
        expect(TokenKind::KwThen);
        auto then_branch = parse_expr();
        expect(TokenKind::KwElse);
        auto else_branch = parse_expr();
        return make_expr(Conditional{std::move(cond), std::move(then_branch), std::move(else_branch)}, pos);
      }
      default:
        fail("unexpected " + std::string(describe(t.kind)),
             {"number", "identifier", "'true'", "'false'", "'('", "'if'", "'-'", "'¬'"});
    }
  }

  std::vector<Token> toks_;
  std::size_t i_ = 0;
};

void for_each_reference(const Expr& e, const std::function<void(const std::string&, SourcePos)>& fn) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, StreamRef>) {
          fn(n.name, e.pos);
        } else if constexpr (std::is_same_v<T, WindowExpr>) {
          fn(n.stream, e.pos);
        } else if constexpr (std::is_same_v<T, Unary>) {
          for_each_reference(*n.operand, fn);
        } else if constexpr (std::is_same_v<T, Binary>) {
          for_each_reference(*n.lhs, fn);
          for_each_reference(*n.rhs, fn);
        } else if constexpr (std::is_same_v<T, DefaultExpr>) {
          for_each_reference(*n.expr, fn);
        } else if constexpr (std::is_same_v<T, Conditional>) {
          for_each_reference(*n.condition, fn);
          for_each_reference(*n.then_branch, fn);
          for_each_reference(*n.else_branch, fn);
        }
      },
      e.node);
}

void resolve_names(const Specification& spec) {
  std::unordered_set<std::string> declared;
  for (const auto& in : spec.inputs) {
    if (!declared.insert(in.name).second) throw DuplicateStream(in.pos, in.name);
  }
  for (const auto& out : spec.outputs) {
    if (!declared.insert(out.name).second) throw DuplicateStream(out.pos, out.name);
  }
  auto check = [&](const std::string& name, SourcePos pos) {
    if (!declared.contains(name)) throw UndeclaredStream(pos, name);
  };
  for (const auto& out : spec.outputs) {
    if (out.filter) for_each_reference(*out.filter, check);
    for_each_reference(*out.body, check);
  }
  for (const auto& trig : spec.triggers) for_each_reference(*trig.condition, check);
}

}  // namespace

Specification parse(std::string_view source) {
  Parser parser(tokenize(source));
  Specification spec = parser.parse_spec();
  resolve_names(spec);
  return spec;
}

}  // namespace rdemon::lang
