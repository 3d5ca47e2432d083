// Copyright 2026 The rdemon Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "rdemon/lang/ast.hpp"
#include "rdemon/lang/errors.hpp"

namespace rdemon::lang {

enum class TokenKind {
  End,
  Ident,
  Number,
  String,
  // keywords
  KwInput,
  KwOutput,
  KwTrigger,
  KwFilter,
  KwIf,
  KwThen,
  KwElse,
  KwTrue,
  KwFalse,
  // punctuation
  Comma,
  Colon,
  Assign,  // :=
  At,
  Dot,
  LParen,
  RParen,
  Plus,
  Minus,
  Star,
  Slash,
  Lt,
  Le,
  Gt,
  Ge,
  EqEq,
  NotEq,
  And,  // ∧ or &&
  Or,   // ∨ or ||
  Not,  // ¬ or !
};

std::string_view describe(TokenKind kind);

struct Token {
  TokenKind kind = TokenKind::End;
  std::string text;  // identifier name, string contents, or number lexeme
  double number = 0.0;
  SourcePos pos;
};

/// Splits specification source into tokens. `//` starts a line comment.
std::vector<Token> tokenize(std::string_view source);

/// Parses specification source and resolves stream names.
///
/// Throws ParseError on malformed input, DuplicateStream when a name is
/// declared twice and UndeclaredStream when an expression references a name
/// that is never declared.
Specification parse(std::string_view source);

}  // namespace rdemon::lang
