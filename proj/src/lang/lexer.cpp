// Copyright 2026 The rdemon Authors
// SPDX-License-Identifier: Apache-2.0

#include <cctype>
#include <charconv>
#include <unordered_map>

#include "rdemon/lang/parser.hpp"

namespace rdemon::lang {

std::string_view describe(TokenKind kind) {
  switch (kind) {
    case TokenKind::End: return "end of input";
    case TokenKind::Ident: return "identifier";
    case TokenKind::Number: return "number";
    case TokenKind::String: return "string";
    case TokenKind::KwInput: return "'input'";
    case TokenKind::KwOutput: return "'output'";
    case TokenKind::KwTrigger: return "'trigger'";
    case TokenKind::KwFilter: return "'filter'";
    case TokenKind::KwIf: return "'if'";
    case TokenKind::KwThen: return "'then'";
    case TokenKind::KwElse: return "'else'";
    case TokenKind::KwTrue: return "'true'";
    case TokenKind::KwFalse: return "'false'";
    case TokenKind::Comma: return "','";
    case TokenKind::Colon: return "':'";
    case TokenKind::Assign: return "':='";
    case TokenKind::At: return "'@'";
    case TokenKind::Dot: return "'.'";
    case TokenKind::LParen: return "'('";
    case TokenKind::RParen: return "')'";
    case TokenKind::Plus: return "'+'";
    case TokenKind::Minus: return "'-'";
    case TokenKind::Star: return "'*'";
    case TokenKind::Slash: return "'/'";
    case TokenKind::Lt: return "'<'";
    case TokenKind::Le: return "'<='";
    case TokenKind::Gt: return "'>'";
    case TokenKind::Ge: return "'>='";
    case TokenKind::EqEq: return "'=='";
    case TokenKind::NotEq: return "'!='";
    case TokenKind::And: return "'∧'";
    case TokenKind::Or: return "'∨'";
    case TokenKind::Not: return "'¬'";
  }
  return "token";
}

namespace {

const std::unordered_map<std::string_view, TokenKind>& keywords() {
  static const std::unordered_map<std::string_view, TokenKind> table = {
      {"input", TokenKind::KwInput},     {"output", TokenKind::KwOutput},
      {"trigger", TokenKind::KwTrigger}, {"filter", TokenKind::KwFilter},
      {"if", TokenKind::KwIf},           {"then", TokenKind::KwThen},
      {"else", TokenKind::KwElse},       {"true", TokenKind::KwTrue},
      {"false", TokenKind::KwFalse},
  };
  return table;
}

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_trivia();
      Token tok;
      tok.pos = pos_;
      if (at_end()) {
        tok.kind = TokenKind::End;
        out.push_back(std::move(tok));
        return out;
      }
      lex_one(tok);
      out.push_back(std::move(tok));
    }
  }

 private:
  bool at_end() const { return i_ >= src_.size(); }
  char peek(std::size_t ahead = 0) const {
    return i_ + ahead < src_.size() ? src_[i_ + ahead] : '\0';
  }
  bool starts_with(std::string_view s) const { return src_.substr(i_).starts_with(s); }

  void advance(std::size_t n = 1) {
    for (std::size_t k = 0; k < n && !at_end(); ++k) {
      const auto c = static_cast<unsigned char>(src_[i_++]);
      if (c == '\n') {
        ++pos_.line;
        pos_.column = 1;
      } else if ((c & 0xC0) != 0x80) {
        ++pos_.column;
      }
    }
  }

  void skip_trivia() {
    while (!at_end()) {
      const char c = peek();
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else if (c == '/' && peek(1) == '/') {
        while (!at_end() && peek() != '\n') advance();
      } else {
        return;
      }
    }
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(pos_, msg, {});
  }

  void lex_one(Token& tok) {
    const char c = peek();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = i_;
      while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_') advance();
      tok.text = std::string(src_.substr(start, i_ - start));
      auto kw = keywords().find(tok.text);
      tok.kind = kw == keywords().end() ? TokenKind::Ident : kw->second;
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      lex_number(tok);
      return;
    }
    if (c == '"') {
      lex_string(tok);
      return;
    }
    struct Punct {
      std::string_view text;
      TokenKind kind;
    };
    static constexpr Punct puncts[] = {
        {":=", TokenKind::Assign}, {"<=", TokenKind::Le},       {">=", TokenKind::Ge},
        {"==", TokenKind::EqEq},   {"!=", TokenKind::NotEq},    {"&&", TokenKind::And},
        {"||", TokenKind::Or},     {"∧", TokenKind::And},  {"∨", TokenKind::Or},
        {"¬", TokenKind::Not}, {",", TokenKind::Comma},    {":", TokenKind::Colon},
        {"@", TokenKind::At},      {".", TokenKind::Dot},       {"(", TokenKind::LParen},
        {")", TokenKind::RParen},  {"+", TokenKind::Plus},      {"-", TokenKind::Minus},
        {"*", TokenKind::Star},    {"/", TokenKind::Slash},     {"<", TokenKind::Lt},
        {">", TokenKind::Gt},      {"!", TokenKind::Not},
    };
    for (const auto& p : puncts) {
      if (starts_with(p.text)) {
        tok.kind = p.kind;
        tok.text = std::string(p.text);
        advance(p.text.size());
        return;
      }
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  void lex_number(Token& tok) {
    const std::size_t start = i_;
    while (std::isdigit(static_cast<unsigned char>(peek()))) advance();
    if (peek() == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
      advance();
      while (std::isdigit(static_cast<unsigned char>(peek()))) advance();
    }
    if (peek() == 'e' || peek() == 'E') {
      std::size_t k = 1;
      if (peek(k) == '+' || peek(k) == '-') ++k;
      if (std::isdigit(static_cast<unsigned char>(peek(k)))) {
        advance(k);
        while (std::isdigit(static_cast<unsigned char>(peek()))) advance();
      }
    }
    tok.kind = TokenKind::Number;
    tok.text = std::string(src_.substr(start, i_ - start));
    const auto* first = tok.text.data();
    const auto* last = first + tok.text.size();
    auto [ptr, ec] = std::from_chars(first, last, tok.number);
    if (ec != std::errc{} || ptr != last) {
      throw ParseError(tok.pos, "malformed number '" + tok.text + "'", {});
    }
  }

  void lex_string(Token& tok) {
    advance();  // opening quote
    std::string value;
    for (;;) {
      if (at_end() || peek() == '\n') fail("unterminated string literal");
      const char c = peek();
      if (c == '"') {
        advance();
        break;
      }
      if (c == '\\') {
        advance();
        switch (peek()) {
          case 'n': value += '\n'; break;
          case 't': value += '\t'; break;
          case '"': value += '"'; break;
          case '\\': value += '\\'; break;
          default: fail("unknown escape sequence");
        }
        advance();
        continue;
      }
      value += c;
      advance();
    }
    tok.kind = TokenKind::String;
    tok.text = std::move(value);
  }

  std::string_view src_;
  std::size_t i_ = 0;
  SourcePos pos_;
};

}  // namespace

std::vector<Token> tokenize(std::string_view source) { return Lexer(source).run(); }

}  // namespace rdemon::lang
