#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "asgmig/errors.hpp"

namespace asgmig::detail {

enum class TokenType { Identifier, Number, String, Symbol, Newline, End };

struct Token {
  TokenType type = TokenType::End;
  std::string text;
  int line = 1;
  int column = 1;
};

struct LexerStyle {
  bool line_oriented = false;  // MiniProc: newlines are tokens, ' comments, "" escapes
};

std::vector<Token> tokenize(std::string_view source, LexerStyle style);

/// Cursor over a token vector with the usual peek/expect helpers.
class TokenStream {
 public:
  TokenStream(std::vector<Token> tokens, bool case_insensitive)
      : tokens_(std::move(tokens)), case_insensitive_(case_insensitive) {}

  const Token& peek(std::size_t ahead = 0) const {
    std::size_t i = std::min(pos_ + ahead, tokens_.size() - 1);
    return tokens_[i];
  }
  const Token& next() {
    const Token& t = peek();
    if (pos_ < tokens_.size() - 1) ++pos_;
    return t;
  }
  bool at_end() const { return peek().type == TokenType::End; }

  bool is_keyword(std::string_view word, std::size_t ahead = 0) const;
  bool is_symbol(std::string_view sym, std::size_t ahead = 0) const {
    const Token& t = peek(ahead);
    return t.type == TokenType::Symbol && t.text == sym;
  }
  bool accept_keyword(std::string_view word) {
    if (!is_keyword(word)) return false;
    next();
    return true;
  }
  bool accept_symbol(std::string_view sym) {
    if (!is_symbol(sym)) return false;
    next();
    return true;
  }
  void expect_keyword(std::string_view word);
  void expect_symbol(std::string_view sym);
  Token expect_identifier(std::string_view what = "identifier");

  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError(message + " near '" + peek().text + "'", peek().line,
                     peek().column);
  }

 private:
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  bool case_insensitive_;
};

bool iequals(std::string_view a, std::string_view b) noexcept;

}  // namespace asgmig::detail
