#include "lexer.hpp"

#include <array>
#include <cctype>

namespace asgmig::detail {

bool iequals(std::string_view a, std::string_view b) noexcept {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::tolower(static_cast<unsigned char>(a[i])) !=
        std::tolower(static_cast<unsigned char>(b[i])))
      return false;
  return true;
}

namespace {

constexpr std::array<std::string_view, 7> kTwoCharSymbols = {"<>", "<=", ">=", "==",
                                                             "!=", "&&", "||"};
constexpr std::string_view kOneCharSymbols = "(),.:;{}=+-*/&<>!";

bool ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

}  // namespace

std::vector<Token> tokenize(std::string_view src, LexerStyle style) {
  std::vector<Token> out;
  int line = 1;
  int col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < src.size(); ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  auto push = [&](TokenType type, std::string text, int l, int c) {
    out.push_back(Token{type, std::move(text), l, c});
  };

  while (i < src.size()) {
    char c = src[i];
    int l = line, co = col;
    if (c == '\n') {
      if (style.line_oriented &&
          (out.empty() || out.back().type != TokenType::Newline))
        push(TokenType::Newline, "\\n", l, co);
      advance(1);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if ((style.line_oriented && c == '\'') ||
        (!style.line_oriented && c == '/' && i + 1 < src.size() && src[i + 1] == '/')) {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    if (ident_start(c)) {
      std::size_t start = i;
      while (i < src.size() && ident_char(src[i])) advance(1);
      push(TokenType::Identifier, std::string(src.substr(start, i - start)), l, co);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = i;
      while (i < src.size() &&
             (std::isdigit(static_cast<unsigned char>(src[i])) || src[i] == '.'))
        advance(1);
      push(TokenType::Number, std::string(src.substr(start, i - start)), l, co);
      continue;
    }
    if (c == '"') {
      std::string value;
      advance(1);
      bool closed = false;
      while (i < src.size()) {
        char d = src[i];
        if (d == '\n') break;
        if (style.line_oriented && d == '"') {
          if (i + 1 < src.size() && src[i + 1] == '"') {
            value += '"';
            advance(2);
            continue;
          }
          advance(1);
          closed = true;
          break;
        }
        if (!style.line_oriented && d == '\\' && i + 1 < src.size()) {
          char e = src[i + 1];
          value += e == 'n' ? '\n' : e == 't' ? '\t' : e;
          advance(2);
          continue;
        }
        if (!style.line_oriented && d == '"') {
          advance(1);
          closed = true;
          break;
        }
        value += d;
        advance(1);
      }
      if (!closed) throw ParseError("unterminated string literal", l, co);
      push(TokenType::String, std::move(value), l, co);
      continue;
    }
    bool matched = false;
    for (auto sym : kTwoCharSymbols) {
      if (src.substr(i, 2) == sym) {
        push(TokenType::Symbol, std::string(sym), l, co);
        advance(2);
        matched = true;
        break;
      }
    }
    if (matched) continue;
    if (kOneCharSymbols.find(c) != std::string_view::npos) {
      push(TokenType::Symbol, std::string(1, c), l, co);
      advance(1);
      continue;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", l, co);
  }
  if (style.line_oriented && (out.empty() || out.back().type != TokenType::Newline))
    push(TokenType::Newline, "\\n", line, col);
  push(TokenType::End, "<end>", line, col);
  return out;
}

bool TokenStream::is_keyword(std::string_view word, std::size_t ahead) const {
  const Token& t = peek(ahead);
  if (t.type != TokenType::Identifier) return false;
  return case_insensitive_ ? iequals(t.text, word) : t.text == word;
}

void TokenStream::expect_keyword(std::string_view word) {
  if (!accept_keyword(word)) fail("expected '" + std::string(word) + "'");
}

void TokenStream::expect_symbol(std::string_view sym) {
  if (!accept_symbol(sym)) fail("expected '" + std::string(sym) + "'");
}

Token TokenStream::expect_identifier(std::string_view what) {
  if (peek().type != TokenType::Identifier) fail("expected " + std::string(what));
  return next();
}

}  // namespace asgmig::detail
