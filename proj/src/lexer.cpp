#include "lexer.hpp"

#include <array>
#include <cctype>

namespace falsilab::detail {

namespace {

bool ident_char(char c) {
  auto u = static_cast<unsigned char>(c);
  return std::isalnum(u) || c == '_' || c == '\'';
}

constexpr std::array<std::string_view, 20> kPuncts = {
    "<->", "->", "!=", "{", "}", "(", ")", ",", ";", "=", "/", ".", ":", "!", "&", "|", "[", "]", "-", "+"};

}  // namespace

Lexer::Lexer(std::string_view text, bool hash_comments) {
  std::size_t i = 0;
  std::size_t line = 1;
  std::size_t line_start = 0;
  auto make = [&](Token::Kind kind, std::string t, std::size_t start) {
    Token tok;
    tok.kind = kind;
    tok.text = std::move(t);
    tok.offset = start;
    tok.line = line;
    tok.column = start - line_start + 1;
    tokens_.push_back(std::move(tok));
  };
  while (i < text.size()) {
    char c = text[i];
    if (c == '\n') {
      ++i;
      ++line;
      line_start = i;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (hash_comments && c == '#') {
      while (i < text.size() && text[i] != '\n') ++i;
      continue;
    }
    if (ident_char(c)) {
      std::size_t start = i;
      while (i < text.size() && ident_char(text[i])) ++i;
      make(Token::Kind::Ident, std::string(text.substr(start, i - start)), start);
      continue;
    }
    if (c == '"') {
      std::size_t start = i++;
      std::string value;
      while (i < text.size() && text[i] != '"') {
        if (text[i] == '\n') break;
        value.push_back(text[i++]);
      }
      if (i >= text.size() || text[i] != '"') {
        throw ParseError("unterminated string", line, start - line_start + 1);
      }
      ++i;
      make(Token::Kind::String, std::move(value), start);
      continue;
    }
    bool matched = false;
    for (auto p : kPuncts) {
      if (text.substr(i, p.size()) == p) {
        make(Token::Kind::Punct, std::string(p), i);
        i += p.size();
        matched = true;
        break;
      }
    }
    if (!matched) {
      throw ParseError(std::string("unexpected character '") + c + "'", line, i - line_start + 1);
    }
  }
  Token end;
  end.offset = text.size();
  end.line = line;
  end.column = text.size() - line_start + 1;
  tokens_.push_back(end);
}

const Token& Lexer::peek(std::size_t ahead) const {
  std::size_t idx = pos_ + ahead;
  return idx < tokens_.size() ? tokens_[idx] : tokens_.back();
}

Token Lexer::next() {
  Token t = peek();
  if (pos_ + 1 < tokens_.size()) ++pos_;
  else pos_ = tokens_.size() - 1;
  return t;
}

bool Lexer::is(std::string_view punct, std::size_t ahead) const {
  const Token& t = peek(ahead);
  return t.kind == Token::Kind::Punct && t.text == punct;
}

bool Lexer::is_ident(std::string_view word, std::size_t ahead) const {
  const Token& t = peek(ahead);
  return t.kind == Token::Kind::Ident && t.text == word;
}

bool Lexer::accept(std::string_view punct) {
  if (!is(punct)) return false;
  next();
  return true;
}

void Lexer::expect(std::string_view punct) {
  if (!accept(punct)) fail("expected '" + std::string(punct) + "'");
}

std::string Lexer::expect_ident(std::string_view what) {
  if (peek().kind != Token::Kind::Ident) fail("expected " + std::string(what));
  return next().text;
}

void Lexer::fail(const std::string& message) const { fail_at(peek(), message); }

void Lexer::fail_at(const Token& token, const std::string& message) const {
  std::string found = token.kind == Token::Kind::End ? "end of input" : "'" + token.text + "'";
  throw ParseError(message + ", found " + found, token.line, token.column);
}

}  // namespace falsilab::detail
