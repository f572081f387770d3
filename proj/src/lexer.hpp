#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "falsilab/error.hpp"

namespace falsilab::detail {

struct Token {
  enum class Kind { Ident, String, Punct, End };
  Kind kind = Kind::End;
  std::string text;
  std::size_t offset = 0;
  std::size_t line = 1;
  std::size_t column = 1;
};

// Shared tokenizer for the formula grammar and the text formats.
class Lexer {
 public:
  explicit Lexer(std::string_view text, bool hash_comments = true);

  [[nodiscard]] const Token& peek(std::size_t ahead = 0) const;
  Token next();
  [[nodiscard]] bool at_end() const { return peek().kind == Token::Kind::End; }
  [[nodiscard]] bool is(std::string_view punct, std::size_t ahead = 0) const;
  [[nodiscard]] bool is_ident(std::string_view word, std::size_t ahead = 0) const;
  bool accept(std::string_view punct);
  void expect(std::string_view punct);
  std::string expect_ident(std::string_view what);
  [[noreturn]] void fail(const std::string& message) const;
  [[noreturn]] void fail_at(const Token& token, const std::string& message) const;
  [[nodiscard]] std::size_t position() const { return pos_; }
  void reset(std::size_t pos) { pos_ = pos; }

 private:
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace falsilab::detail
