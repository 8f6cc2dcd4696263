/*******************************************************************************
 *
 * Shared tokenizer for the formula, property, and model parsers.
 * Tracks line and column; `//` starts a comment to end of line.
 *
 ******************************************************************************/

#pragma once

#include <cctype>
#include <string>
#include <vector>

#include "predkit/errors.hpp"

namespace predkit::detail {

enum class TokKind { Ident, Int, Punct, End };

struct Token {
  TokKind kind = TokKind::End;
  std::string text;
  bool primed = false;  // identifier followed immediately by '
  int line = 0;
  int col = 0;
};

class Lexer {
public:
  explicit Lexer(const std::string& text) {
    int line = 1;
    int col = 1;
    std::size_t i = 0;
    auto bump = [&](std::size_t n) {
      for (std::size_t k = 0; k < n; ++k, ++i) {
        if (text[i] == '\n') {
          ++line;
          col = 1;
        } else {
          ++col;
        }
      }
    };
    while (i < text.size()) {
      char c = text[i];
      if (std::isspace(static_cast<unsigned char>(c))) {
        bump(1);
        continue;
      }
      if (c == '/' && i + 1 < text.size() && text[i + 1] == '/') {
        while (i < text.size() && text[i] != '\n') bump(1);
        continue;
      }
      Token t;
      t.line = line;
      t.col = col;
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::size_t j = i;
        while (j < text.size() &&
               (std::isalnum(static_cast<unsigned char>(text[j])) ||
                text[j] == '_')) {
          ++j;
        }
        t.kind = TokKind::Ident;
        t.text = text.substr(i, j - i);
        bump(j - i);
        if (i < text.size() && text[i] == '\'') {
          t.primed = true;
          bump(1);
        }
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        std::size_t j = i;
        while (j < text.size() &&
               std::isdigit(static_cast<unsigned char>(text[j]))) {
          ++j;
        }
        t.kind = TokKind::Int;
        t.text = text.substr(i, j - i);
        bump(j - i);
      } else {
        t.kind = TokKind::Punct;
        static const char* two[] = {"&&", "||", "<=", ">=", "==",
                                    "!=", "->", nullptr};
        std::string pair = text.substr(i, 2);
        bool matched = false;
        for (const char** p = two; *p; ++p) {
          if (pair == *p) {
            t.text = pair;
            bump(2);
            matched = true;
            break;
          }
        }
        if (!matched) {
          static const std::string singles = "!()<>=+-*;:,{}[]";
          if (singles.find(c) == std::string::npos) {
            throw ParseError(std::string("unexpected character '") + c + "'",
                             line, col);
          }
          t.text = std::string(1, c);
          bump(1);
        }
      }
      toks_.push_back(std::move(t));
    }
    Token end;
    end.line = line;
    end.col = col;
    toks_.push_back(end);
  }

  const Token& peek(std::size_t ahead = 0) const {
    std::size_t k = pos_ + ahead;
    return k < toks_.size() ? toks_[k] : toks_.back();
  }
  const Token& next() {
    const Token& t = peek();
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }
  bool at_end() const { return peek().kind == TokKind::End; }

  bool is_punct(const std::string& s, std::size_t ahead = 0) const {
    const Token& t = peek(ahead);
    return t.kind == TokKind::Punct && t.text == s;
  }
  bool is_ident(const std::string& s, std::size_t ahead = 0) const {
    const Token& t = peek(ahead);
    return t.kind == TokKind::Ident && t.text == s && !t.primed;
  }

  bool accept_punct(const std::string& s) {
    if (!is_punct(s)) return false;
    next();
    return true;
  }
  bool accept_ident(const std::string& s) {
    if (!is_ident(s)) return false;
    next();
    return true;
  }

  void expect_punct(const std::string& s) {
    if (!accept_punct(s)) fail("expected '" + s + "'");
  }
  std::string expect_ident(const std::string& what) {
    const Token& t = peek();
    if (t.kind != TokKind::Ident || t.primed) fail("expected " + what);
    return next().text;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    const Token& t = peek();
    std::string where =
        t.kind == TokKind::End ? "end of input" : "'" + t.text + "'";
    throw ParseError(msg + " before " + where, t.line, t.col);
  }

  std::size_t save() const { return pos_; }
  void restore(std::size_t pos) { pos_ = pos; }

  // Index just past the ')' matching an assumed '(' at the current token.
  std::size_t after_matching_paren() const {
    std::size_t depth = 0;
    for (std::size_t k = pos_; k < toks_.size(); ++k) {
      const Token& t = toks_[k];
      if (t.kind != TokKind::Punct) continue;
      if (t.text == "(") ++depth;
      if (t.text == ")") {
        if (depth == 0) return k;  // unbalanced; caller reports
        if (--depth == 0) return k + 1;
      }
    }
    return toks_.size() - 1;
  }
  const Token& token_at(std::size_t pos) const {
    return pos < toks_.size() ? toks_[pos] : toks_.back();
  }

private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace predkit::detail
