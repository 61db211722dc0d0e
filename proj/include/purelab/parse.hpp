#pragma once

#include <cctype>
#include <string>
#include <vector>

#include "purelab/syntax.hpp"

namespace purelab {

struct ParseError : std::runtime_error {
  int line, col;
  ParseError(const std::string& msg, int line_, int col_)
      : std::runtime_error(msg + " at " + std::to_string(line_) + ":" + std::to_string(col_)),
        line(line_), col(col_) {}
};

namespace detail {

struct Token {
  enum class Kind { Ident, Keyword, Punct, End };
  Kind kind;
  std::string text;
  int line, col;
};

inline bool is_keyword(const std::string& s) {
  return s == "true" || s == "false" || s == "fun" || s == "let" || s == "in" || s == "ref" ||
         s == "Bool" || s == "Ref" || s == "bot" || s == "top";
}

inline std::vector<Token> lex(const std::string& src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto bump = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (src[i + k] == '\n') { ++line; col = 1; } else { ++col; }
    }
    i += n;
  };
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) { bump(1); continue; }
    if (c == '#') {  // line comment
      while (i < src.size() && src[i] != '\n') bump(1);
      continue;
    }
    int tl = line, tc = col;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
      std::string word = src.substr(i, j - i);
      out.push_back({is_keyword(word) ? Token::Kind::Keyword : Token::Kind::Ident, word, tl, tc});
      bump(j - i);
      continue;
    }
    auto two = i + 1 < src.size() ? src.substr(i, 2) : std::string();
    if (two == "=>" || two == "->" || two == ":=" || two == "&&" || two == "||" || two == "[]") {
      out.push_back({Token::Kind::Punct, two, tl, tc});
      bump(2);
      continue;
    }
    if (std::string("()[]<>,:^=!").find(c) != std::string::npos) {
      out.push_back({Token::Kind::Punct, std::string(1, c), tl, tc});
      bump(1);
      continue;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", tl, tc);
  }
  out.push_back({Token::Kind::End, "", line, col});
  return out;
}

class Parser {
 public:
  explicit Parser(const std::string& src) : toks_(lex(src)) {}

  Term parse_term_all() {
    Term t = term();
    expect_end();
    return t;
  }

  STypePtr parse_stype_all() {
    STypePtr t = stype();
    expect_end();
    return t;
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;

  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_++]; }
  bool at(const char* text) const {
    return peek().kind != Token::Kind::End && peek().text == text;
  }
  bool eat(const char* text) {
    if (at(text)) { ++pos_; return true; }
    return false;
  }
  void expect(const char* text, const char* what) {
    if (!eat(text)) fail(std::string("expected '") + text + "' in " + what);
  }
  void expect_end() {
    if (peek().kind != Token::Kind::End) fail("trailing input");
  }
  [[noreturn]] void fail(const std::string& msg) const {
    const Token& t = peek();
    std::string got = t.kind == Token::Kind::End ? "end of input" : "'" + t.text + "'";
    throw ParseError(msg + ", found " + got, t.line, t.col);
  }
  std::string ident(const char* what) {
    if (peek().kind != Token::Kind::Ident) fail(std::string("expected identifier in ") + what);
    return next().text;
  }
  Term located(Term t, const Token& tok) {
    auto n = *t;
    n.line = tok.line;
    n.col = tok.col;
    return mk(std::move(n));
  }

  Term term() {
    if (at("fun")) {
      const Token& tok = next();
      expect("(", "fun");
      std::string x = ident("fun binder");
      STypePtr annot;
      if (eat(":")) annot = stype();
      expect(")", "fun");
      expect("=>", "fun");
      return located(abs(x, annot, term()), tok);
    }
    if (at("let")) {
      const Token& tok = next();
      std::string x = ident("let binder");
      expect("=", "let");
      Term bound = term();
      expect("in", "let");
      return located(desugar_let(x, bound, term()), tok);
    }
    return binexpr();
  }

  Term binexpr() {
    Term l = putexpr();
    for (;;) {
      const Token& tok = peek();
      if (eat("&&")) l = located(bin(BinOp::And, l, putexpr()), tok);
      else if (eat("||")) l = located(bin(BinOp::Or, l, putexpr()), tok);
      else return l;
    }
  }

  Term putexpr() {
    Term l = prefix();
    const Token& tok = peek();
    if (eat(":=")) return located(put(l, prefix()), tok);
    return l;
  }

  Term prefix() {
    if (at("ref")) {
      const Token& tok = next();
      return located(ref_(prefix()), tok);
    }
    if (at("!")) {
      const Token& tok = next();
      return located(get(prefix()), tok);
    }
    return appexpr();
  }

  bool atom_start() const {
    const Token& t = peek();
    if (t.kind == Token::Kind::Ident) return true;
    if (t.kind == Token::Kind::Keyword) return t.text == "true" || t.text == "false";
    return t.text == "(" || t.text == "[]";
  }

  Term appexpr() {
    Term f = atom();
    while (atom_start()) {
      const Token& tok = peek();
      f = located(app(f, atom()), tok);
    }
    return f;
  }

  Term atom() {
    const Token& tok = peek();
    if (eat("true")) return located(cst(true), tok);
    if (eat("false")) return located(cst(false), tok);
    if (eat("[]")) return located(hole(), tok);
    if (tok.kind == Token::Kind::Ident) return located(var(next().text), tok);
    if (eat("(")) {
      Term t = term();
      expect(")", "parenthesized term");
      return t;
    }
    fail("expected a term");
  }

  Mark markname() {
    if (eat("bot")) return Mark::Bot;
    if (eat("top")) return Mark::Top;
    fail("expected 'bot' or 'top'");
  }

  std::optional<QualAnnot> qual_opt() {
    if (eat("^")) return QualAnnot(markname());
    if (eat("<")) {
      Mark f = markname();
      expect(",", "qualifier");
      Mark s = markname();
      expect(">", "qualifier");
      return QualAnnot(PairQual{f, s});
    }
    return std::nullopt;
  }

  STypePtr stype() {
    if (eat("Bool")) return stype_bool();
    if (eat("Ref")) return stype_ref(qual_opt());
    if (eat("(")) {
      STypePtr param = stype();
      auto pq = qual_opt();
      expect("->", "function type");
      std::optional<Mark> latent;
      if (eat("[")) {
        latent = markname();
        expect("]", "latent effect");
      }
      STypePtr result = stype();
      auto rq = qual_opt();
      expect(")", "function type");
      return stype_fun(param, pq, latent, result, rq);
    }
    fail("expected a type");
  }
};

}  // namespace detail

inline Term parse(const std::string& src) { return detail::Parser(src).parse_term_all(); }
inline STypePtr parse_stype(const std::string& src) { return detail::Parser(src).parse_stype_all(); }

}  // namespace purelab
