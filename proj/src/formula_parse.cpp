#include <cctype>
#include <optional>
#include <string>
#include <vector>

#include "hsmc/formula.hpp"

namespace hsmc {

namespace {

enum class Tok {
  Ident, True, False, Not, And, Or, Implies, Iff,
  LParen, RParen, Diamond, Box, Caret, Int, End,
};

struct Token {
  Token(Tok t, std::size_t p) : tok(t), pos(p) {}

  Tok tok;
  std::size_t pos;
  std::string text;
  Mod mod = Mod::A;
  long value = 0;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      Token t = next();
      out.push_back(t);
      if (t.tok == Tok::End) break;
    }
    return out;
  }

 private:
  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
  }

  Token next() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    std::size_t start = pos_;
    if (pos_ >= text_.size()) return {Tok::End, start};

    char c = text_[pos_];
    if (c == '~') { ++pos_; return {Tok::Not, start}; }
    if (c == '&') { ++pos_; return {Tok::And, start}; }
    if (c == '|') { ++pos_; return {Tok::Or, start}; }
    if (c == '(') { ++pos_; return {Tok::LParen, start}; }
    if (c == ')') { ++pos_; return {Tok::RParen, start}; }
    if (c == '^') { ++pos_; return {Tok::Caret, start}; }
    if (c == '-') {
      if (peek(1) != '>') throw ParseError(start, "expected '->'");
      pos_ += 2;
      return {Tok::Implies, start};
    }
    if (c == '<') {
      if (peek(1) == '-' && peek(2) == '>') {
        pos_ += 3;
        return {Tok::Iff, start};
      }
      return modality(start, '>', Tok::Diamond);
    }
    if (c == '[') return modality(start, ']', Tok::Box);
    if (std::isdigit(static_cast<unsigned char>(c))) {
      long v = 0;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        v = v * 10 + (text_[pos_] - '0');
        if (v > 1000000) throw ParseError(start, "number too large");
        ++pos_;
      }
      Token t{Tok::Int, start};
      t.value = v;
      return t;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t end = pos_;
      while (end < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[end])) || text_[end] == '_'))
        ++end;
      std::string word(text_.substr(pos_, end - pos_));
      pos_ = end;
      if (word == "true") return {Tok::True, start};
      if (word == "false") return {Tok::False, start};
      Token t{Tok::Ident, start};
      t.text = std::move(word);
      return t;
    }
    throw ParseError(start, std::string("unexpected character '") + c + "'");
  }

  Token modality(std::size_t start, char close, Tok kind) {
    ++pos_;  // opening bracket
    bool bar = false;
    if (peek() == '~') {
      bar = true;
      ++pos_;
    }
    char letter = peek();
    std::optional<Mod> m;
    if (letter == 'A') m = bar ? Mod::Abar : Mod::A;
    if (letter == 'B') m = bar ? Mod::Bbar : Mod::B;
    if (letter == 'E') m = bar ? Mod::Ebar : Mod::E;
    if (!m) throw ParseError(start, "bad modality, expected one of A ~A B ~B E ~E");
    ++pos_;
    if (peek() != close)
      throw ParseError(start, std::string("unterminated modality, expected '") + close + "'");
    ++pos_;
    Token t{kind, start};
    t.mod = *m;
    return t;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Formula run() {
    Formula f = iff();
    expect(Tok::End, "trailing input after formula");
    return f;
  }

 private:
  const Token& cur() const { return toks_[i_]; }
  void advance() { ++i_; }

  bool eat(Tok t) {
    if (cur().tok != t) return false;
    advance();
    return true;
  }

  void expect(Tok t, const std::string& what) {
    if (cur().tok != t) throw ParseError(cur().pos, what);
    advance();
  }

  Formula iff() {
    Formula f = implies();
    while (eat(Tok::Iff)) f = Formula::equivalence(std::move(f), implies());
    return f;
  }

  Formula implies() {
    Formula f = disj();
    if (eat(Tok::Implies)) return Formula::implication(std::move(f), implies());
    return f;
  }

  Formula disj() {
    Formula f = conj();
    while (eat(Tok::Or)) f = Formula::disjunction(std::move(f), conj());
    return f;
  }

  Formula conj() {
    Formula f = unary();
    while (eat(Tok::And)) f = Formula::conjunction(std::move(f), unary());
    return f;
  }

  Formula unary() {
    if (eat(Tok::Not)) return Formula::negation(unary());
    if (cur().tok == Tok::Diamond || cur().tok == Tok::Box) {
      bool is_box = cur().tok == Tok::Box;
      Mod m = cur().mod;
      advance();
      long reps = 1;
      if (eat(Tok::Caret)) {
        if (cur().tok != Tok::Int) throw ParseError(cur().pos, "expected a count after '^'");
        reps = cur().value;
        advance();
      }
      Formula f = unary();
      for (long r = 0; r < reps; ++r)
        f = is_box ? Formula::box(m, std::move(f)) : Formula::diamond(m, std::move(f));
      return f;
    }
    return atom();
  }

  Formula atom() {
    switch (cur().tok) {
      case Tok::True: advance(); return Formula::verum();
      case Tok::False: advance(); return Formula::falsum();
      case Tok::Ident: {
        std::string name = cur().text;
        advance();
        return Formula::letter(std::move(name));
      }
      case Tok::LParen: {
        advance();
        Formula f = iff();
        expect(Tok::RParen, "expected ')'");
        return f;
      }
      default: throw ParseError(cur().pos, "expected a formula");
    }
  }

  std::vector<Token> toks_;
  std::size_t i_ = 0;
};

}  // namespace

Formula parse_formula(std::string_view text) {
  return Parser(Lexer(text).run()).run();
}

}  // namespace hsmc
