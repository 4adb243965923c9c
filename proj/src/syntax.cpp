#include "lff/syntax.hpp"

#include <cctype>
#include <charconv>
#include <map>
#include <optional>

#include "lff/error.hpp"

namespace lff {

std::string var_name(Var v) {
  if (v < 26) return std::string(1, static_cast<char>('A' + v));
  return "V" + std::to_string(v);
}

std::string to_text(const Literal& lit) {
  std::string out = lit.pred.name.str();
  out += '(';
  for (std::size_t i = 0; i < lit.args.size(); ++i) {
    if (i) out += ',';
    out += var_name(lit.args[i]);
  }
  out += ')';
  return out;
}

std::string to_text(const Clause& c) {
  std::string out = to_text(c.head);
  if (!c.body.empty()) {
    out += " :- ";
    for (std::size_t i = 0; i < c.body.size(); ++i) {
      if (i) out += ", ";
      out += to_text(c.body[i]);
    }
  }
  out += '.';
  return out;
}

std::string to_text(const Hypothesis& h) {
  std::string out;
  for (std::size_t i = 0; i < h.clauses.size(); ++i) {
    if (i) out += '\n';
    out += to_text(h.clauses[i]);
  }
  return out;
}

std::string to_text(const Term& t) {
  if (t.is_int()) return std::to_string(t.as_int());
  if (t.is_atom()) return std::get<Symbol>(t.value).str();
  std::string out = "[";
  const auto& items = t.as_list();
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ',';
    out += to_text(items[i]);
  }
  out += ']';
  return out;
}

std::string to_text(const GroundAtom& a) {
  std::string out = a.pred.name.str();
  out += '(';
  for (std::size_t i = 0; i < a.args.size(); ++i) {
    if (i) out += ',';
    out += to_text(a.args[i]);
  }
  out += ')';
  return out;
}

namespace {

enum class Tok { ident, var, integer, lparen, rparen, lbracket, rbracket, comma, dot, neck, slash, end };

struct Token {
  Tok kind;
  std::string_view text;
};

class Lexer {
 public:
  Lexer(std::string_view src, int line) : src_(src), line_(line) { advance(); }

  const Token& peek() const { return tok_; }

  Token take() {
    Token t = tok_;
    advance();
    return t;
  }

  Token expect(Tok kind, const char* what) {
    if (tok_.kind != kind) fail(std::string("expected ") + what);
    return take();
  }

  [[noreturn]] void fail(const std::string& what) const {
    std::string near = tok_.kind == Tok::end ? "end of input" : "'" + std::string(tok_.text) + "'";
    throw ParseError(line_, what + " near " + near);
  }

  int line() const { return line_; }

 private:
  void advance() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    if (pos_ >= src_.size()) {
      tok_ = {Tok::end, {}};
      return;
    }
    std::size_t start = pos_;
    char c = src_[pos_];
    auto word = [&] {
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
        ++pos_;
    };
    if (std::islower(static_cast<unsigned char>(c))) {
      word();
      tok_ = {Tok::ident, src_.substr(start, pos_ - start)};
    } else if (std::isupper(static_cast<unsigned char>(c)) || c == '_') {
      word();
      tok_ = {Tok::var, src_.substr(start, pos_ - start)};
    } else if (std::isdigit(static_cast<unsigned char>(c)) ||
               (c == '-' && pos_ + 1 < src_.size() &&
                std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
      ++pos_;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      tok_ = {Tok::integer, src_.substr(start, pos_ - start)};
    } else if (c == ':' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '-') {
      pos_ += 2;
      tok_ = {Tok::neck, src_.substr(start, 2)};
    } else {
      ++pos_;
      Tok kind;
      switch (c) {
        case '(': kind = Tok::lparen; break;
        case ')': kind = Tok::rparen; break;
        case '[': kind = Tok::lbracket; break;
        case ']': kind = Tok::rbracket; break;
        case ',': kind = Tok::comma; break;
        case '.': kind = Tok::dot; break;
        case '/': kind = Tok::slash; break;
        default:
          tok_ = {Tok::ident, src_.substr(start, 1)};
          fail("unexpected character");
      }
      tok_ = {kind, src_.substr(start, 1)};
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_;
  Token tok_{Tok::end, {}};
};

std::int64_t to_int(const Token& t, const Lexer& lex) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
  if (ec != std::errc()) lex.fail("integer out of range");
  return v;
}

Term read_term(Lexer& lex) {
  const Token& t = lex.peek();
  switch (t.kind) {
    case Tok::integer: {
      Token tok = lex.take();
      return Term::integer(to_int(tok, lex));
    }
    case Tok::ident: {
      Token tok = lex.take();
      if (lex.peek().kind == Tok::lparen) lex.fail("compound terms are not supported");
      return Term::atom(tok.text);
    }
    case Tok::lbracket: {
      lex.take();
      Term::List items;
      if (lex.peek().kind != Tok::rbracket) {
        items.push_back(read_term(lex));
        while (lex.peek().kind == Tok::comma) {
          lex.take();
          items.push_back(read_term(lex));
        }
      }
      lex.expect(Tok::rbracket, "']'");
      return Term::list(std::move(items));
    }
    case Tok::var:
      lex.fail("variables are not allowed in ground terms");
    default:
      lex.fail("expected a term");
  }
}

GroundAtom read_ground_atom(Lexer& lex) {
  Token name = lex.expect(Tok::ident, "predicate name");
  GroundAtom atom{{Symbol(name.text), 0}, {}};
  if (lex.peek().kind == Tok::lparen) {
    lex.take();
    atom.args.push_back(read_term(lex));
    while (lex.peek().kind == Tok::comma) {
      lex.take();
      atom.args.push_back(read_term(lex));
    }
    lex.expect(Tok::rparen, "')'");
  }
  atom.pred.arity = static_cast<int>(atom.args.size());
  return atom;
}

// Variables named in source text map to indices by first occurrence.
Literal read_literal(Lexer& lex, std::map<std::string, Var, std::less<>>& vars) {
  Token name = lex.expect(Tok::ident, "predicate name");
  Literal lit{{Symbol(name.text), 0}, {}};
  lex.expect(Tok::lparen, "'('");
  for (;;) {
    Token v = lex.peek();
    if (v.kind != Tok::var) lex.fail("hypothesis literals take variables only");
    lex.take();
    auto it = vars.find(v.text);
    if (it == vars.end()) {
      if (vars.size() >= static_cast<std::size_t>(kMaxVars)) lex.fail("too many variables");
      it = vars.emplace(std::string(v.text), static_cast<Var>(vars.size())).first;
    }
    lit.args.push_back(it->second);
    if (lex.peek().kind != Tok::comma) break;
    lex.take();
  }
  lex.expect(Tok::rparen, "')'");
  if (lit.args.size() > static_cast<std::size_t>(kMaxArity)) lex.fail("arity too large");
  lit.pred.arity = static_cast<int>(lit.args.size());
  return lit;
}

Clause read_clause(Lexer& lex) {
  std::map<std::string, Var, std::less<>> vars;
  Clause c{read_literal(lex, vars), {}};
  if (lex.peek().kind == Tok::neck) {
    lex.take();
    c.body.push_back(read_literal(lex, vars));
    while (lex.peek().kind == Tok::comma) {
      lex.take();
      c.body.push_back(read_literal(lex, vars));
    }
  }
  lex.expect(Tok::dot, "'.'");
  return c;
}

void expect_end(Lexer& lex) {
  if (lex.peek().kind != Tok::end) lex.fail("trailing input");
}

}  // namespace

Clause parse_clause(std::string_view text, int line) {
  Lexer lex(text, line);
  Clause c = read_clause(lex);
  expect_end(lex);
  return c;
}

Hypothesis parse_hypothesis(std::string_view text, int line) {
  Lexer lex(text, line);
  Hypothesis h;
  while (lex.peek().kind != Tok::end) h.clauses.push_back(read_clause(lex));
  return h;
}

Term parse_term(std::string_view text, int line) {
  Lexer lex(text, line);
  Term t = read_term(lex);
  expect_end(lex);
  return t;
}

GroundAtom parse_ground_atom(std::string_view text, int line) {
  Lexer lex(text, line);
  GroundAtom a = read_ground_atom(lex);
  if (lex.peek().kind == Tok::dot) lex.take();
  expect_end(lex);
  return a;
}

PredSig parse_pred_sig(std::string_view text, int line) {
  Lexer lex(text, line);
  Token name = lex.expect(Tok::ident, "predicate name");
  lex.expect(Tok::slash, "'/'");
  Token arity = lex.expect(Tok::integer, "arity");
  if (lex.peek().kind == Tok::dot) lex.take();
  expect_end(lex);
  std::int64_t a = to_int(arity, lex);
  if (a < 1 || a > kMaxArity) throw ParseError(line, "arity out of range in " + std::string(text));
  return {Symbol(name.text), static_cast<int>(a)};
}

}  // namespace lff
