#include <cctype>
#include <sstream>

#include "internal.hpp"

namespace geodeq {

namespace {

struct Token {
  enum Type { Number, Ident, Op, End } type = End;
  mpq_class num;
  std::string text;     // Ident name
  int primes = 0;       // apostrophes following an Ident
  char op = 0;
  std::size_t pos = 0;
};

struct Lexer {
  const std::string& s;
  std::size_t i = 0;

  explicit Lexer(const std::string& text) : s(text) {}

  [[noreturn]] void fail(std::size_t pos, const std::string& msg) const {
    std::ostringstream os;
    os << "parse error at offset " << pos << ": " << msg;
    throw ParseError(os.str());
  }

  Token next() {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    Token t;
    t.pos = i;
    if (i >= s.size()) {
      t.type = Token::End;
      return t;
    }
    char c = s[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      std::string intPart = s.substr(i, j - i);
      std::string fracPart;
      if (j < s.size() && s[j] == '.') {
        std::size_t k = j + 1;
        while (k < s.size() && std::isdigit(static_cast<unsigned char>(s[k]))) ++k;
        if (k == j + 1) fail(j, "expected digits after decimal point");
        fracPart = s.substr(j + 1, k - j - 1);
        j = k;
      }
      i = j;
      mpz_class numz(intPart + fracPart);
      mpz_class denz(1);
      for (std::size_t k = 0; k < fracPart.size(); ++k) denz *= 10;
      t.type = Token::Number;
      t.num = mpq_class(numz, denz);
      t.num.canonicalize();
      return t;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < s.size() &&
             (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_'))
        ++j;
      t.type = Token::Ident;
      t.text = s.substr(i, j - i);
      i = j;
      while (i < s.size() && s[i] == '\'') {
        ++t.primes;
        ++i;
      }
      return t;
    }
    static const std::string ops = "+-*/^(),;[]";
    if (ops.find(c) != std::string::npos) {
      t.type = Token::Op;
      t.op = c;
      ++i;
      return t;
    }
    fail(i, std::string("unexpected character '") + c + "'");
  }
};

struct Parser {
  Lexer lex;
  Token cur;
  const SymbolSet& sym;

  Parser(const std::string& text, const SymbolSet& symbols)
      : lex(text), sym(symbols) {
    cur = lex.next();
  }

  [[noreturn]] void fail(const std::string& msg) const { lex.fail(cur.pos, msg); }

  void advance() { cur = lex.next(); }

  bool at_op(char c) const { return cur.type == Token::Op && cur.op == c; }

  void expect_op(char c) {
    if (!at_op(c)) fail(std::string("expected '") + c + "'");
    advance();
  }

  bool is_coord(const std::string& name) const {
    for (const auto& c : sym.coords)
      if (c == name) return true;
    return false;
  }

  const SymbolSet::Fn* find_fn(const std::string& name) const {
    for (const auto& f : sym.fns)
      if (f.name == name) return &f;
    return nullptr;
  }

  Expr parse_expr() {
    Expr e = parse_term();
    while (at_op('+') || at_op('-')) {
      char op = cur.op;
      advance();
      Expr rhs = parse_term();
      e = op == '+' ? e + rhs : e - rhs;
    }
    return e;
  }

  Expr parse_term() {
    Expr e = parse_unary();
    while (at_op('*') || at_op('/')) {
      char op = cur.op;
      advance();
      Expr rhs = parse_unary();
      e = op == '*' ? e * rhs : e / rhs;
    }
    return e;
  }

  Expr parse_unary() {
    if (at_op('-')) {
      advance();
      return -parse_unary();
    }
    if (at_op('+')) {
      advance();
      return parse_unary();
    }
    return parse_power();
  }

  Expr parse_power() {
    Expr base = parse_atom();
    if (!at_op('^')) return base;
    advance();
    mpq_class e = parse_exponent();
    return power(base, e);
  }

  mpq_class parse_exponent() {
    bool neg = false;
    if (at_op('-')) {
      neg = true;
      advance();
    }
    mpq_class q;
    if (cur.type == Token::Number) {
      q = cur.num;
      advance();
      // allow p/q exponents written without parentheses binding tighter
    } else if (at_op('(')) {
      advance();
      Expr e = parse_expr();
      expect_op(')');
      Expr c = canonicalize(e);
      auto r = detail::rf_as_rational(*detail::node_of(c).rf);
      if (!r) fail("exponent must be a rational constant");
      q = *r;
    } else {
      fail("expected exponent");
    }
    return neg ? mpq_class(-q) : q;
  }

  std::vector<Expr> parse_args() {
    expect_op('(');
    std::vector<Expr> args;
    if (!at_op(')')) {
      args.push_back(parse_expr());
      while (at_op(',')) {
        advance();
        args.push_back(parse_expr());
      }
    }
    expect_op(')');
    return args;
  }

  Expr parse_atom() {
    if (cur.type == Token::Number) {
      mpq_class q = cur.num;
      advance();
      return rational(q);
    }
    if (at_op('(')) {
      advance();
      Expr e = parse_expr();
      expect_op(')');
      return e;
    }
    if (cur.type != Token::Ident) fail("expected expression");
    std::string name = cur.text;
    int primes = cur.primes;
    std::size_t pos = cur.pos;
    advance();

    if (name == "D" && primes == 0 && at_op('[') && !is_coord(name) && !find_fn(name)) {
      advance();
      if (cur.type != Token::Ident) fail("expected function name in D[...]");
      std::string fn = cur.text;
      advance();
      expect_op(';');
      std::vector<std::uint32_t> orders;
      while (true) {
        if (cur.type != Token::Number || cur.num.get_den() != 1 || sgn(cur.num) < 0)
          fail("expected nonnegative integer order in D[...]");
        orders.push_back(static_cast<std::uint32_t>(cur.num.get_num().get_ui()));
        advance();
        if (at_op(',')) {
          advance();
          continue;
        }
        break;
      }
      expect_op(']');
      const SymbolSet::Fn* f = find_fn(fn);
      if (!f) lex.fail(pos, "unknown function '" + fn + "'");
      std::vector<Expr> args = parse_args();
      if (args.size() != f->arity || orders.size() != f->arity)
        lex.fail(pos, "argument/order count mismatch for '" + fn + "'");
      return apply(fn, std::move(args), std::move(orders));
    }

    static const char* builtins[] = {"exp", "log", "sin", "cos", "sqrt", "abs"};
    for (const char* b : builtins) {
      if (name == b && !is_coord(name) && !find_fn(name)) {
        if (primes) lex.fail(pos, "cannot differentiate builtin with primes");
        std::vector<Expr> args = parse_args();
        if (args.size() != 1) lex.fail(pos, std::string(b) + " takes one argument");
        if (name == "exp") return exp_(args[0]);
        if (name == "log") return log_(args[0]);
        if (name == "sin") return sin_(args[0]);
        if (name == "cos") return cos_(args[0]);
        if (name == "sqrt") return sqrt_(args[0]);
        return abs_(args[0]);
      }
    }

    if (const SymbolSet::Fn* f = find_fn(name)) {
      if (f->arity == 0) {
        if (primes) lex.fail(pos, "'" + name + "' takes no arguments; cannot apply primes");
        if (at_op('(')) {
          std::vector<Expr> args = parse_args();
          if (!args.empty()) lex.fail(pos, "'" + name + "' takes no arguments");
        }
        return apply(name, {});
      }
      if (f->arity > 1 && primes)
        lex.fail(pos, "primes are only for one-argument functions; use D[" + name + ";...]");
      std::vector<Expr> args = parse_args();
      if (args.size() != f->arity)
        lex.fail(pos, "argument count mismatch for '" + name + "'");
      std::vector<std::uint32_t> orders(args.size(), 0);
      if (primes) orders[0] = static_cast<std::uint32_t>(primes);
      return apply(name, std::move(args), std::move(orders));
    }

    if (is_coord(name)) {
      if (primes) lex.fail(pos, "cannot apply primes to coordinate '" + name + "'");
      if (at_op('(')) lex.fail(pos, "coordinate '" + name + "' is not a function");
      return coord(name);
    }

    lex.fail(pos, "unknown identifier '" + name + "'");
  }
};

}  // namespace

Expr parse(const std::string& text, const SymbolSet& symbols) {
  Parser p(text, symbols);
  Expr e = p.parse_expr();
  if (p.cur.type != Token::End) p.fail("unexpected trailing input");
  return e;
}

}  // namespace geodeq
