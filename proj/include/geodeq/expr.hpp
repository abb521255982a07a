#pragma once

// Symbolic scalar expressions over chart coordinates and opaque functions.
//
// Expr is a small immutable handle into a global hash-consed store, so
// structurally equal trees share one id. canonicalize() rewrites any tree
// into a canonical rational form: a quotient of integer polynomials in the
// coordinates, formal derivatives of opaque functions (jets), and
// transcendental kernels (exp/log/sin/cos/sqrt/abs of canonical arguments).
// The canonical form is normalized (gcd-reduced, sign- and content-fixed,
// sin^2 eliminated in favor of cos^2, exp factors merged and sign-normalized,
// sqrt(u)^2 collapsed to u), so two expressions equal as functions on their
// common domain canonicalize to the identical handle in the fragment the
// rewrites cover; is_zero() falls back on high-precision sampling otherwise
// and never reports Zero without an exact cancellation.
//
// Non-integer rational powers carry principal-branch semantics: u^(p/q) is
// defined where u > 0 (odd-q roots of certified-positive bases extract
// polynomial roots; even q routes through sqrt kernels).

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace geodeq {

enum class Kind {
  Rational,
  Coord,
  Apply,  // opaque function application, possibly differentiated (a jet)
  Sum,
  Product,
  Power,  // rational constant exponent
  Exp,
  Log,
  Sin,
  Cos,
  Sqrt,
  Abs,
  Canon,  // canonical rational form; produced by canonicalize()
};

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct EvalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class Expr {
 public:
  Expr();  // the rational 0

  Kind kind() const;
  std::uint32_t id() const { return id_; }
  // Structural identity; canonical forms of equal expressions share ids.
  bool same(Expr o) const { return id_ == o.id_; }

  const mpq_class& rational_value() const;             // Rational
  const std::string& name() const;                     // Coord, Apply
  const std::vector<std::uint32_t>& jet_orders() const;  // Apply
  const mpq_class& exponent() const;                   // Power
  std::size_t arity() const;
  Expr child(std::size_t i) const;
  bool is_canonical() const { return kind() == Kind::Canon; }
  bool is_rational() const { return kind() == Kind::Rational; }

  static Expr from_id(std::uint32_t id) { return Expr(id); }

 private:
  explicit Expr(std::uint32_t id) : id_(id) {}
  std::uint32_t id_;
};

// Tree constructors (no rewriting beyond trivial flattening).
Expr rational(const mpq_class& q);
Expr integer(long v);
Expr coord(const std::string& name);
Expr apply(const std::string& fn, std::vector<Expr> args,
           std::vector<std::uint32_t> orders = {});
Expr sum(std::vector<Expr> kids);
Expr product(std::vector<Expr> kids);
Expr power(Expr base, const mpq_class& exponent);
Expr exp_(Expr a);
Expr log_(Expr a);
Expr sin_(Expr a);
Expr cos_(Expr a);
Expr sqrt_(Expr a);
Expr abs_(Expr a);

Expr operator+(Expr a, Expr b);
Expr operator-(Expr a, Expr b);
Expr operator*(Expr a, Expr b);
Expr operator/(Expr a, Expr b);
Expr operator-(Expr a);
Expr pow_int(Expr base, long k);

// Facts the rewrites may rely on: each item is an expression declared
// positive (strict) or merely nonzero on the domain of interest, plus one
// rational sample point (coordinate values, and values for order-0 opaque
// functions keyed by function name) inside that domain.
struct Assumption {
  Expr expr;
  bool strictly_positive;
};

struct Assumptions {
  std::vector<Assumption> items;
  std::map<std::string, mpq_class> sample;

  void declare_positive(Expr e) { items.push_back({e, true}); }
  void declare_nonzero(Expr e) { items.push_back({e, false}); }
};

enum class Verdict { Zero, NonZero, Unknown };

struct ZeroResult {
  Verdict verdict = Verdict::Unknown;
  std::string witness;  // sample point and value for NonZero; note otherwise
};

struct SymbolSet {
  struct Fn {
    std::string name;
    std::size_t arity;
  };
  std::vector<std::string> coords;
  std::vector<Fn> fns;
};

// Rewrites to canonical rational form. Safe without assumptions; the
// assumption-aware constructors below resolve signs, split logarithms over
// declared-positive factors, and extract roots, producing smaller kernels.
Expr canonicalize(Expr e);
bool canonically_equal(Expr a, Expr b);

Expr make_exp(Expr a, const Assumptions* assm = nullptr);
Expr make_log(Expr a, const Assumptions* assm = nullptr);
Expr make_sqrt(Expr a, const Assumptions* assm = nullptr);
Expr make_abs(Expr a, const Assumptions* assm = nullptr);
Expr make_power(Expr base, const mpq_class& exponent,
                const Assumptions* assm = nullptr);

// d(e)/d(coord). Other coordinates are independent; jets chain through their
// arguments. Differentiating |u| needs the sign of u from assumptions.
Expr differentiate(Expr e, const std::string& coordName,
                   const Assumptions* assm = nullptr);

// Replace every jet of fn by the matching derivative of body, which must be
// an expression in the jet's arguments (each argument must be a coordinate).
Expr substitute_jets(Expr e, const std::map<std::string, Expr>& defs);
// Replace the single jet of fn with exactly these orders by value.
Expr substitute_jet(Expr e, const std::string& fn,
                    const std::vector<std::uint32_t>& orders, Expr value);

std::string to_string(Expr e);
Expr parse(const std::string& text, const SymbolSet& symbols);

// Zero iff the canonical numerator vanishes identically. Otherwise evaluates
// at deterministic pseudo-random rational points consistent with the
// assumptions (MPFR, engine_options().precision_bits): a value above the
// magnitude threshold yields NonZero with that point as witness; if all
// samples stay below it the result is Unknown, never Zero.
ZeroResult is_zero(Expr e, const Assumptions& assm);
bool is_zero_expr(Expr e, const Assumptions& assm);

// Exact double evaluation (coordinates only; jets must be substituted away).
double eval_double(Expr e, const std::map<std::string, double>& point);
// MPFR evaluation at a rational point, rounded to double at the end.
// precision_bits = 0 uses engine_options().precision_bits.
double eval_numeric(Expr e, const std::map<std::string, mpq_class>& point,
                    unsigned precision_bits = 0);

struct EngineOptions {
  std::uint64_t seed = 0;
  unsigned precision_bits = 200;
};
EngineOptions& engine_options();

const char* verdict_name(Verdict v);

}  // namespace geodeq
