#pragma once

// Engine internals shared by the expr translation units. Not installed.

#include <functional>
#include <memory>
#include <optional>
#include <tuple>

#include "geodeq/expr.hpp"
#include "geodeq/poly.hpp"

namespace geodeq::detail {

enum class VarKind { Coord, Jet, Kernel };
enum class KernelOp { Exp, Log, Sin, Cos, Sqrt, Abs };

struct VarInfo {
  VarKind kind;
  std::string name;                    // Coord, Jet: identifier
  std::vector<std::uint32_t> orders;   // Jet: per-argument derivative orders
  std::vector<Expr> args;              // Jet: canonical argument expressions
  KernelOp op = KernelOp::Exp;         // Kernel
  Expr arg;                            // Kernel: canonical argument
};

// Quotient of integer polynomials over the variable registry.
// Invariants: den nonzero with positive leading coefficient; gcd(num,den)
// constant; integer contents coprime; per monomial at most one exp kernel
// (power 1, argument sign-normalized), sin powers < 2, sqrt/abs powers < 2.
struct RatForm {
  Poly num;
  Poly den;
  bool operator==(const RatForm& o) const { return num == o.num && den == o.den; }
  std::size_t hash() const;
};

struct Node {
  Kind kind = Kind::Rational;
  mpq_class q;                          // Rational value, Power exponent
  std::string name;                     // Coord, Apply
  std::vector<std::uint32_t> orders;    // Apply
  std::vector<Expr> kids;
  std::shared_ptr<const RatForm> rf;    // Canon
};

// Hash-consed node store and variable registry (global, mutex-guarded).
Expr intern_node(Node n);
const Node& node_of(Expr e);

Var coord_var(const std::string& name);
Var jet_var(const std::string& name, std::vector<std::uint32_t> orders,
            std::vector<Expr> canonArgs);
Var kernel_var(KernelOp op, Expr canonArg);
const VarInfo& var_info(Var v);

Expr expr_of(RatForm rf);               // intern as a Canon node
const RatForm& rf_of(Expr e);           // canonical form (canonicalizes)
Expr canon_memo_get(Expr e);            // invalid Expr sentinel when absent
void canon_memo_put(Expr e, Expr canon);
Expr diff_memo_get(Expr canonExpr, Var v);
void diff_memo_put(Expr canonExpr, Var v, Expr d);
bool valid(Expr e);                      // not the sentinel
Expr invalid_expr();

// RatForm arithmetic; every result satisfies the invariants.
RatForm rf_from_mpq(const mpq_class& q);
RatForm rf_zero();
RatForm rf_one();
RatForm rf_var(Var v);
bool rf_is_zero(const RatForm& r);
bool rf_is_one(const RatForm& r);
std::optional<mpq_class> rf_as_rational(const RatForm& r);
RatForm normalize(Poly num, Poly den);
RatForm rf_add(const RatForm& a, const RatForm& b);
RatForm rf_sub(const RatForm& a, const RatForm& b);
RatForm rf_mul(const RatForm& a, const RatForm& b);
RatForm rf_div(const RatForm& a, const RatForm& b);
RatForm rf_neg(const RatForm& a);
RatForm rf_inv(const RatForm& a);
RatForm rf_pow(const RatForm& a, long k);

// Kernel builders with the cheap always-valid simplifications.
RatForm build_exp(const RatForm& arg, const Assumptions* assm);
RatForm build_log(const RatForm& arg, const Assumptions* assm);
RatForm build_sqrt(const RatForm& arg, const Assumptions* assm);
RatForm build_abs(const RatForm& arg, const Assumptions* assm);
RatForm build_sin(const RatForm& arg);
RatForm build_cos(const RatForm& arg);
// u^(p/q); nullopt when no sound rewrite exists (caller keeps a kernel).
std::optional<RatForm> rational_power(const RatForm& u, const mpq_class& e,
                                      const Assumptions* assm);

// Sign of r as a function on the assumption domain: +1, -1, or nullopt.
std::optional<int> sign_of(const RatForm& r, const Assumptions& assm);
// r factored over the assumption polynomials: r = pre * prod f_i^{e_i} * rest
// with each f_i primitive of known sign s_i.
struct Factoring {
  mpq_class pre = 1;
  struct Piece {
    Poly f;
    int sign;  // sign of f on the domain
    long exponent;
  };
  std::vector<Piece> pieces;
  RatForm rest;
};
Factoring factor_by_assumptions(const RatForm& r, const Assumptions& assm);

// Variable substitution v -> form; recurses through kernel and jet
// arguments. fn returning nullopt leaves the variable in place.
RatForm subst_vars(const RatForm& r,
                   const std::function<std::optional<RatForm>(Var)>& fn);

RatForm rf_derivative(const RatForm& r, Var coordVar, const Assumptions* assm);

// Numeric evaluation of a canonical form; leaf values (coords and jets)
// come from the resolver, kernels are computed recursively. The resolver
// throws EvalError for variables it cannot value.
double eval_rf_double(const RatForm& r, const std::function<double(Var)>& leaf);
// MPFR path; result rounded to double at the end.
double eval_rf_mpfr(const RatForm& r,
                    const std::function<mpq_class(Var)>& leaf, unsigned bits);

std::string print_rf(const RatForm& r);
int print_precedence(Expr e);

std::size_t hash_combine(std::size_t h, std::size_t v);

}  // namespace geodeq::detail
