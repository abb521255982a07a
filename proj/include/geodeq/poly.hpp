#pragma once

// Sparse multivariate polynomials over the integers (GMP mpz coefficients).
// Terms are kept in strictly descending graded-lexicographic order with no
// zero coefficients; every public operation preserves that invariant, so
// equal polynomials have byte-identical term vectors.

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace geodeq {

using Var = std::uint32_t;

// Product of variable powers. Factors are sorted by variable id ascending and
// every exponent is >= 1; the empty factor list is the monomial 1.
struct Monomial {
  std::vector<std::pair<Var, std::uint32_t>> f;

  static Monomial one() { return {}; }
  bool is_one() const { return f.empty(); }
  int total_degree() const;
  std::uint32_t deg_in(Var v) const;
  bool contains(Var v) const { return deg_in(v) > 0; }

  static Monomial mul(const Monomial& a, const Monomial& b);
  // Exact quotient a / b, or nullopt if b does not divide a.
  static std::optional<Monomial> div(const Monomial& a, const Monomial& b);
  static Monomial gcd(const Monomial& a, const Monomial& b);
  Monomial pow(std::uint32_t k) const;
  std::optional<Monomial> root(std::uint32_t k) const;
  // Graded lex: higher total degree first, ties broken lexicographically with
  // lower variable ids more significant. Returns -1, 0, or 1.
  static int cmp(const Monomial& a, const Monomial& b);

  bool operator==(const Monomial& o) const { return f == o.f; }
  std::size_t hash() const;
};

struct Term {
  Monomial m;
  mpz_class c;
};

class Poly {
 public:
  Poly() = default;
  static Poly zero() { return Poly(); }
  static Poly from_int(long v);
  static Poly from_mpz(const mpz_class& v);
  static Poly variable(Var v, std::uint32_t exp = 1);
  // Sorts, merges duplicates, and drops zero coefficients.
  static Poly from_terms(std::vector<Term> ts);

  bool is_zero() const { return t_.empty(); }
  bool is_constant() const { return t_.empty() || (t_.size() == 1 && t_[0].m.is_one()); }
  // Constant value if is_constant(), including 0 for the zero polynomial.
  mpz_class constant_value() const;
  bool is_one() const { return is_constant() && constant_value() == 1; }
  const std::vector<Term>& terms() const { return t_; }
  std::size_t term_count() const { return t_.size(); }
  const Term& leading() const { return t_.front(); }
  int total_degree() const;
  std::uint32_t deg_in(Var v) const;
  std::vector<Var> vars() const;
  bool contains(Var v) const { return deg_in(v) > 0; }

  friend Poly operator+(const Poly& a, const Poly& b);
  friend Poly operator-(const Poly& a, const Poly& b);
  friend Poly operator*(const Poly& a, const Poly& b);
  Poly operator-() const;
  bool operator==(const Poly& o) const { return equal(*this, o); }
  static bool equal(const Poly& a, const Poly& b);
  Poly pow(std::uint32_t k) const;

  // Scale every coefficient; d must divide each coefficient exactly.
  Poly scaled(const mpz_class& c) const;
  Poly divided_by_const(const mpz_class& d) const;
  Poly mul_monomial(const Monomial& m, const mpz_class& c) const;

  // Gcd of all coefficients, nonnegative; 0 for the zero polynomial.
  mpz_class content() const;
  Poly primitive_part() const;
  // Sign of the leading (graded-lex largest) coefficient: -1, 0, or 1.
  int leading_sign() const;

  // Exact quotient a / b over the integers, or nullopt.
  static std::optional<Poly> try_divide(const Poly& a, const Poly& b);
  // Gcd with positive leading coefficient (primitive PRS algorithm).
  static Poly gcd(const Poly& a, const Poly& b);
  // Exact k-th root if this polynomial is a perfect k-th power.
  std::optional<Poly> try_kth_root(std::uint32_t k) const;
  // Formal partial derivative with respect to variable v.
  Poly derivative(Var v) const;

  // View as a univariate polynomial in v: coefficient of v^d at index d.
  std::vector<Poly> coeffs_in(Var v) const;
  static Poly from_coeffs_in(Var v, const std::vector<Poly>& cs);

  std::size_t hash() const;

 private:
  std::vector<Term> t_;
};

}  // namespace geodeq
