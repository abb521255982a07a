#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "geodeq/poly.hpp"

using geodeq::Monomial;
using geodeq::Poly;
using geodeq::Term;
using geodeq::Var;

namespace {

Poly X(Var v, std::uint32_t e = 1) { return Poly::variable(v, e); }
Poly K(long c) { return Poly::from_int(c); }

}  // namespace

TEST_CASE("monomial ordering is graded lex") {
  Monomial x0{{{0, 1}}}, x1{{{1, 1}}}, x0sq{{{0, 2}}}, x0x1{{{0, 1}, {1, 1}}};
  CHECK(Monomial::cmp(x0sq, x0) > 0);
  CHECK(Monomial::cmp(x0, x1) > 0);
  CHECK(Monomial::cmp(x0sq, x0x1) > 0);
  CHECK(Monomial::cmp(x0, x0) == 0);
  CHECK(Monomial::cmp(Monomial::one(), x1) < 0);
}

TEST_CASE("from_terms normalizes duplicates and zeros") {
  Monomial x0{{{0, 1}}};
  Poly p = Poly::from_terms({{x0, mpz_class(3)}, {x0, mpz_class(-3)}, {Monomial::one(), mpz_class(5)}});
  CHECK(p.is_constant());
  CHECK(p.constant_value() == 5);
}

TEST_CASE("ring arithmetic") {
  Poly p = (X(0) + K(1)) * (X(0) - K(1));
  CHECK(p == X(0, 2) - K(1));
  CHECK((p - p).is_zero());
  CHECK((X(0) + X(1)).pow(2) == X(0, 2) + K(2) * X(0) * X(1) + X(1, 2));
  CHECK(p.total_degree() == 2);
  CHECK(p.deg_in(0) == 2);
  CHECK(p.deg_in(1) == 0);
}

TEST_CASE("content and primitive part") {
  Poly p = K(6) * X(0) + K(10) * X(1);
  CHECK(p.content() == 2);
  CHECK(p.primitive_part() == K(3) * X(0) + K(5) * X(1));
  CHECK((-p).leading_sign() == -1);
}

TEST_CASE("exact division") {
  Poly a = (X(0) + X(1)) * (X(0, 2) - K(2) * X(1) + K(7));
  auto q = Poly::try_divide(a, X(0) + X(1));
  REQUIRE(q.has_value());
  CHECK(*q == X(0, 2) - K(2) * X(1) + K(7));
  CHECK(!Poly::try_divide(a + K(1), X(0) + X(1)).has_value());
  CHECK(!Poly::try_divide(X(0), K(2)).has_value());
}

TEST_CASE("gcd univariate") {
  Poly a = (X(0) + K(1)).pow(2) * (X(0) - K(3));
  Poly b = (X(0) + K(1)) * (X(0) + K(5));
  CHECK(Poly::gcd(a, b) == X(0) + K(1));
  CHECK(Poly::gcd(a, Poly::zero()) == a);
  CHECK(Poly::gcd(Poly::zero(), -b) == b);
}

TEST_CASE("gcd multivariate with contents") {
  Poly g = K(3) * (X(0) * X(1) + K(1));
  Poly a = g * (X(0, 2) + X(2));
  Poly b = g * (X(1) - K(4)) * K(2);
  Poly got = Poly::gcd(a, b);
  CHECK(got == g);
  CHECK(Poly::gcd(X(0), X(1)).is_one());
  CHECK(Poly::gcd(K(12), K(18)) == K(6));
}

TEST_CASE("kth root") {
  Poly w = K(2) * X(0, 2) - X(1) * X(2) + K(3);
  auto r2 = (w * w).try_kth_root(2);
  REQUIRE(r2.has_value());
  CHECK((*r2 == w || *r2 == -w));
  auto r3 = (w * w * w).try_kth_root(3);
  REQUIRE(r3.has_value());
  CHECK(*r3 == w);
  CHECK(!(w * w + K(1)).try_kth_root(2).has_value());
  auto rneg = (K(-8) * X(0, 3)).try_kth_root(3);
  REQUIRE(rneg.has_value());
  CHECK(*rneg == K(-2) * X(0));
  CHECK(!(-(w * w)).try_kth_root(2).has_value());
  auto rc = K(729).try_kth_root(6);
  REQUIRE(rc.has_value());
  CHECK(rc->constant_value() == 3);
}

TEST_CASE("derivative") {
  Poly p = X(0, 3) * X(1) + K(4) * X(0) + K(9);
  CHECK(p.derivative(0) == K(3) * X(0, 2) * X(1) + K(4));
  CHECK(p.derivative(1) == X(0, 3));
  CHECK(p.derivative(2).is_zero());
}

TEST_CASE("univariate view round trip") {
  Poly p = X(0, 2) * X(1) + K(2) * X(0) + X(1, 3) + K(5);
  auto cs = p.coeffs_in(0);
  REQUIRE(cs.size() == 3);
  CHECK(cs[0] == X(1, 3) + K(5));
  CHECK(cs[1] == K(2));
  CHECK(cs[2] == X(1));
  CHECK(Poly::from_coeffs_in(0, cs) == p);
}

TEST_CASE("hash distinguishes and agrees") {
  Poly a = X(0) + K(1), b = X(0) + K(1), c = X(0) + K(2);
  CHECK(a.hash() == b.hash());
  CHECK(a.hash() != c.hash());
}
