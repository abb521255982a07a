#include <algorithm>

#include "internal.hpp"

namespace geodeq::detail {

namespace {

Poly pone() { return Poly::from_int(1); }

bool monomial_reducible(const Monomial& m) {
  int expCount = 0;
  for (const auto& [v, e] : m.f) {
    const VarInfo& info = var_info(v);
    if (info.kind != VarKind::Kernel) continue;
    switch (info.op) {
      case KernelOp::Exp:
        ++expCount;
        if (e >= 2 || expCount >= 2) return true;
        break;
      case KernelOp::Sin:
      case KernelOp::Sqrt:
      case KernelOp::Abs:
        if (e >= 2) return true;
        break;
      default:
        break;
    }
  }
  return false;
}

bool has_reducible(const Poly& p) {
  for (const auto& t : p.terms())
    if (monomial_reducible(t.m)) return true;
  return false;
}

struct RawFrac {
  Poly num = Poly::zero();
  Poly den = Poly::from_int(1);
};

RawFrac raw_add(const RawFrac& a, const RawFrac& b) {
  return {a.num * b.den + b.num * a.den, a.den * b.den};
}

RawFrac raw_mul(const RawFrac& a, const RawFrac& b) {
  return {a.num * b.num, a.den * b.den};
}

// One reduction sweep over the terms of p. Output may still contain
// reducible products; normalize() iterates to a fixpoint.
RawFrac reduce_pass(const Poly& p) {
  RawFrac acc;
  for (const auto& t : p.terms()) {
    RawFrac f;
    f.num = Poly::from_mpz(t.c);
    Monomial plain;
    // exponent-weighted exp arguments to merge
    RatForm expArg = rf_zero();
    bool haveExp = false;
    for (const auto& [v, e] : t.m.f) {
      const VarInfo& info = var_info(v);
      if (info.kind != VarKind::Kernel) {
        plain.f.emplace_back(v, e);
        continue;
      }
      switch (info.op) {
        case KernelOp::Exp: {
          RatForm w = rf_mul(rf_from_mpq(mpq_class(static_cast<long>(e))), rf_of(info.arg));
          expArg = haveExp ? rf_add(expArg, w) : w;
          haveExp = true;
          break;
        }
        case KernelOp::Sin: {
          std::uint32_t half = e / 2;
          if (half > 0) {
            Var c = kernel_var(KernelOp::Cos, info.arg);
            Poly one_minus = pone() - Poly::variable(c, 2);
            f.num = f.num * one_minus.pow(half);
          }
          if (e % 2) plain.f.emplace_back(v, 1);
          break;
        }
        case KernelOp::Sqrt: {
          std::uint32_t half = e / 2;
          if (half > 0) {
            const RatForm& u = rf_of(info.arg);
            f.num = f.num * u.num.pow(half);
            f.den = f.den * u.den.pow(half);
          }
          if (e % 2) plain.f.emplace_back(v, 1);
          break;
        }
        case KernelOp::Abs: {
          std::uint32_t half = e / 2;
          if (half > 0) {
            const RatForm& u = rf_of(info.arg);
            f.num = f.num * u.num.pow(2 * half);
            f.den = f.den * u.den.pow(2 * half);
          }
          if (e % 2) plain.f.emplace_back(v, 1);
          break;
        }
        default:
          plain.f.emplace_back(v, e);
          break;
      }
    }
    if (haveExp && !rf_is_zero(expArg)) {
      // exp arguments are sign-normalized so exp(u) and exp(-u) share a var
      bool inDen = expArg.num.leading_sign() < 0;
      RatForm pos = inDen ? rf_neg(expArg) : expArg;
      Var ev = kernel_var(KernelOp::Exp, expr_of(pos));
      if (inDen) {
        f.den = f.den * Poly::variable(ev);
      } else {
        plain.f.emplace_back(ev, 1);
      }
    }
    // plain may be unsorted after appends; rebuild through from_terms
    Poly pm = Poly::from_terms({{plain, mpz_class(1)}});
    f.num = f.num * pm;
    acc = raw_add(acc, f);
  }
  return acc;
}

void extract_square_content(mpz_class n, mpz_class& sq, mpz_class& rest) {
  // n > 0; n = sq^2 * rest with rest square-free over small primes
  sq = 1;
  rest = 1;
  mpz_class r;
  if (mpz_root(r.get_mpz_t(), n.get_mpz_t(), 2)) {
    sq = r;
    return;
  }
  static const long primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47};
  for (long p : primes) {
    mpz_class pp = mpz_class(p) * p;
    while (mpz_divisible_p(n.get_mpz_t(), pp.get_mpz_t())) {
      mpz_class q;
      mpz_divexact(q.get_mpz_t(), n.get_mpz_t(), pp.get_mpz_t());
      n = q;
      sq *= p;
    }
  }
  rest = n;
}

}  // namespace

RatForm normalize(Poly num, Poly den) {
  if (den.is_zero()) throw DomainError("division by zero expression");
  if (num.is_zero()) return {Poly::zero(), pone()};
  for (int round = 0;; ++round) {
    if (round > 64) throw std::logic_error("canonical reduction did not converge");
    if (!has_reducible(num) && !has_reducible(den)) break;
    RawFrac rn = reduce_pass(num);
    RawFrac rd = reduce_pass(den);
    num = rn.num * rd.den;
    den = rn.den * rd.num;
    if (den.is_zero()) throw DomainError("division by zero expression");
    if (num.is_zero()) return {Poly::zero(), pone()};
  }
  Poly g = Poly::gcd(num, den);
  if (!g.is_one()) {
    auto qn = Poly::try_divide(num, g);
    auto qd = Poly::try_divide(den, g);
    if (!qn || !qd) throw std::logic_error("gcd does not divide");
    num = *qn;
    den = *qd;
  }
  if (den.leading_sign() < 0) {
    num = -num;
    den = -den;
  }
  mpz_class cn = num.content(), cd = den.content(), c;
  mpz_gcd(c.get_mpz_t(), cn.get_mpz_t(), cd.get_mpz_t());
  if (c > 1) {
    num = num.divided_by_const(c);
    den = den.divided_by_const(c);
  }
  return {std::move(num), std::move(den)};
}

RatForm rf_from_mpq(const mpq_class& q) {
  return {Poly::from_mpz(q.get_num()), Poly::from_mpz(q.get_den())};
}

RatForm rf_zero() { return {Poly::zero(), pone()}; }
RatForm rf_one() { return {pone(), pone()}; }
RatForm rf_var(Var v) { return {Poly::variable(v), pone()}; }

bool rf_is_zero(const RatForm& r) { return r.num.is_zero(); }

bool rf_is_one(const RatForm& r) {
  return r.num.is_constant() && r.den.is_constant() && r.num.constant_value() == 1 &&
         r.den.constant_value() == 1;
}

std::optional<mpq_class> rf_as_rational(const RatForm& r) {
  if (!r.num.is_constant() || !r.den.is_constant()) return std::nullopt;
  mpq_class q(r.num.constant_value(), r.den.constant_value());
  q.canonicalize();
  return q;
}

RatForm rf_add(const RatForm& a, const RatForm& b) {
  return normalize(a.num * b.den + b.num * a.den, a.den * b.den);
}

RatForm rf_sub(const RatForm& a, const RatForm& b) { return rf_add(a, rf_neg(b)); }

RatForm rf_mul(const RatForm& a, const RatForm& b) {
  return normalize(a.num * b.num, a.den * b.den);
}

RatForm rf_div(const RatForm& a, const RatForm& b) {
  if (b.num.is_zero()) throw DomainError("division by zero expression");
  return normalize(a.num * b.den, a.den * b.num);
}

RatForm rf_neg(const RatForm& a) { return {-a.num, a.den}; }

RatForm rf_inv(const RatForm& a) {
  if (a.num.is_zero()) throw DomainError("division by zero expression");
  return normalize(a.den, a.num);
}

RatForm rf_pow(const RatForm& a, long k) {
  if (k == 0) return rf_one();
  if (k < 0) return rf_inv(rf_pow(a, -k));
  return normalize(a.num.pow(static_cast<std::uint32_t>(k)),
                   a.den.pow(static_cast<std::uint32_t>(k)));
}

Factoring factor_by_assumptions(const RatForm& r, const Assumptions& assm) {
  Factoring out;
  Poly num = r.num, den = r.den;
  for (const auto& item : assm.items) {
    const RatForm& a = rf_of(item.expr);
    if (!a.den.is_constant() || a.num.is_constant()) continue;
    Poly f = a.num.primitive_part();
    int s;
    if (item.strictly_positive) {
      // a.den has positive leading constant, content > 0: sign(f) = sign(a)
      s = 1;
    } else {
      s = 0;  // nonzero with undetermined sign; usable for even exponents
    }
    long e = 0;
    while (true) {
      auto q = Poly::try_divide(num, f);
      if (!q) break;
      num = *q;
      ++e;
    }
    while (true) {
      auto q = Poly::try_divide(den, f);
      if (!q) break;
      den = *q;
      --e;
    }
    if (e != 0) out.pieces.push_back({f, s, e});
  }
  out.rest = normalize(std::move(num), std::move(den));
  return out;
}

namespace {

// Exact rational evaluation of a poly whose vars are coords or order-0 jets
// with values in the sample map; nullopt when some var has no value.
std::optional<mpq_class> sample_eval_poly(const Poly& p, const Assumptions& assm) {
  mpq_class acc = 0;
  for (const auto& t : p.terms()) {
    mpq_class term(t.c);
    for (const auto& [v, e] : t.m.f) {
      const VarInfo& info = var_info(v);
      mpq_class val;
      if (info.kind == VarKind::Coord) {
        auto it = assm.sample.find(info.name);
        if (it == assm.sample.end()) return std::nullopt;
        val = it->second;
      } else if (info.kind == VarKind::Jet) {
        bool zeroOrder = true;
        for (auto o : info.orders)
          if (o != 0) zeroOrder = false;
        auto it = assm.sample.find(info.name);
        if (!zeroOrder || it == assm.sample.end()) return std::nullopt;
        val = it->second;
      } else {
        return std::nullopt;
      }
      for (std::uint32_t i = 0; i < e; ++i) term *= val;
    }
    acc += term;
  }
  return acc;
}

std::optional<int> sample_sign(const RatForm& r, const Assumptions& assm) {
  auto n = sample_eval_poly(r.num, assm);
  auto d = sample_eval_poly(r.den, assm);
  if (!n || !d || *n == 0 || *d == 0) return std::nullopt;
  return sgn(*n) * sgn(*d);
}

bool is_perfect_square_rf(const RatForm& r) {
  return r.num.try_kth_root(2).has_value() && r.den.try_kth_root(2).has_value();
}

}  // namespace

std::optional<int> sign_of(const RatForm& r, const Assumptions& assm) {
  if (rf_is_zero(r)) return 0;
  if (auto q = rf_as_rational(r)) return sgn(*q);
  Factoring f = factor_by_assumptions(r, assm);
  int sign = 1;
  bool ok = true;
  for (const auto& p : f.pieces) {
    if (p.exponent % 2 == 0) continue;
    if (p.sign == 0) {
      ok = false;
      break;
    }
    if (p.sign < 0) sign = -sign;
  }
  if (ok) {
    if (auto q = rf_as_rational(f.rest)) {
      if (*q != 0) return sign * sgn(*q);
    } else if (is_perfect_square_rf(f.rest)) {
      // nonnegative; nonzero wherever r is (sign queries arise for
      // continuous nonvanishing quantities on a connected domain)
      return sign;
    }
  }
  // Fallback: sign at the declared sample point. Sound for continuous
  // nonvanishing quantities on a connected domain, which is the contract of
  // every caller (determinant ratios, declared-nonzero factors).
  return sample_sign(r, assm);
}

RatForm build_sin(const RatForm& arg) {
  if (rf_is_zero(arg)) return rf_zero();
  bool neg = arg.num.leading_sign() < 0;
  RatForm pos = neg ? rf_neg(arg) : arg;
  RatForm v = rf_var(kernel_var(KernelOp::Sin, expr_of(pos)));
  return neg ? rf_neg(v) : v;
}

RatForm build_cos(const RatForm& arg) {
  if (rf_is_zero(arg)) return rf_one();
  bool neg = arg.num.leading_sign() < 0;
  RatForm pos = neg ? rf_neg(arg) : arg;
  return rf_var(kernel_var(KernelOp::Cos, expr_of(pos)));
}

std::optional<RatForm> rational_power(const RatForm& u, const mpq_class& e,
                                      const Assumptions* assm) {
  mpq_class q = e;
  q.canonicalize();
  if (rf_is_one(u)) return rf_one();
  if (rf_is_zero(u)) {
    if (q > 0) return rf_zero();
    throw DomainError("zero raised to a nonpositive power");
  }
  if (q == 0) return rf_one();
  mpz_class den = q.get_den();
  if (!mpz_fits_slong_p(q.get_num().get_mpz_t()) || !mpz_fits_slong_p(den.get_mpz_t()))
    return std::nullopt;
  long p = q.get_num().get_si();
  long dq = den.get_si();
  if (dq == 1) return rf_pow(u, p);
  long odd = dq;
  int twos = 0;
  while (odd % 2 == 0) {
    odd /= 2;
    ++twos;
  }
  RatForm w = u;
  if (odd > 1) {
    auto rn = u.num.try_kth_root(static_cast<std::uint32_t>(odd));
    auto rd = u.den.try_kth_root(static_cast<std::uint32_t>(odd));
    if (!rn || !rd) return std::nullopt;
    // odd root of a positive-on-domain base is itself positive
    w = normalize(std::move(*rn), std::move(*rd));
  }
  for (int i = 0; i < twos; ++i) w = build_sqrt(w, assm);
  return rf_pow(w, p);
}

RatForm build_exp(const RatForm& arg, const Assumptions* assm) {
  if (rf_is_zero(arg)) return rf_one();
  RatForm out = rf_one();
  std::vector<Term> residual;
  if (arg.den.is_constant()) {
    mpz_class d = arg.den.constant_value();
    for (const auto& t : arg.num.terms()) {
      bool handled = false;
      if (t.m.f.size() == 1 && t.m.f[0].second == 1) {
        const VarInfo& info = var_info(t.m.f[0].first);
        if (info.kind == VarKind::Kernel && info.op == KernelOp::Log) {
          mpq_class c(t.c, d);
          c.canonicalize();
          auto pw = rational_power(rf_of(info.arg), c, assm);
          if (pw) {
            out = rf_mul(out, *pw);
            handled = true;
          }
        }
      }
      if (!handled) residual.push_back(t);
    }
  } else {
    residual.assign(arg.num.terms().begin(), arg.num.terms().end());
  }
  if (!residual.empty()) {
    RatForm rest = normalize(Poly::from_terms(std::move(residual)), arg.den);
    bool inDen = rest.num.leading_sign() < 0;
    RatForm pos = inDen ? rf_neg(rest) : rest;
    RatForm v = rf_var(kernel_var(KernelOp::Exp, expr_of(pos)));
    out = rf_mul(out, inDen ? rf_inv(v) : v);
  }
  return out;
}

namespace {

RatForm log_kernel(const RatForm& arg) {
  return rf_var(kernel_var(KernelOp::Log, expr_of(arg)));
}

RatForm log_of_rational(const mpq_class& q) {
  if (q <= 0) throw DomainError("log of a nonpositive constant");
  if (q == 1) return rf_zero();
  return log_kernel(rf_from_mpq(q));
}

// log of a form known positive on the domain; no assumption factoring.
RatForm build_log_basic(const RatForm& u) {
  if (rf_is_one(u)) return rf_zero();
  if (auto q = rf_as_rational(u)) return log_of_rational(*q);
  // single exp factor: log(c * exp(w) / d) = log(c/d) + w
  if (u.num.term_count() == 1 && u.den.is_constant()) {
    const Term& t = u.num.leading();
    if (t.m.f.size() == 1 && t.m.f[0].second == 1) {
      const VarInfo& info = var_info(t.m.f[0].first);
      if (info.kind == VarKind::Kernel && info.op == KernelOp::Exp) {
        mpq_class c(t.c, u.den.constant_value());
        c.canonicalize();
        return rf_add(log_of_rational(c), rf_of(info.arg));
      }
    }
  }
  // positive rational content splits off
  mpz_class cn = u.num.content(), cd = u.den.content();
  mpq_class c(cn, cd);
  c.canonicalize();
  Poly pn = u.num.divided_by_const(cn);
  Poly pd = u.den.divided_by_const(cd);
  RatForm rest{pn, pd};
  RatForm out = c == 1 ? rf_zero() : log_of_rational(c);
  // odd perfect powers: rest = w^k with k odd forces w > 0 on the domain
  for (std::uint32_t k = 9; k >= 3; k -= 2) {
    auto rn = rest.num.try_kth_root(k);
    auto rd = rest.den.try_kth_root(k);
    if (rn && rd) {
      return rf_add(out, rf_mul(rf_from_mpq(mpq_class(static_cast<long>(k))),
                                build_log_basic(normalize(std::move(*rn), std::move(*rd)))));
    }
  }
  return rf_add(out, log_kernel(rest));
}

}  // namespace

RatForm build_log(const RatForm& arg, const Assumptions* assm) {
  if (rf_is_zero(arg)) throw DomainError("log of zero");
  if (!assm) return build_log_basic(arg);
  Factoring f = factor_by_assumptions(arg, *assm);
  mpq_class unitSign = 1;
  RatForm out = rf_zero();
  for (const auto& p : f.pieces) {
    int s = p.sign;
    if (s == 0) {
      auto ss = sample_sign({p.f, pone()}, *assm);
      if (ss) s = *ss;
    }
    if (s == 0) {
      // sign unresolved: fold the factor back into the rest
      RatForm back = rf_pow({p.f, pone()}, p.exponent);
      f.rest = rf_mul(f.rest, back);
      continue;
    }
    if (s < 0 && p.exponent % 2 != 0) unitSign = -unitSign;
    Poly pf = s < 0 ? -p.f : p.f;
    out = rf_add(out, rf_mul(rf_from_mpq(mpq_class(p.exponent)), log_kernel({pf, pone()})));
  }
  // the leftover must be positive for the total argument to be positive
  RatForm rest = f.rest;
  if (unitSign < 0) rest = rf_neg(rest);
  // even perfect powers resolvable via the sample sign
  if (!rf_is_one(rest) && !rf_as_rational(rest)) {
    for (std::uint32_t k = 8; k >= 2; k -= 2) {
      auto rn = rest.num.try_kth_root(k);
      auto rd = rest.den.try_kth_root(k);
      if (rn && rd) {
        RatForm w = normalize(std::move(*rn), std::move(*rd));
        auto s = sign_of(w, *assm);
        if (!s || *s == 0) break;
        if (*s < 0) w = rf_neg(w);
        return rf_add(out, rf_mul(rf_from_mpq(mpq_class(static_cast<long>(k))),
                                  build_log_basic(w)));
      }
    }
  }
  return rf_add(out, build_log_basic(rest));
}

RatForm build_sqrt(const RatForm& arg, const Assumptions* assm) {
  if (rf_is_zero(arg)) return rf_zero();
  if (auto q = rf_as_rational(arg)) {
    if (*q < 0) throw DomainError("sqrt of a negative constant");
    mpz_class rn, rd;
    if (mpz_root(rn.get_mpz_t(), q->get_num().get_mpz_t(), 2) &&
        mpz_root(rd.get_mpz_t(), q->get_den().get_mpz_t(), 2)) {
      mpq_class r(rn, rd);
      r.canonicalize();
      return rf_from_mpq(r);
    }
  }
  // perfect square of a polynomial quotient: sqrt(w^2) = |w|
  {
    auto rn = arg.num.try_kth_root(2);
    auto rd = arg.den.try_kth_root(2);
    if (rn && rd) return build_abs(normalize(std::move(*rn), std::move(*rd)), assm);
  }
  // extract square parts of the integer contents
  mpz_class cn = arg.num.content(), cd = arg.den.content();
  mpz_class sn, restn, sd, restd;
  extract_square_content(cn, sn, restn);
  extract_square_content(cd, sd, restd);
  RatForm inner = normalize(arg.num.divided_by_const(sn * sn),
                            arg.den.divided_by_const(sd * sd));
  mpq_class outer(sn, sd);
  outer.canonicalize();
  RatForm v = rf_var(kernel_var(KernelOp::Sqrt, expr_of(inner)));
  return rf_mul(rf_from_mpq(outer), v);
}

RatForm build_abs(const RatForm& arg, const Assumptions* assm) {
  if (rf_is_zero(arg)) return rf_zero();
  if (auto q = rf_as_rational(arg)) {
    mpq_class a = *q < 0 ? mpq_class(-*q) : *q;
    return rf_from_mpq(a);
  }
  if (assm) {
    auto s = sign_of(arg, *assm);
    if (s && *s != 0) return *s < 0 ? rf_neg(arg) : arg;
  }
  if (is_perfect_square_rf(arg)) return arg;  // |w^2/v^2| = w^2/v^2
  // split positive content: |c*u| = c*|u| for c > 0
  mpz_class cn = arg.num.content(), cd = arg.den.content();
  mpq_class c(cn, cd);
  c.canonicalize();
  Poly pn = arg.num.divided_by_const(cn);
  Poly pd = arg.den.divided_by_const(cd);
  bool neg = pn.leading_sign() < 0;
  RatForm inner = neg ? RatForm{-pn, pd} : RatForm{pn, pd};
  RatForm v = rf_var(kernel_var(KernelOp::Abs, expr_of(inner)));
  return rf_mul(rf_from_mpq(c), v);
}

RatForm subst_vars(const RatForm& r,
                   const std::function<std::optional<RatForm>(Var)>& fn) {
  std::map<Var, std::optional<RatForm>> memo;
  std::function<std::optional<RatForm>(Var)> resolve = [&](Var v) -> std::optional<RatForm> {
    auto it = memo.find(v);
    if (it != memo.end()) return it->second;
    memo.emplace(v, std::nullopt);  // cycle guard; kernel args cannot cycle
    std::optional<RatForm> res = fn(v);
    if (!res) {
      const VarInfo& info = var_info(v);
      if (info.kind == VarKind::Kernel) {
        const RatForm& a = rf_of(info.arg);
        RatForm a2 = subst_vars(a, fn);
        if (!(a2 == a)) {
          switch (info.op) {
            case KernelOp::Exp:
              res = build_exp(a2, nullptr);
              break;
            case KernelOp::Log:
              res = build_log(a2, nullptr);
              break;
            case KernelOp::Sin:
              res = build_sin(a2);
              break;
            case KernelOp::Cos:
              res = build_cos(a2);
              break;
            case KernelOp::Sqrt:
              res = build_sqrt(a2, nullptr);
              break;
            case KernelOp::Abs:
              res = build_abs(a2, nullptr);
              break;
          }
        }
      } else if (info.kind == VarKind::Jet) {
        bool changed = false;
        std::vector<Expr> args2;
        args2.reserve(info.args.size());
        for (Expr a : info.args) {
          RatForm af = subst_vars(rf_of(a), fn);
          Expr a2 = expr_of(af);
          if (!a2.same(canonicalize(a))) changed = true;
          args2.push_back(a2);
        }
        if (changed) res = rf_var(jet_var(info.name, info.orders, std::move(args2)));
      }
    }
    memo[v] = res;
    return res;
  };

  auto eval_poly = [&](const Poly& p) -> RatForm {
    RatForm acc = rf_zero();
    for (const auto& t : p.terms()) {
      RatForm f = rf_from_mpq(mpq_class(t.c));
      Monomial plain;
      for (const auto& [v, e] : t.m.f) {
        auto sub = resolve(v);
        if (sub) {
          f = rf_mul(f, rf_pow(*sub, static_cast<long>(e)));
        } else {
          plain.f.emplace_back(v, e);
        }
      }
      if (!plain.is_one())
        f = rf_mul(f, {Poly::from_terms({{plain, mpz_class(1)}}), pone()});
      acc = rf_add(acc, f);
    }
    return acc;
  };

  RatForm n = eval_poly(r.num);
  RatForm d = eval_poly(r.den);
  return rf_div(n, d);
}

}  // namespace geodeq::detail

namespace geodeq {

using namespace detail;

Expr canonicalize(Expr e) {
  if (e.kind() == Kind::Canon) return e;
  Expr memo = canon_memo_get(e);
  if (valid(memo)) return memo;
  RatForm rf;
  const Node& n = node_of(e);
  switch (n.kind) {
    case Kind::Rational:
      rf = rf_from_mpq(n.q);
      break;
    case Kind::Coord:
      rf = rf_var(coord_var(n.name));
      break;
    case Kind::Apply: {
      std::vector<Expr> args;
      args.reserve(n.kids.size());
      for (Expr k : n.kids) args.push_back(canonicalize(k));
      rf = rf_var(jet_var(n.name, n.orders, std::move(args)));
      break;
    }
    case Kind::Sum: {
      rf = rf_zero();
      for (Expr k : n.kids) rf = rf_add(rf, rf_of(k));
      break;
    }
    case Kind::Product: {
      rf = rf_one();
      for (Expr k : n.kids) rf = rf_mul(rf, rf_of(k));
      break;
    }
    case Kind::Power: {
      const RatForm& base = rf_of(n.kids[0]);
      if (n.q.get_den() == 1) {
        if (!mpz_fits_slong_p(n.q.get_num().get_mpz_t()))
          throw DomainError("exponent too large");
        rf = rf_pow(base, n.q.get_num().get_si());
      } else {
        auto r = rational_power(base, n.q, nullptr);
        if (r) {
          rf = *r;
        } else {
          // principal branch: u^q = exp(q log u) on the domain u > 0
          rf = build_exp(rf_mul(rf_from_mpq(n.q), build_log(base, nullptr)), nullptr);
        }
      }
      break;
    }
    case Kind::Exp:
      rf = build_exp(rf_of(n.kids[0]), nullptr);
      break;
    case Kind::Log:
      rf = build_log(rf_of(n.kids[0]), nullptr);
      break;
    case Kind::Sin:
      rf = build_sin(rf_of(n.kids[0]));
      break;
    case Kind::Cos:
      rf = build_cos(rf_of(n.kids[0]));
      break;
    case Kind::Sqrt:
      rf = build_sqrt(rf_of(n.kids[0]), nullptr);
      break;
    case Kind::Abs:
      rf = build_abs(rf_of(n.kids[0]), nullptr);
      break;
    case Kind::Canon:
      return e;
  }
  Expr c = expr_of(std::move(rf));
  canon_memo_put(e, c);
  return c;
}

Expr make_exp(Expr a, const Assumptions* assm) {
  return expr_of(build_exp(rf_of(a), assm));
}

Expr make_log(Expr a, const Assumptions* assm) {
  return expr_of(build_log(rf_of(a), assm));
}

Expr make_sqrt(Expr a, const Assumptions* assm) {
  return expr_of(build_sqrt(rf_of(a), assm));
}

Expr make_abs(Expr a, const Assumptions* assm) {
  return expr_of(build_abs(rf_of(a), assm));
}

Expr make_power(Expr base, const mpq_class& exponent, const Assumptions* assm) {
  mpq_class q = exponent;
  q.canonicalize();
  const RatForm& b = rf_of(base);
  if (q.get_den() == 1 && mpz_fits_slong_p(q.get_num().get_mpz_t()))
    return expr_of(rf_pow(b, q.get_num().get_si()));
  auto r = rational_power(b, q, assm);
  if (r) return expr_of(*r);
  return expr_of(build_exp(rf_mul(rf_from_mpq(q), build_log(b, assm)), assm));
}

Expr substitute_jets(Expr e, const std::map<std::string, Expr>& defs) {
  const RatForm& r = rf_of(e);
  RatForm out = subst_vars(r, [&](Var v) -> std::optional<RatForm> {
    const VarInfo& info = var_info(v);
    if (info.kind != VarKind::Jet) return std::nullopt;
    auto it = defs.find(info.name);
    if (it == defs.end()) return std::nullopt;
    Expr body = it->second;
    // differentiate the body per argument, then substitute arguments in
    for (std::size_t k = 0; k < info.args.size(); ++k) {
      const RatForm& af = rf_of(info.args[k]);
      if (!(af.den.is_one() && af.num.term_count() == 1 &&
            af.num.leading().c == 1 && af.num.leading().m.f.size() == 1 &&
            af.num.leading().m.f[0].second == 1 &&
            var_info(af.num.leading().m.f[0].first).kind == VarKind::Coord)) {
        throw DomainError("substitute_jets: jet argument is not a coordinate");
      }
      const std::string& cn = var_info(af.num.leading().m.f[0].first).name;
      for (std::uint32_t o = 0; o < info.orders[k]; ++o)
        body = differentiate(body, cn);
    }
    return rf_of(body);
  });
  return expr_of(std::move(out));
}

Expr substitute_jet(Expr e, const std::string& fn,
                    const std::vector<std::uint32_t>& orders, Expr value) {
  const RatForm& r = rf_of(e);
  const RatForm& val = rf_of(value);
  RatForm out = subst_vars(r, [&](Var v) -> std::optional<RatForm> {
    const VarInfo& info = var_info(v);
    if (info.kind != VarKind::Jet || info.name != fn || info.orders != orders)
      return std::nullopt;
    return val;
  });
  return expr_of(std::move(out));
}

}  // namespace geodeq
