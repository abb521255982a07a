#include <mpfr.h>

#include <cmath>

#include "internal.hpp"

namespace geodeq::detail {

namespace {

double kernel_eval_double(const VarInfo& info,
                          const std::function<double(Var)>& leaf) {
  double a = eval_rf_double(rf_of(info.arg), leaf);
  switch (info.op) {
    case KernelOp::Exp:
      return std::exp(a);
    case KernelOp::Log:
      if (a <= 0) throw EvalError("log of a nonpositive value");
      return std::log(a);
    case KernelOp::Sin:
      return std::sin(a);
    case KernelOp::Cos:
      return std::cos(a);
    case KernelOp::Sqrt:
      if (a < 0) throw EvalError("sqrt of a negative value");
      return std::sqrt(a);
    case KernelOp::Abs:
      return std::fabs(a);
  }
  throw EvalError("unknown kernel");
}

double var_eval_double(Var v, const std::function<double(Var)>& leaf) {
  const VarInfo& info = var_info(v);
  if (info.kind == VarKind::Kernel) return kernel_eval_double(info, leaf);
  return leaf(v);
}

double poly_eval_double(const Poly& p, const std::function<double(Var)>& leaf) {
  double acc = 0;
  for (const auto& t : p.terms()) {
    double f = mpz_get_d(t.c.get_mpz_t());
    for (const auto& [v, e] : t.m.f) {
      double x = var_eval_double(v, leaf);
      for (std::uint32_t i = 0; i < e; ++i) f *= x;
    }
    acc += f;
  }
  return acc;
}

// RAII mpfr value
struct MV {
  mpfr_t x;
  explicit MV(mpfr_prec_t p) { mpfr_init2(x, p); }
  ~MV() { mpfr_clear(x); }
  MV(const MV&) = delete;
  MV& operator=(const MV&) = delete;
};

void eval_rf_mpfr_to(mpfr_t out, const RatForm& r,
                     const std::function<mpq_class(Var)>& leaf, mpfr_prec_t bits);

void var_eval_mpfr(mpfr_t out, Var v, const std::function<mpq_class(Var)>& leaf,
                   mpfr_prec_t bits) {
  const VarInfo& info = var_info(v);
  if (info.kind != VarKind::Kernel) {
    mpq_class q = leaf(v);
    mpfr_set_q(out, q.get_mpq_t(), MPFR_RNDN);
    return;
  }
  MV a(bits);
  eval_rf_mpfr_to(a.x, rf_of(info.arg), leaf, bits);
  switch (info.op) {
    case KernelOp::Exp:
      mpfr_exp(out, a.x, MPFR_RNDN);
      break;
    case KernelOp::Log:
      if (mpfr_sgn(a.x) <= 0) throw EvalError("log of a nonpositive value");
      mpfr_log(out, a.x, MPFR_RNDN);
      break;
    case KernelOp::Sin:
      mpfr_sin(out, a.x, MPFR_RNDN);
      break;
    case KernelOp::Cos:
      mpfr_cos(out, a.x, MPFR_RNDN);
      break;
    case KernelOp::Sqrt:
      if (mpfr_sgn(a.x) < 0) throw EvalError("sqrt of a negative value");
      mpfr_sqrt(out, a.x, MPFR_RNDN);
      break;
    case KernelOp::Abs:
      mpfr_abs(out, a.x, MPFR_RNDN);
      break;
  }
}

void poly_eval_mpfr(mpfr_t out, const Poly& p,
                    const std::function<mpq_class(Var)>& leaf, mpfr_prec_t bits) {
  mpfr_set_zero(out, 1);
  MV term(bits), val(bits), pw(bits);
  for (const auto& t : p.terms()) {
    mpfr_set_z(term.x, t.c.get_mpz_t(), MPFR_RNDN);
    for (const auto& [v, e] : t.m.f) {
      var_eval_mpfr(val.x, v, leaf, bits);
      mpfr_pow_ui(pw.x, val.x, e, MPFR_RNDN);
      mpfr_mul(term.x, term.x, pw.x, MPFR_RNDN);
    }
    mpfr_add(out, out, term.x, MPFR_RNDN);
  }
}

void eval_rf_mpfr_to(mpfr_t out, const RatForm& r,
                     const std::function<mpq_class(Var)>& leaf, mpfr_prec_t bits) {
  poly_eval_mpfr(out, r.num, leaf, bits);
  if (!r.den.is_one()) {
    MV d(bits);
    poly_eval_mpfr(d.x, r.den, leaf, bits);
    if (mpfr_zero_p(d.x)) throw EvalError("evaluation at a singular point");
    mpfr_div(out, out, d.x, MPFR_RNDN);
  }
}

}  // namespace

double eval_rf_double(const RatForm& r, const std::function<double(Var)>& leaf) {
  double n = poly_eval_double(r.num, leaf);
  if (r.den.is_one()) return n;
  double d = poly_eval_double(r.den, leaf);
  if (d == 0) throw EvalError("evaluation at a singular point");
  return n / d;
}

double eval_rf_mpfr(const RatForm& r, const std::function<mpq_class(Var)>& leaf,
                    unsigned bits) {
  MV out(bits);
  eval_rf_mpfr_to(out.x, r, leaf, bits);
  return mpfr_get_d(out.x, MPFR_RNDN);
}

}  // namespace geodeq::detail

namespace geodeq {

double eval_double(Expr e, const std::map<std::string, double>& point) {
  const detail::RatForm& r = detail::rf_of(e);
  return detail::eval_rf_double(r, [&](detail::Var v) -> double {
    const detail::VarInfo& info = detail::var_info(v);
    if (info.kind == detail::VarKind::Coord) {
      auto it = point.find(info.name);
      if (it == point.end())
        throw EvalError("no value for coordinate '" + info.name + "'");
      return it->second;
    }
    throw EvalError("cannot numerically evaluate opaque function '" +
                    info.name + "' (substitute it first)");
  });
}

double eval_numeric(Expr e, const std::map<std::string, mpq_class>& point,
                    unsigned precision_bits) {
  unsigned bits = precision_bits ? precision_bits : engine_options().precision_bits;
  const detail::RatForm& r = detail::rf_of(e);
  return detail::eval_rf_mpfr(
      r,
      [&](detail::Var v) -> mpq_class {
        const detail::VarInfo& info = detail::var_info(v);
        if (info.kind == detail::VarKind::Coord) {
          auto it = point.find(info.name);
          if (it == point.end())
            throw EvalError("no value for coordinate '" + info.name + "'");
          return it->second;
        }
        throw EvalError("cannot numerically evaluate opaque function '" +
                        info.name + "' (substitute it first)");
      },
      bits);
}

}  // namespace geodeq
