#include <set>

#include "internal.hpp"

namespace geodeq::detail {

namespace {

bool has_abs_rec(const RatForm& r, std::set<Var>& seen);

bool var_has_abs(Var v, std::set<Var>& seen) {
  if (seen.count(v)) return false;
  seen.insert(v);
  const VarInfo& info = var_info(v);
  if (info.kind == VarKind::Kernel) {
    if (info.op == KernelOp::Abs) return true;
    return has_abs_rec(rf_of(info.arg), seen);
  }
  if (info.kind == VarKind::Jet) {
    for (Expr a : info.args)
      if (has_abs_rec(rf_of(a), seen)) return true;
  }
  return false;
}

bool has_abs_rec(const RatForm& r, std::set<Var>& seen) {
  for (const Poly* p : {&r.num, &r.den})
    for (Var v : p->vars())
      if (var_has_abs(v, seen)) return true;
  return false;
}

bool has_abs(const RatForm& r) {
  std::set<Var> seen;
  return has_abs_rec(r, seen);
}

RatForm deriv_of_canon(Expr canonExpr, Var x, const Assumptions* assm);

RatForm var_derivative(Var v, Var x, const Assumptions* assm) {
  const VarInfo& info = var_info(v);
  switch (info.kind) {
    case VarKind::Coord:
      return v == x ? rf_one() : rf_zero();
    case VarKind::Jet: {
      RatForm acc = rf_zero();
      for (std::size_t k = 0; k < info.args.size(); ++k) {
        RatForm da = deriv_of_canon(info.args[k], x, assm);
        if (rf_is_zero(da)) continue;
        std::vector<std::uint32_t> orders = info.orders;
        ++orders[k];
        RatForm jet = rf_var(jet_var(info.name, std::move(orders), info.args));
        acc = rf_add(acc, rf_mul(jet, da));
      }
      return acc;
    }
    case VarKind::Kernel: {
      const RatForm& a = rf_of(info.arg);
      RatForm da = deriv_of_canon(info.arg, x, assm);
      if (rf_is_zero(da)) return rf_zero();
      switch (info.op) {
        case KernelOp::Exp:
          return rf_mul(rf_var(v), da);
        case KernelOp::Log:
          return rf_div(da, a);
        case KernelOp::Sin:
          return rf_mul(build_cos(a), da);
        case KernelOp::Cos:
          return rf_neg(rf_mul(build_sin(a), da));
        case KernelOp::Sqrt:
          return rf_div(da, rf_mul(rf_from_mpq(mpq_class(2)), rf_var(v)));
        case KernelOp::Abs: {
          if (assm) {
            auto s = sign_of(a, *assm);
            if (s && *s != 0)
              return *s < 0 ? rf_neg(da) : da;
          }
          throw DomainError(
              "cannot differentiate |" + to_string(info.arg) +
              "|: sign undetermined (provide assumptions)");
        }
      }
      return rf_zero();
    }
  }
  return rf_zero();
}

RatForm poly_derivative_rf(const Poly& p, Var x, const Assumptions* assm) {
  RatForm acc = rf_zero();
  for (Var v : p.vars()) {
    Poly pd = p.derivative(v);
    if (pd.is_zero()) continue;
    RatForm dv = var_derivative(v, x, assm);
    if (rf_is_zero(dv)) continue;
    acc = rf_add(acc, rf_mul({pd, Poly::from_int(1)}, dv));
  }
  return acc;
}

RatForm deriv_of_canon(Expr canonExpr, Var x, const Assumptions* assm) {
  Expr memo = diff_memo_get(canonExpr, x);
  if (valid(memo)) return *node_of(memo).rf;
  const RatForm& r = *node_of(canonExpr).rf;
  RatForm d;
  if (r.den.is_one()) {
    d = poly_derivative_rf(r.num, x, assm);
  } else {
    RatForm dn = poly_derivative_rf(r.num, x, assm);
    RatForm dd = poly_derivative_rf(r.den, x, assm);
    RatForm denRf{r.den, Poly::from_int(1)};
    RatForm numRf{r.num, Poly::from_int(1)};
    d = rf_div(rf_sub(rf_mul(dn, denRf), rf_mul(numRf, dd)),
               rf_mul(denRf, denRf));
  }
  Expr de = expr_of(d);
  // memoize only sign-independent results: an |u| whose sign came from the
  // assumptions must not leak into other assumption contexts
  if (!has_abs(r)) diff_memo_put(canonExpr, x, de);
  return *node_of(de).rf;
}

}  // namespace

RatForm rf_derivative(const RatForm& r, Var coordVar, const Assumptions* assm) {
  return deriv_of_canon(expr_of(r), coordVar, assm);
}

}  // namespace geodeq::detail

namespace geodeq {

Expr differentiate(Expr e, const std::string& coordName, const Assumptions* assm) {
  Expr ce = canonicalize(e);
  detail::Var x = detail::coord_var(coordName);
  return detail::expr_of(
      detail::rf_derivative(*detail::node_of(ce).rf, x, assm));
}

}  // namespace geodeq
