#include <sstream>

#include "internal.hpp"

namespace geodeq::detail {

namespace {

// precedence: 1 sum, 2 product/quotient, 3 power, 4 atom
int prec_of(Expr e);

std::string jet_str(const std::string& name, const std::vector<std::uint32_t>& orders,
                    const std::vector<Expr>& args) {
  std::ostringstream os;
  bool anyOrder = false;
  for (auto o : orders)
    if (o) anyOrder = true;
  if (args.empty()) return name;
  if (args.size() == 1) {
    os << name;
    for (std::uint32_t i = 0; i < (orders.empty() ? 0 : orders[0]); ++i) os << '\'';
  } else if (anyOrder) {
    os << "D[" << name << ';';
    for (std::size_t i = 0; i < orders.size(); ++i) {
      if (i) os << ',';
      os << orders[i];
    }
    os << ']';
  } else {
    os << name;
  }
  os << '(';
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) os << ", ";
    os << to_string(args[i]);
  }
  os << ')';
  return os.str();
}

std::string var_str(Var v) {
  const VarInfo& info = var_info(v);
  switch (info.kind) {
    case VarKind::Coord:
      return info.name;
    case VarKind::Jet:
      return jet_str(info.name, info.orders, info.args);
    case VarKind::Kernel: {
      const char* fn = "";
      switch (info.op) {
        case KernelOp::Exp: fn = "exp"; break;
        case KernelOp::Log: fn = "log"; break;
        case KernelOp::Sin: fn = "sin"; break;
        case KernelOp::Cos: fn = "cos"; break;
        case KernelOp::Sqrt: fn = "sqrt"; break;
        case KernelOp::Abs: fn = "abs"; break;
      }
      return std::string(fn) + "(" + to_string(info.arg) + ")";
    }
  }
  return "?";
}

std::string monomial_str(const Monomial& m, const mpz_class& coeff) {
  std::ostringstream os;
  mpz_class a = abs(coeff);
  bool needCoeff = (a != 1) || m.is_one();
  bool first = true;
  if (needCoeff) {
    os << a.get_str();
    first = false;
  }
  for (const auto& [v, e] : m.f) {
    if (!first) os << '*';
    first = false;
    os << var_str(v);
    if (e > 1) os << '^' << e;
  }
  return os.str();
}

std::string poly_str(const Poly& p) {
  if (p.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& t : p.terms()) {
    if (first) {
      if (sgn(t.c) < 0) os << '-';
      first = false;
    } else {
      os << (sgn(t.c) < 0 ? " - " : " + ");
    }
    os << monomial_str(t.m, t.c);
  }
  return os.str();
}

int prec_of(Expr e) { return print_precedence(e); }

std::string wrapped(Expr e, int minPrec) {
  std::string s = to_string(e);
  if (prec_of(e) < minPrec) return "(" + s + ")";
  return s;
}

}  // namespace

std::string print_rf(const RatForm& r) {
  if (r.den.is_one()) return poly_str(r.num);
  return "(" + poly_str(r.num) + ")/(" + poly_str(r.den) + ")";
}

int print_precedence(Expr e) {
  const Node& n = node_of(e);
  switch (n.kind) {
    case Kind::Rational:
      return (sgn(n.q) < 0 || n.q.get_den() != 1) ? 1 : 4;
    case Kind::Sum:
      return 1;
    case Kind::Product:
      return 2;
    case Kind::Power:
      return 3;
    case Kind::Canon: {
      const RatForm& r = *n.rf;
      if (!r.den.is_one()) return 2;
      if (r.num.is_zero()) return 4;
      if (r.num.term_count() > 1) return 1;
      const Term& t = r.num.leading();
      if (sgn(t.c) < 0) return 1;
      if (t.m.is_one()) return t.c == 1 || sgn(t.c) >= 0 ? 4 : 1;
      if (t.c == 1 && t.m.f.size() == 1 && t.m.f[0].second == 1) return 4;
      return 2;
    }
    default:
      return 4;
  }
}

}  // namespace geodeq::detail

namespace geodeq {

using namespace detail;

std::string to_string(Expr e) {
  const Node& n = node_of(e);
  switch (n.kind) {
    case Kind::Rational:
      return n.q.get_str();
    case Kind::Coord:
      return n.name;
    case Kind::Apply:
      return jet_str(n.name, n.orders, n.kids);
    case Kind::Sum: {
      std::ostringstream os;
      for (std::size_t i = 0; i < n.kids.size(); ++i) {
        Expr k = n.kids[i];
        // fold a leading negative rational coefficient into " - "
        if (i > 0) {
          if (k.kind() == Kind::Rational && sgn(k.rational_value()) < 0) {
            os << " - " << mpq_class(-k.rational_value()).get_str();
            continue;
          }
          if (k.kind() == Kind::Product && k.arity() >= 2 &&
              k.child(0).kind() == Kind::Rational &&
              sgn(k.child(0).rational_value()) < 0) {
            mpq_class aq(-k.child(0).rational_value());
            std::vector<Expr> rest;
            if (aq != 1) rest.push_back(rational(aq));
            for (std::size_t j = 1; j < k.arity(); ++j) rest.push_back(k.child(j));
            os << " - " << wrapped(product(rest), 2);
            continue;
          }
        }
        if (i > 0) os << " + ";
        os << wrapped(k, 1);
      }
      return os.str();
    }
    case Kind::Product: {
      std::vector<Expr> nums, dens;
      for (Expr k : n.kids) {
        if (k.kind() == Kind::Power && sgn(k.exponent()) < 0) {
          mpq_class pe(-k.exponent());
          dens.push_back(pe == 1 ? k.child(0) : power(k.child(0), pe));
        } else {
          nums.push_back(k);
        }
      }
      std::ostringstream os;
      if (nums.empty()) {
        os << '1';
      } else {
        for (std::size_t i = 0; i < nums.size(); ++i) {
          if (i) os << '*';
          os << wrapped(nums[i], 2);
        }
      }
      if (!dens.empty()) {
        os << '/';
        if (dens.size() == 1) {
          os << wrapped(dens[0], 3);
        } else {
          os << '(';
          for (std::size_t i = 0; i < dens.size(); ++i) {
            if (i) os << '*';
            os << wrapped(dens[i], 2);
          }
          os << ')';
        }
      }
      return os.str();
    }
    case Kind::Power: {
      std::ostringstream os;
      os << wrapped(n.kids[0], 4) << '^';
      if (n.q.get_den() == 1 && sgn(n.q) >= 0) {
        os << n.q.get_str();
      } else {
        os << '(' << n.q.get_str() << ')';
      }
      return os.str();
    }
    case Kind::Exp:
      return "exp(" + to_string(n.kids[0]) + ")";
    case Kind::Log:
      return "log(" + to_string(n.kids[0]) + ")";
    case Kind::Sin:
      return "sin(" + to_string(n.kids[0]) + ")";
    case Kind::Cos:
      return "cos(" + to_string(n.kids[0]) + ")";
    case Kind::Sqrt:
      return "sqrt(" + to_string(n.kids[0]) + ")";
    case Kind::Abs:
      return "abs(" + to_string(n.kids[0]) + ")";
    case Kind::Canon:
      return print_rf(*n.rf);
  }
  return "?";
}

}  // namespace geodeq
