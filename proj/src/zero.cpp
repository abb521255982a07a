#include <cmath>
#include <cstdio>
#include <random>
#include <set>
#include <sstream>

#include "internal.hpp"

namespace geodeq {

namespace {

using namespace detail;

void collect_leaves(const RatForm& r, std::set<Var>& out, std::set<Var>& seen) {
  for (const Poly* p : {&r.num, &r.den}) {
    for (Var v : p->vars()) {
      if (seen.count(v)) continue;
      seen.insert(v);
      const VarInfo& info = var_info(v);
      if (info.kind == VarKind::Kernel) {
        collect_leaves(rf_of(info.arg), out, seen);
      } else {
        out.insert(v);
        if (info.kind == VarKind::Jet)
          for (Expr a : info.args) collect_leaves(rf_of(a), out, seen);
      }
    }
  }
}

std::string format_value(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

}  // namespace

ZeroResult is_zero(Expr e, const Assumptions& assm) {
  const RatForm& target = detail::rf_of(e);
  if (target.num.is_zero()) return {Verdict::Zero, ""};

  std::set<Var> leaves, seen;
  collect_leaves(target, leaves, seen);
  std::vector<RatForm> constraints;
  constraints.reserve(assm.items.size());
  for (const auto& item : assm.items) {
    constraints.push_back(detail::rf_of(item.expr));
    collect_leaves(constraints.back(), leaves, seen);
  }

  std::mt19937_64 rng(engine_options().seed);
  const unsigned bits = engine_options().precision_bits;
  const int need = 20;
  const int maxAttempts = 400;
  const double detectThreshold = 1e-40;  // above this the value is a witness
  const double constraintMargin = 1e-25;

  int accepted = 0;
  double maxSeen = 0;
  for (int attempt = 0; attempt < maxAttempts && accepted < need; ++attempt) {
    std::map<Var, mpq_class> val;
    for (Var v : leaves) {
      const VarInfo& info = var_info(v);
      mpq_class center = 0;
      if (info.kind == VarKind::Coord) {
        auto it = assm.sample.find(info.name);
        if (it != assm.sample.end()) center = it->second;
        long dn = static_cast<long>(rng() % 81) - 40;
        long dd = 9 + static_cast<long>(rng() % 17);
        mpq_class delta(dn, dd);
        delta.canonicalize();
        val[v] = center + delta;
      } else {
        bool zeroOrder = true;
        for (auto o : info.orders)
          if (o) zeroOrder = false;
        auto it = assm.sample.find(info.name);
        if (zeroOrder && it != assm.sample.end()) center = it->second;
        long dn = static_cast<long>(rng() % 61) - 30;
        if (dn == 0) dn = 1;
        long dd = 5 + static_cast<long>(rng() % 13);
        mpq_class delta(dn, dd);
        delta.canonicalize();
        val[v] = center + delta;
      }
    }
    auto leaf = [&](Var v) -> mpq_class {
      auto it = val.find(v);
      if (it == val.end()) throw EvalError("unvalued variable in sampling");
      return it->second;
    };
    bool ok = true;
    for (std::size_t i = 0; i < constraints.size() && ok; ++i) {
      double cv;
      try {
        cv = eval_rf_mpfr(constraints[i], leaf, bits);
      } catch (const EvalError&) {
        ok = false;
        break;
      }
      if (std::isnan(cv)) {
        ok = false;
        break;
      }
      if (assm.items[i].strictly_positive ? (cv <= constraintMargin)
                                          : (std::fabs(cv) <= constraintMargin))
        ok = false;
    }
    if (!ok) continue;
    double tv;
    try {
      tv = eval_rf_mpfr(target, leaf, bits);
    } catch (const EvalError&) {
      continue;
    }
    if (std::isnan(tv)) continue;
    ++accepted;
    maxSeen = std::max(maxSeen, std::fabs(tv));
    if (std::fabs(tv) > detectThreshold) {
      std::ostringstream os;
      bool first = true;
      for (Var v : leaves) {
        const VarInfo& info = var_info(v);
        std::string name = info.kind == VarKind::Coord
                               ? info.name
                               : detail::print_rf(detail::rf_var(v));
        if (!first) os << ", ";
        first = false;
        os << name << " = " << val[v].get_str();
      }
      os << " -> value " << format_value(tv);
      return {Verdict::NonZero, os.str()};
    }
  }
  if (accepted < need) {
    std::ostringstream os;
    os << "only " << accepted << " admissible sample(s) in " << maxAttempts
       << " attempts; verdict undecided";
    return {Verdict::Unknown, os.str()};
  }
  std::ostringstream os;
  os << "no exact cancellation, but the value stays below " << format_value(detectThreshold)
     << " at " << need << " sampled points (max |value| = " << format_value(maxSeen) << ")";
  return {Verdict::Unknown, os.str()};
}

}  // namespace geodeq
