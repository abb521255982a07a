#include "geodeq/poly.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace geodeq {

namespace {

std::size_t hash_mix(std::size_t h, std::size_t v) {
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

std::size_t mpz_hash(const mpz_class& z) {
  unsigned long r = mpz_fdiv_ui(z.get_mpz_t(), 0x1fffffffffffffffUL);
  std::size_t h = r;
  if (mpz_sgn(z.get_mpz_t()) < 0) h = hash_mix(h, 0x5bf03635ULL);
  return h;
}

}  // namespace

int Monomial::total_degree() const {
  int d = 0;
  for (const auto& [v, e] : f) d += static_cast<int>(e);
  return d;
}

std::uint32_t Monomial::deg_in(Var v) const {
  for (const auto& [w, e] : f)
    if (w == v) return e;
  return 0;
}

Monomial Monomial::mul(const Monomial& a, const Monomial& b) {
  Monomial r;
  r.f.reserve(a.f.size() + b.f.size());
  std::size_t i = 0, j = 0;
  while (i < a.f.size() && j < b.f.size()) {
    if (a.f[i].first < b.f[j].first) {
      r.f.push_back(a.f[i++]);
    } else if (a.f[i].first > b.f[j].first) {
      r.f.push_back(b.f[j++]);
    } else {
      r.f.emplace_back(a.f[i].first, a.f[i].second + b.f[j].second);
      ++i, ++j;
    }
  }
  while (i < a.f.size()) r.f.push_back(a.f[i++]);
  while (j < b.f.size()) r.f.push_back(b.f[j++]);
  return r;
}

std::optional<Monomial> Monomial::div(const Monomial& a, const Monomial& b) {
  Monomial r;
  std::size_t i = 0;
  for (const auto& [v, e] : b.f) {
    while (i < a.f.size() && a.f[i].first < v) r.f.push_back(a.f[i++]);
    if (i >= a.f.size() || a.f[i].first != v || a.f[i].second < e) return std::nullopt;
    if (a.f[i].second > e) r.f.emplace_back(v, a.f[i].second - e);
    ++i;
  }
  while (i < a.f.size()) r.f.push_back(a.f[i++]);
  return r;
}

Monomial Monomial::gcd(const Monomial& a, const Monomial& b) {
  Monomial r;
  std::size_t i = 0, j = 0;
  while (i < a.f.size() && j < b.f.size()) {
    if (a.f[i].first < b.f[j].first) {
      ++i;
    } else if (a.f[i].first > b.f[j].first) {
      ++j;
    } else {
      r.f.emplace_back(a.f[i].first, std::min(a.f[i].second, b.f[j].second));
      ++i, ++j;
    }
  }
  return r;
}

Monomial Monomial::pow(std::uint32_t k) const {
  if (k == 0) return one();
  Monomial r = *this;
  for (auto& [v, e] : r.f) e *= k;
  return r;
}

std::optional<Monomial> Monomial::root(std::uint32_t k) const {
  Monomial r = *this;
  for (auto& [v, e] : r.f) {
    if (e % k != 0) return std::nullopt;
    e /= k;
  }
  return r;
}

int Monomial::cmp(const Monomial& a, const Monomial& b) {
  int da = a.total_degree(), db = b.total_degree();
  if (da != db) return da < db ? -1 : 1;
  std::size_t i = 0, j = 0;
  while (i < a.f.size() && j < b.f.size()) {
    if (a.f[i].first != b.f[j].first) return a.f[i].first < b.f[j].first ? 1 : -1;
    if (a.f[i].second != b.f[j].second) return a.f[i].second < b.f[j].second ? -1 : 1;
    ++i, ++j;
  }
  if (i < a.f.size()) return 1;
  if (j < b.f.size()) return -1;
  return 0;
}

std::size_t Monomial::hash() const {
  std::size_t h = 0x243f6a8885a308d3ULL;
  for (const auto& [v, e] : f) {
    h = hash_mix(h, v);
    h = hash_mix(h, e);
  }
  return h;
}

Poly Poly::from_int(long v) { return from_mpz(mpz_class(v)); }

Poly Poly::from_mpz(const mpz_class& v) {
  Poly p;
  if (v != 0) p.t_.push_back({Monomial::one(), v});
  return p;
}

Poly Poly::variable(Var v, std::uint32_t exp) {
  if (exp == 0) return from_int(1);
  Poly p;
  Monomial m;
  m.f.emplace_back(v, exp);
  p.t_.push_back({m, mpz_class(1)});
  return p;
}

Poly Poly::from_terms(std::vector<Term> ts) {
  for (auto& t : ts) {
    // callers may hand over unsorted or duplicated monomial factors
    std::sort(t.m.f.begin(), t.m.f.end());
    std::vector<std::pair<Var, std::uint32_t>> merged;
    for (const auto& [v, e] : t.m.f) {
      if (e == 0) continue;
      if (!merged.empty() && merged.back().first == v)
        merged.back().second += e;
      else
        merged.emplace_back(v, e);
    }
    t.m.f = std::move(merged);
  }
  std::sort(ts.begin(), ts.end(),
            [](const Term& a, const Term& b) { return Monomial::cmp(a.m, b.m) > 0; });
  Poly p;
  for (auto& t : ts) {
    if (!p.t_.empty() && p.t_.back().m == t.m) {
      p.t_.back().c += t.c;
      if (p.t_.back().c == 0) p.t_.pop_back();
    } else if (t.c != 0) {
      p.t_.push_back(std::move(t));
    }
  }
  return p;
}

mpz_class Poly::constant_value() const {
  if (t_.empty()) return mpz_class(0);
  if (t_.size() != 1 || !t_[0].m.is_one()) throw std::logic_error("Poly: not a constant");
  return t_[0].c;
}

int Poly::total_degree() const {
  int d = -1;
  for (const auto& t : t_) d = std::max(d, t.m.total_degree());
  return d;
}

std::uint32_t Poly::deg_in(Var v) const {
  std::uint32_t d = 0;
  for (const auto& t : t_) d = std::max(d, t.m.deg_in(v));
  return d;
}

std::vector<Var> Poly::vars() const {
  std::vector<Var> vs;
  for (const auto& t : t_)
    for (const auto& [v, e] : t.m.f) vs.push_back(v);
  std::sort(vs.begin(), vs.end());
  vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
  return vs;
}

bool Poly::equal(const Poly& a, const Poly& b) {
  if (a.t_.size() != b.t_.size()) return false;
  for (std::size_t i = 0; i < a.t_.size(); ++i)
    if (!(a.t_[i].m == b.t_[i].m) || a.t_[i].c != b.t_[i].c) return false;
  return true;
}

Poly operator+(const Poly& a, const Poly& b) {
  Poly r;
  r.t_.reserve(a.t_.size() + b.t_.size());
  std::size_t i = 0, j = 0;
  while (i < a.t_.size() && j < b.t_.size()) {
    int c = Monomial::cmp(a.t_[i].m, b.t_[j].m);
    if (c > 0) {
      r.t_.push_back(a.t_[i++]);
    } else if (c < 0) {
      r.t_.push_back(b.t_[j++]);
    } else {
      mpz_class s = a.t_[i].c + b.t_[j].c;
      if (s != 0) r.t_.push_back({a.t_[i].m, s});
      ++i, ++j;
    }
  }
  while (i < a.t_.size()) r.t_.push_back(a.t_[i++]);
  while (j < b.t_.size()) r.t_.push_back(b.t_[j++]);
  return r;
}

Poly Poly::operator-() const {
  Poly r = *this;
  for (auto& t : r.t_) t.c = -t.c;
  return r;
}

Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }

Poly operator*(const Poly& a, const Poly& b) {
  if (a.is_zero() || b.is_zero()) return Poly::zero();
  auto less = [](const Monomial& x, const Monomial& y) { return Monomial::cmp(x, y) < 0; };
  std::map<Monomial, mpz_class, decltype(less)> acc(less);
  for (const auto& ta : a.t_)
    for (const auto& tb : b.t_) acc[Monomial::mul(ta.m, tb.m)] += ta.c * tb.c;
  Poly r;
  r.t_.reserve(acc.size());
  for (auto it = acc.rbegin(); it != acc.rend(); ++it)
    if (it->second != 0) r.t_.push_back({it->first, it->second});
  return r;
}

Poly Poly::pow(std::uint32_t k) const {
  Poly r = from_int(1);
  Poly base = *this;
  while (k > 0) {
    if (k & 1u) r = r * base;
    k >>= 1u;
    if (k > 0) base = base * base;
  }
  return r;
}

Poly Poly::scaled(const mpz_class& c) const {
  if (c == 0) return zero();
  Poly r = *this;
  for (auto& t : r.t_) t.c *= c;
  return r;
}

Poly Poly::divided_by_const(const mpz_class& d) const {
  if (d == 0) throw std::logic_error("Poly: division by zero constant");
  Poly r = *this;
  for (auto& t : r.t_) {
    if (!mpz_divisible_p(t.c.get_mpz_t(), d.get_mpz_t()))
      throw std::logic_error("Poly: inexact constant division");
    mpz_class q;
    mpz_divexact(q.get_mpz_t(), t.c.get_mpz_t(), d.get_mpz_t());
    t.c = q;
  }
  return r;
}

Poly Poly::mul_monomial(const Monomial& m, const mpz_class& c) const {
  if (c == 0) return zero();
  Poly r = *this;
  for (auto& t : r.t_) {
    t.m = Monomial::mul(t.m, m);
    t.c *= c;
  }
  return r;
}

mpz_class Poly::content() const {
  mpz_class g = 0;
  for (const auto& t : t_) {
    mpz_class a = abs(t.c);
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), a.get_mpz_t());
    if (g == 1) break;
  }
  return g;
}

Poly Poly::primitive_part() const {
  if (is_zero()) return zero();
  return divided_by_const(content());
}

int Poly::leading_sign() const {
  if (t_.empty()) return 0;
  return mpz_sgn(t_[0].c.get_mpz_t());
}

std::optional<Poly> Poly::try_divide(const Poly& a, const Poly& b) {
  if (b.is_zero()) return std::nullopt;
  if (a.is_zero()) return zero();
  Poly q, r = a;
  while (!r.is_zero()) {
    auto m = Monomial::div(r.leading().m, b.leading().m);
    if (!m) return std::nullopt;
    if (!mpz_divisible_p(r.leading().c.get_mpz_t(), b.leading().c.get_mpz_t()))
      return std::nullopt;
    mpz_class c;
    mpz_divexact(c.get_mpz_t(), r.leading().c.get_mpz_t(), b.leading().c.get_mpz_t());
    Poly piece;
    piece.t_.push_back({*m, c});
    q = q + piece;
    r = r - b.mul_monomial(*m, c);
  }
  return q;
}

namespace {

// Gcd of a list, early-exiting once the running gcd is the unit polynomial.
Poly gcd_list(const std::vector<Poly>& ps) {
  Poly g = Poly::zero();
  for (const auto& p : ps) {
    g = Poly::gcd(g, p);
    if (g.is_one()) break;
  }
  return g;
}

// Pseudo-remainder of a by b with respect to main variable v.
Poly prem(const Poly& a, const Poly& b, Var v) {
  std::vector<Poly> r = a.coeffs_in(v);
  std::vector<Poly> bb = b.coeffs_in(v);
  int da = static_cast<int>(r.size()) - 1;
  int db = static_cast<int>(bb.size()) - 1;
  const Poly& lcb = bb[db];
  for (int k = da; k >= db; --k) {
    if (r[k].is_zero()) continue;
    Poly coef = r[k];
    for (auto& ri : r) ri = ri * lcb;
    for (int i = 0; i <= db; ++i) r[k - db + i] = r[k - db + i] - coef * bb[i];
  }
  r.resize(db);
  return Poly::from_coeffs_in(v, r);
}

// Content of p viewed as univariate in v (a polynomial in the other vars).
Poly content_in(const Poly& p, Var v) { return gcd_list(p.coeffs_in(v)); }

Poly exact_div(const Poly& a, const Poly& b) {
  auto q = Poly::try_divide(a, b);
  if (!q) throw std::logic_error("Poly: inexact division in gcd");
  return *q;
}

// Gcd of two primitive (integer content 1) polynomials, returned primitive
// with positive leading coefficient.
Poly pgcd(const Poly& a, const Poly& b) {
  if (a.is_constant() || b.is_constant()) return Poly::from_int(1);
  std::vector<Var> va = a.vars(), vb = b.vars();
  Var v = std::min(va.front(), vb.front());
  bool inA = a.contains(v), inB = b.contains(v);
  if (!inA) {
    Poly g = Poly::gcd(a, content_in(b, v));
    return g.primitive_part();
  }
  if (!inB) {
    Poly g = Poly::gcd(content_in(a, v), b);
    return g.primitive_part();
  }
  Poly ca = content_in(a, v), cb = content_in(b, v);
  Poly cont = Poly::gcd(ca, cb);
  Poly A = exact_div(a, ca), B = exact_div(b, cb);
  if (A.deg_in(v) < B.deg_in(v)) std::swap(A, B);
  Poly g;
  while (true) {
    Poly R = prem(A, B, v);
    if (R.is_zero()) {
      g = B;
      break;
    }
    if (R.deg_in(v) == 0) {
      g = Poly::from_int(1);
      break;
    }
    A = B;
    B = exact_div(R, content_in(R, v));
  }
  Poly res = (cont * g).primitive_part();
  if (res.leading_sign() < 0) res = -res;
  return res;
}

}  // namespace

Poly Poly::gcd(const Poly& a, const Poly& b) {
  auto norm = [](const Poly& p) { return p.leading_sign() < 0 ? -p : p; };
  if (a.is_zero()) return norm(b);
  if (b.is_zero()) return norm(a);
  mpz_class ca = a.content(), cb = b.content(), c;
  mpz_gcd(c.get_mpz_t(), ca.get_mpz_t(), cb.get_mpz_t());
  Poly g = pgcd(a.divided_by_const(ca), b.divided_by_const(cb));
  return g.scaled(c);
}

std::optional<Poly> Poly::try_kth_root(std::uint32_t k) const {
  if (k == 0) throw std::logic_error("Poly: zeroth root");
  if (k == 1) return *this;
  if (is_zero()) return zero();
  if (is_constant()) {
    mpz_class c = constant_value();
    bool neg = c < 0;
    if (neg && k % 2 == 0) return std::nullopt;
    mpz_class a = abs(c), r;
    if (!mpz_root(r.get_mpz_t(), a.get_mpz_t(), k)) return std::nullopt;
    return from_mpz(neg ? mpz_class(-r) : r);
  }
  mpz_class cont = content(), croot;
  if (!mpz_root(croot.get_mpz_t(), cont.get_mpz_t(), k)) return std::nullopt;
  Poly pp = divided_by_const(cont);
  bool neg = pp.leading_sign() < 0;
  if (neg && k % 2 == 0) return std::nullopt;
  Poly work = neg ? -pp : pp;
  Var v = work.vars().front();
  std::vector<Poly> cs = work.coeffs_in(v);
  std::uint32_t m = static_cast<std::uint32_t>(cs.size()) - 1;
  if (m % k != 0) return std::nullopt;
  std::uint32_t mw = m / k;
  auto wtop = cs[m].try_kth_root(k);
  if (!wtop) return std::nullopt;
  std::vector<Poly> w(mw + 1, Poly::zero());
  w[mw] = *wtop;
  Poly denom = from_int(static_cast<long>(k)) * wtop->pow(k - 1);
  for (int j = static_cast<int>(mw) - 1; j >= 0; --j) {
    Poly cur = from_coeffs_in(v, w).pow(k);
    std::uint32_t td = (k - 1) * mw + static_cast<std::uint32_t>(j);
    std::vector<Poly> cc = cur.coeffs_in(v);
    Poly have = td < cc.size() ? cc[td] : Poly::zero();
    Poly want = td < cs.size() ? cs[td] : Poly::zero();
    auto q = try_divide(want - have, denom);
    if (!q) return std::nullopt;
    w[j] = *q;
  }
  Poly cand = from_coeffs_in(v, w);
  if (!(cand.pow(k) == work)) return std::nullopt;
  Poly res = cand.scaled(croot);
  return neg ? -res : res;
}

Poly Poly::derivative(Var v) const {
  std::vector<Term> ts;
  for (const auto& t : t_) {
    std::uint32_t e = t.m.deg_in(v);
    if (e == 0) continue;
    Term d;
    d.c = t.c * e;
    for (const auto& [w, ex] : t.m.f) {
      if (w == v) {
        if (ex > 1) d.m.f.emplace_back(w, ex - 1);
      } else {
        d.m.f.emplace_back(w, ex);
      }
    }
    ts.push_back(std::move(d));
  }
  return from_terms(std::move(ts));
}

std::vector<Poly> Poly::coeffs_in(Var v) const {
  std::uint32_t d = deg_in(v);
  std::vector<Poly> cs(d + 1, Poly::zero());
  std::vector<std::vector<Term>> buckets(d + 1);
  for (const auto& t : t_) {
    std::uint32_t e = t.m.deg_in(v);
    Term s;
    s.c = t.c;
    for (const auto& [w, ex] : t.m.f)
      if (w != v) s.m.f.emplace_back(w, ex);
    buckets[e].push_back(std::move(s));
  }
  for (std::uint32_t e = 0; e <= d; ++e) cs[e] = from_terms(std::move(buckets[e]));
  return cs;
}

Poly Poly::from_coeffs_in(Var v, const std::vector<Poly>& cs) {
  std::vector<Term> ts;
  for (std::uint32_t e = 0; e < cs.size(); ++e) {
    for (const auto& t : cs[e].terms()) {
      Term s;
      s.c = t.c;
      if (e > 0) {
        Monomial mv;
        mv.f.emplace_back(v, e);
        s.m = Monomial::mul(t.m, mv);
      } else {
        s.m = t.m;
      }
      ts.push_back(std::move(s));
    }
  }
  return from_terms(std::move(ts));
}

std::size_t Poly::hash() const {
  std::size_t h = 0x13198a2e03707344ULL;
  for (const auto& t : t_) {
    h = hash_mix(h, t.m.hash());
    h = hash_mix(h, mpz_hash(t.c));
  }
  return h;
}

}  // namespace geodeq
