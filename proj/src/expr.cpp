#include "geodeq/expr.hpp"

#include <deque>
#include <mutex>
#include <unordered_map>

#include "internal.hpp"

namespace geodeq {
namespace detail {

std::size_t hash_combine(std::size_t h, std::size_t v) {
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

namespace {

std::size_t mpq_hash(const mpq_class& q) {
  mpz_class n = q.get_num(), d = q.get_den();
  unsigned long a = mpz_fdiv_ui(n.get_mpz_t(), 0x1fffffffffffffffUL);
  unsigned long b = mpz_fdiv_ui(d.get_mpz_t(), 0x1fffffffffffffffUL);
  std::size_t h = hash_combine(a, b);
  if (sgn(q) < 0) h = hash_combine(h, 0x77ULL);
  return h;
}

std::size_t node_hash(const Node& n) {
  std::size_t h = static_cast<std::size_t>(n.kind) * 0x100000001b3ULL + 0xcbf29ce484222325ULL;
  h = hash_combine(h, mpq_hash(n.q));
  h = hash_combine(h, std::hash<std::string>{}(n.name));
  for (auto o : n.orders) h = hash_combine(h, o);
  for (auto k : n.kids) h = hash_combine(h, k.id());
  if (n.rf) h = hash_combine(h, n.rf->hash());
  return h;
}

bool node_eq(const Node& a, const Node& b) {
  if (a.kind != b.kind || a.name != b.name || a.orders != b.orders) return false;
  if (a.q != b.q) return false;
  if (a.kids.size() != b.kids.size()) return false;
  for (std::size_t i = 0; i < a.kids.size(); ++i)
    if (!a.kids[i].same(b.kids[i])) return false;
  if ((a.rf == nullptr) != (b.rf == nullptr)) return false;
  if (a.rf && !(*a.rf == *b.rf)) return false;
  return true;
}

struct VarKey {
  VarInfo info;
};

std::size_t var_hash(const VarInfo& v) {
  std::size_t h = static_cast<std::size_t>(v.kind) + 0x9e3779b9ULL;
  h = hash_combine(h, std::hash<std::string>{}(v.name));
  for (auto o : v.orders) h = hash_combine(h, o);
  for (auto a : v.args) h = hash_combine(h, a.id());
  h = hash_combine(h, static_cast<std::size_t>(v.op));
  h = hash_combine(h, v.arg.id());
  return h;
}

bool var_eq(const VarInfo& a, const VarInfo& b) {
  if (a.kind != b.kind || a.name != b.name || a.orders != b.orders) return false;
  if (a.args.size() != b.args.size()) return false;
  for (std::size_t i = 0; i < a.args.size(); ++i)
    if (!a.args[i].same(b.args[i])) return false;
  return a.op == b.op && a.arg.same(b.arg);
}

struct Store {
  std::mutex mu;
  // Deques: interning must not invalidate references handed out earlier.
  std::deque<Node> nodes;
  std::unordered_multimap<std::size_t, std::uint32_t> nodeIndex;
  std::deque<VarInfo> vars;
  std::unordered_multimap<std::size_t, Var> varIndex;
  std::unordered_map<std::uint32_t, std::uint32_t> canonMemo;
  std::unordered_map<std::uint64_t, std::uint32_t> diffMemo;

  Store() {
    // Slot 0: the rational 0, so a default Expr is valid.
    Node z;
    z.kind = Kind::Rational;
    z.q = 0;
    nodes.push_back(z);
    nodeIndex.emplace(node_hash(z), 0);
  }

  static Store& get() {
    static Store s;
    return s;
  }
};

constexpr std::uint32_t kInvalidId = 0xffffffffu;

}  // namespace

Expr intern_node(Node n) {
  Store& s = Store::get();
  std::lock_guard<std::mutex> lock(s.mu);
  std::size_t h = node_hash(n);
  auto [lo, hi] = s.nodeIndex.equal_range(h);
  for (auto it = lo; it != hi; ++it)
    if (node_eq(s.nodes[it->second], n)) return Expr::from_id(it->second);
  std::uint32_t id = static_cast<std::uint32_t>(s.nodes.size());
  s.nodes.push_back(std::move(n));
  s.nodeIndex.emplace(h, id);
  return Expr::from_id(id);
}

const Node& node_of(Expr e) {
  Store& s = Store::get();
  std::lock_guard<std::mutex> lock(s.mu);
  return s.nodes.at(e.id());
}

namespace {

Var intern_var(VarInfo v) {
  Store& s = Store::get();
  std::lock_guard<std::mutex> lock(s.mu);
  std::size_t h = var_hash(v);
  auto [lo, hi] = s.varIndex.equal_range(h);
  for (auto it = lo; it != hi; ++it)
    if (var_eq(s.vars[it->second], v)) return it->second;
  Var id = static_cast<Var>(s.vars.size());
  s.vars.push_back(std::move(v));
  s.varIndex.emplace(h, id);
  return id;
}

}  // namespace

Var coord_var(const std::string& name) {
  VarInfo v;
  v.kind = VarKind::Coord;
  v.name = name;
  return intern_var(std::move(v));
}

Var jet_var(const std::string& name, std::vector<std::uint32_t> orders,
            std::vector<Expr> canonArgs) {
  VarInfo v;
  v.kind = VarKind::Jet;
  v.name = name;
  v.orders = std::move(orders);
  v.args = std::move(canonArgs);
  return intern_var(std::move(v));
}

Var kernel_var(KernelOp op, Expr canonArg) {
  VarInfo v;
  v.kind = VarKind::Kernel;
  v.op = op;
  v.arg = canonArg;
  return intern_var(std::move(v));
}

const VarInfo& var_info(Var v) {
  Store& s = Store::get();
  std::lock_guard<std::mutex> lock(s.mu);
  return s.vars.at(v);
}

Expr expr_of(RatForm rf) {
  Node n;
  n.kind = Kind::Canon;
  n.rf = std::make_shared<const RatForm>(std::move(rf));
  return intern_node(std::move(n));
}

Expr canon_memo_get(Expr e) {
  Store& s = Store::get();
  std::lock_guard<std::mutex> lock(s.mu);
  auto it = s.canonMemo.find(e.id());
  return it == s.canonMemo.end() ? invalid_expr() : Expr::from_id(it->second);
}

void canon_memo_put(Expr e, Expr canon) {
  Store& s = Store::get();
  std::lock_guard<std::mutex> lock(s.mu);
  s.canonMemo.emplace(e.id(), canon.id());
}

Expr diff_memo_get(Expr canonExpr, Var v) {
  Store& s = Store::get();
  std::lock_guard<std::mutex> lock(s.mu);
  std::uint64_t key = (static_cast<std::uint64_t>(canonExpr.id()) << 32) | v;
  auto it = s.diffMemo.find(key);
  return it == s.diffMemo.end() ? invalid_expr() : Expr::from_id(it->second);
}

void diff_memo_put(Expr canonExpr, Var v, Expr d) {
  Store& s = Store::get();
  std::lock_guard<std::mutex> lock(s.mu);
  std::uint64_t key = (static_cast<std::uint64_t>(canonExpr.id()) << 32) | v;
  s.diffMemo.emplace(key, d.id());
}

bool valid(Expr e) { return e.id() != kInvalidId; }
Expr invalid_expr() { return Expr::from_id(kInvalidId); }

std::size_t RatForm::hash() const {
  return hash_combine(num.hash(), den.hash() * 3 + 1);
}

const RatForm& rf_of(Expr e) {
  Expr c = canonicalize(e);
  return *node_of(c).rf;
}

}  // namespace detail

using detail::Node;
using detail::node_of;

Expr::Expr() : id_(0) {}

Kind Expr::kind() const { return node_of(*this).kind; }

const mpq_class& Expr::rational_value() const {
  const Node& n = node_of(*this);
  if (n.kind != Kind::Rational) throw std::logic_error("Expr: not a rational");
  return n.q;
}

const std::string& Expr::name() const {
  const Node& n = node_of(*this);
  if (n.kind != Kind::Coord && n.kind != Kind::Apply)
    throw std::logic_error("Expr: no name");
  return n.name;
}

const std::vector<std::uint32_t>& Expr::jet_orders() const {
  const Node& n = node_of(*this);
  if (n.kind != Kind::Apply) throw std::logic_error("Expr: not an application");
  return n.orders;
}

const mpq_class& Expr::exponent() const {
  const Node& n = node_of(*this);
  if (n.kind != Kind::Power) throw std::logic_error("Expr: not a power");
  return n.q;
}

std::size_t Expr::arity() const { return node_of(*this).kids.size(); }

Expr Expr::child(std::size_t i) const {
  const Node& n = node_of(*this);
  if (i >= n.kids.size()) throw std::logic_error("Expr: child out of range");
  return n.kids[i];
}

Expr rational(const mpq_class& q) {
  mpq_class c = q;
  c.canonicalize();
  Node n;
  n.kind = Kind::Rational;
  n.q = c;
  return detail::intern_node(std::move(n));
}

Expr integer(long v) { return rational(mpq_class(v)); }

Expr coord(const std::string& name) {
  Node n;
  n.kind = Kind::Coord;
  n.name = name;
  return detail::intern_node(std::move(n));
}

Expr apply(const std::string& fn, std::vector<Expr> args,
           std::vector<std::uint32_t> orders) {
  if (orders.empty()) orders.assign(args.size(), 0);
  if (orders.size() != args.size())
    throw std::logic_error("apply: orders/arguments mismatch");
  Node n;
  n.kind = Kind::Apply;
  n.name = fn;
  n.orders = std::move(orders);
  n.kids = std::move(args);
  return detail::intern_node(std::move(n));
}

Expr sum(std::vector<Expr> kids) {
  std::vector<Expr> flat;
  for (Expr k : kids) {
    if (k.kind() == Kind::Sum) {
      for (std::size_t i = 0; i < k.arity(); ++i) flat.push_back(k.child(i));
    } else {
      flat.push_back(k);
    }
  }
  if (flat.empty()) return integer(0);
  if (flat.size() == 1) return flat[0];
  Node n;
  n.kind = Kind::Sum;
  n.kids = std::move(flat);
  return detail::intern_node(std::move(n));
}

Expr product(std::vector<Expr> kids) {
  std::vector<Expr> flat;
  for (Expr k : kids) {
    if (k.kind() == Kind::Product) {
      for (std::size_t i = 0; i < k.arity(); ++i) flat.push_back(k.child(i));
    } else {
      flat.push_back(k);
    }
  }
  if (flat.empty()) return integer(1);
  if (flat.size() == 1) return flat[0];
  Node n;
  n.kind = Kind::Product;
  n.kids = std::move(flat);
  return detail::intern_node(std::move(n));
}

Expr power(Expr base, const mpq_class& exponent) {
  mpq_class c = exponent;
  c.canonicalize();
  Node n;
  n.kind = Kind::Power;
  n.q = c;
  n.kids = {base};
  return detail::intern_node(std::move(n));
}

namespace {

Expr unary(Kind k, Expr a) {
  Node n;
  n.kind = k;
  n.kids = {a};
  return detail::intern_node(std::move(n));
}

}  // namespace

Expr exp_(Expr a) { return unary(Kind::Exp, a); }
Expr log_(Expr a) { return unary(Kind::Log, a); }
Expr sin_(Expr a) { return unary(Kind::Sin, a); }
Expr cos_(Expr a) { return unary(Kind::Cos, a); }
Expr sqrt_(Expr a) { return unary(Kind::Sqrt, a); }
Expr abs_(Expr a) { return unary(Kind::Abs, a); }

Expr operator+(Expr a, Expr b) { return sum({a, b}); }
Expr operator-(Expr a, Expr b) { return sum({a, product({integer(-1), b})}); }
Expr operator*(Expr a, Expr b) { return product({a, b}); }
Expr operator/(Expr a, Expr b) { return product({a, power(b, mpq_class(-1))}); }
Expr operator-(Expr a) { return product({integer(-1), a}); }
Expr pow_int(Expr base, long k) { return power(base, mpq_class(k)); }

EngineOptions& engine_options() {
  static EngineOptions opts;
  return opts;
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Zero:
      return "zero";
    case Verdict::NonZero:
      return "nonzero";
    default:
      return "unknown";
  }
}

bool canonically_equal(Expr a, Expr b) {
  return canonicalize(a).same(canonicalize(b));
}

bool is_zero_expr(Expr e, const Assumptions& assm) {
  return is_zero(e, assm).verdict == Verdict::Zero;
}

}  // namespace geodeq
