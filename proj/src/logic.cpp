#include "qrel/logic.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace qrel {

namespace {

std::vector<QuantumSet> duals(std::vector<QuantumSet> const &xs)
{
  std::vector<QuantumSet> out;
  for (auto const &x : xs) { out.push_back(QuantumSet::dual(x)); }
  return out;
}

} // namespace

FnPtr make_fn(std::string name, Relation rel, std::vector<QuantumSet> dom_sorts, QuantumSet cod)
{
  QuantumSet dom = QuantumSet::product_all(dom_sorts);
  if (!rel.dom().same_shape(dom) || !rel.cod().same_shape(cod)) {
    throw Error(ErrorKind::SortMismatch, "function " + name + ": relation shape disagrees with its signature");
  }
  return std::make_shared<FnSymbol const>(FnSymbol{name, rel.relabel(dom, cod), std::move(dom_sorts), cod});
}

RelPtr make_rel(std::string name, Relation rel, std::vector<QuantumSet> arity)
{
  QuantumSet dom = QuantumSet::product_all(arity);
  if (!rel.dom().same_shape(dom) || !rel.cod().same_shape(QuantumSet::unit())) {
    throw Error(ErrorKind::SortMismatch, "relation " + name + ": shape disagrees with its arity");
  }
  return std::make_shared<RelSymbol const>(RelSymbol{name, rel.relabel(dom, QuantumSet::unit()), std::move(arity)});
}

RelPtr equality_symbol(QuantumSet const &x)
{
  return make_rel("E[" + x.name() + "]", equality(x), {x, QuantumSet::dual(x)});
}

RelPtr graph_symbol(FnSymbol const &f)
{
  auto ar = f.dom_sorts;
  ar.push_back(QuantumSet::dual(f.cod));
  return make_rel(f.name, bend(f.rel), ar);
}

TermPtr var(std::string name)
{
  auto t = std::make_shared<Term>();
  t->kind = Term::Kind::Var;
  t->var = std::move(name);
  return t;
}

TermPtr app(FnPtr fn, std::vector<TermPtr> args)
{
  auto t = std::make_shared<Term>();
  t->kind = Term::Kind::App;
  t->fn = std::move(fn);
  t->args = std::move(args);
  return t;
}

TermPtr conj(TermPtr const &t)
{
  if (t->kind == Term::Kind::Var) { return t; }
  auto c = std::make_shared<Term>(*t);
  c->conj = !t->conj;
  for (auto &a : c->args) { a = conj(a); }
  return c;
}

namespace {

FormulaPtr mk(Formula::Op op, FormulaPtr a = nullptr, FormulaPtr b = nullptr)
{
  auto f = std::make_shared<Formula>();
  f->op = op;
  f->lhs = std::move(a);
  f->rhs = std::move(b);
  return f;
}

FormulaPtr mkq(Formula::Op op, std::string v, std::string vs, QuantumSet x, FormulaPtr body)
{
  auto f = std::make_shared<Formula>();
  f->op = op;
  f->v = std::move(v);
  f->vs = std::move(vs);
  f->sort = std::move(x);
  f->lhs = std::move(body);
  return f;
}

} // namespace

FormulaPtr f_true() { return mk(Formula::Op::True); }
FormulaPtr f_false() { return mk(Formula::Op::False); }

FormulaPtr atomic(RelPtr rel, std::vector<TermPtr> args, bool conj)
{
  auto f = std::make_shared<Formula>();
  f->op = Formula::Op::Atomic;
  f->rel = std::move(rel);
  f->args = std::move(args);
  f->rel_conj = conj;
  return f;
}

FormulaPtr eq(QuantumSet const &x, TermPtr a, TermPtr b) { return atomic(equality_symbol(x), {std::move(a), std::move(b)}); }
FormulaPtr f_not(FormulaPtr a) { return mk(Formula::Op::Not, std::move(a)); }
FormulaPtr f_and(FormulaPtr a, FormulaPtr b) { return mk(Formula::Op::And, std::move(a), std::move(b)); }
FormulaPtr f_or(FormulaPtr a, FormulaPtr b) { return mk(Formula::Op::Or, std::move(a), std::move(b)); }
FormulaPtr f_implies(FormulaPtr a, FormulaPtr b) { return mk(Formula::Op::Implies, std::move(a), std::move(b)); }
FormulaPtr f_iff(FormulaPtr a, FormulaPtr b) { return mk(Formula::Op::Iff, std::move(a), std::move(b)); }
FormulaPtr forall(std::string v, QuantumSet x, FormulaPtr body)
{
  return mkq(Formula::Op::Forall, std::move(v), "", std::move(x), std::move(body));
}
FormulaPtr exists(std::string v, QuantumSet x, FormulaPtr body)
{
  return mkq(Formula::Op::Exists, std::move(v), "", std::move(x), std::move(body));
}
FormulaPtr forall_diag(std::string v, std::string vs, QuantumSet x, FormulaPtr body)
{
  return mkq(Formula::Op::ForallDiag, std::move(v), std::move(vs), std::move(x), std::move(body));
}
FormulaPtr exists_diag(std::string v, std::string vs, QuantumSet x, FormulaPtr body)
{
  return mkq(Formula::Op::ExistsDiag, std::move(v), std::move(vs), std::move(x), std::move(body));
}

// ---------------------------------------------------------------------------
// printing

namespace {

void print_term(std::ostream &os, TermPtr const &t, bool ctx_conj)
{
  if (t->kind == Term::Kind::Var) {
    os << t->var;
    return;
  }
  if (t->conj != ctx_conj) { os << "~"; }
  os << t->fn->name;
  if (t->args.empty()) { return; }
  os << "(";
  for (size_t k = 0; k < t->args.size(); ++k) {
    if (k) { os << ", "; }
    print_term(os, t->args[k], t->conj);
  }
  os << ")";
}

int prec(Formula::Op op)
{
  switch (op) {
  case Formula::Op::Iff: return 1;
  case Formula::Op::Implies: return 2;
  case Formula::Op::Or: return 3;
  case Formula::Op::And: return 4;
  case Formula::Op::Not: return 5;
  case Formula::Op::Forall:
  case Formula::Op::Exists:
  case Formula::Op::ForallDiag:
  case Formula::Op::ExistsDiag: return 0;
  default: return 6;
  }
}

void print_formula(std::ostream &os, FormulaPtr const &f);

void print_child(std::ostream &os, FormulaPtr const &c, int parent)
{
  int p = prec(c->op);
  bool paren = p == 0 || p <= parent;
  if (parent == 5) { paren = p < 5; } // not binds tighter than any binary op
  if (paren) { os << "("; }
  print_formula(os, c);
  if (paren) { os << ")"; }
}

void print_formula(std::ostream &os, FormulaPtr const &f)
{
  using Op = Formula::Op;
  switch (f->op) {
  case Op::True: os << "true"; return;
  case Op::False: os << "false"; return;
  case Op::Atomic:
    if (f->rel_conj) { os << "~"; }
    os << f->rel->name << "(";
    for (size_t k = 0; k < f->args.size(); ++k) {
      if (k) { os << ", "; }
      print_term(os, f->args[k], false);
    }
    os << ")";
    return;
  case Op::Not:
    os << "not ";
    print_child(os, f->lhs, 5);
    return;
  case Op::And:
  case Op::Or:
  case Op::Implies:
  case Op::Iff: {
    char const *sym = f->op == Op::And ? " and " : f->op == Op::Or ? " or " : f->op == Op::Implies ? " -> " : " <-> ";
    print_child(os, f->lhs, prec(f->op));
    os << sym;
    print_child(os, f->rhs, prec(f->op));
    return;
  }
  case Op::Forall:
  case Op::Exists:
  case Op::ForallDiag:
  case Op::ExistsDiag: {
    bool const all = f->op == Op::Forall || f->op == Op::ForallDiag;
    bool const diag = f->op == Op::ForallDiag || f->op == Op::ExistsDiag;
    os << (all ? "forall " : "exists ") << f->v;
    if (diag) { os << " == " << f->vs; }
    os << " in " << f->sort.name() << " . ";
    print_formula(os, f->lhs);
    return;
  }
  }
}

} // namespace

std::string to_string(TermPtr const &t)
{
  std::ostringstream os;
  print_term(os, t, false);
  return os.str();
}

std::string to_string(FormulaPtr const &f)
{
  std::ostringstream os;
  print_formula(os, f);
  return os.str();
}

// ---------------------------------------------------------------------------
// syntactic utilities

namespace {

void collect_term_vars(TermPtr const &t, std::vector<std::string> &out)
{
  if (t->kind == Term::Kind::Var) {
    out.push_back(t->var);
    return;
  }
  for (auto const &a : t->args) { collect_term_vars(a, out); }
}

void push_unique(std::vector<std::string> &out, std::string const &v)
{
  if (std::find(out.begin(), out.end(), v) == out.end()) { out.push_back(v); }
}

void collect_free(FormulaPtr const &f, std::vector<std::string> const &bound, std::vector<std::string> &out)
{
  using Op = Formula::Op;
  switch (f->op) {
  case Op::True:
  case Op::False: return;
  case Op::Atomic:
    for (auto const &a : f->args) {
      std::vector<std::string> vs;
      collect_term_vars(a, vs);
      for (auto const &v : vs) {
        if (std::find(bound.begin(), bound.end(), v) == bound.end()) { push_unique(out, v); }
      }
    }
    return;
  case Op::Not: collect_free(f->lhs, bound, out); return;
  case Op::And:
  case Op::Or:
  case Op::Implies:
  case Op::Iff:
    collect_free(f->lhs, bound, out);
    collect_free(f->rhs, bound, out);
    return;
  default: {
    auto b = bound;
    b.push_back(f->v);
    if (!f->vs.empty()) { b.push_back(f->vs); }
    collect_free(f->lhs, b, out);
  }
  }
}

TermPtr rename_term(TermPtr const &t, std::string const &from, std::string const &to)
{
  if (t->kind == Term::Kind::Var) { return t->var == from ? var(to) : t; }
  auto c = std::make_shared<Term>(*t);
  for (auto &a : c->args) { a = rename_term(a, from, to); }
  return c;
}

// Renames free occurrences of `from`.
FormulaPtr rename_free(FormulaPtr const &f, std::string const &from, std::string const &to)
{
  using Op = Formula::Op;
  switch (f->op) {
  case Op::True:
  case Op::False: return f;
  case Op::Atomic: {
    auto c = std::make_shared<Formula>(*f);
    for (auto &a : c->args) { a = rename_term(a, from, to); }
    return c;
  }
  case Op::Not:
  case Op::And:
  case Op::Or:
  case Op::Implies:
  case Op::Iff: {
    auto c = std::make_shared<Formula>(*f);
    c->lhs = rename_free(f->lhs, from, to);
    if (f->rhs) { c->rhs = rename_free(f->rhs, from, to); }
    return c;
  }
  default:
    if (f->v == from || f->vs == from) { return f; }
    auto c = std::make_shared<Formula>(*f);
    c->lhs = rename_free(f->lhs, from, to);
    return c;
  }
}

void nondup_walk(FormulaPtr const &f, std::string const &path, NondupResult &res)
{
  if (!res.ok) { return; }
  using Op = Formula::Op;
  switch (f->op) {
  case Op::True:
  case Op::False: return;
  case Op::Atomic: {
    std::vector<std::string> vs;
    for (auto const &a : f->args) { collect_term_vars(a, vs); }
    std::set<std::string> seen;
    for (auto const &v : vs) {
      if (!seen.insert(v).second) {
        res.ok = false;
        res.path = path;
        res.var = v;
        res.atomic = to_string(f);
        return;
      }
    }
    return;
  }
  case Op::Not: nondup_walk(f->lhs, path + "/not", res); return;
  case Op::And:
  case Op::Or:
  case Op::Implies:
  case Op::Iff:
    nondup_walk(f->lhs, path + "/lhs", res);
    nondup_walk(f->rhs, path + "/rhs", res);
    return;
  default: nondup_walk(f->lhs, path + "/" + f->v, res);
  }
}

} // namespace

std::vector<std::string> term_vars(TermPtr const &t)
{
  std::vector<std::string> out;
  collect_term_vars(t, out);
  return out;
}

std::vector<std::string> free_vars(FormulaPtr const &f)
{
  std::vector<std::string> out;
  collect_free(f, {}, out);
  return out;
}

bool is_primitive(FormulaPtr const &f)
{
  using Op = Formula::Op;
  switch (f->op) {
  case Op::True:
  case Op::False: return true;
  case Op::Atomic:
    return std::all_of(f->args.begin(), f->args.end(), [](TermPtr const &t) { return t->kind == Term::Kind::Var; });
  case Op::Not:
  case Op::Forall: return is_primitive(f->lhs);
  case Op::And: return is_primitive(f->lhs) && is_primitive(f->rhs);
  default: return false;
  }
}

int depth(FormulaPtr const &f)
{
  switch (f->op) {
  case Formula::Op::True:
  case Formula::Op::False:
  case Formula::Op::Atomic: return 0;
  default: return 1 + std::max(depth(f->lhs), f->rhs ? depth(f->rhs) : 0);
  }
}

NondupResult nondup_check(FormulaPtr const &f)
{
  NondupResult r;
  nondup_walk(f, "", r);
  if (!r.ok && r.path.empty()) { r.path = "/"; }
  return r;
}

// ---------------------------------------------------------------------------
// translation

namespace {

struct Translator
{
  int fresh = 0;

  std::string next() { return "$" + std::to_string(++fresh); }

  std::vector<QuantumSet> arity_of(Formula const &f) const
  {
    return f.rel_conj ? duals(f.rel->arity) : f.rel->arity;
  }

  // t ↷ y*
  FormulaPtr arrow(TermPtr const &t, std::string const &ystar, QuantumSet const &y)
  {
    if (t->kind == Term::Kind::Var) { return eq(y, t, var(ystar)); }
    auto args = t->args;
    args.push_back(var(ystar));
    return atomic(graph_symbol(*t->fn), args, t->conj);
  }

  FormulaPtr run(FormulaPtr const &f)
  {
    using Op = Formula::Op;
    switch (f->op) {
    case Op::True:
    case Op::False: return f;
    case Op::Atomic: {
      if (is_primitive(f)) { return f; }
      auto ar = arity_of(*f);
      size_t const n = f->args.size();
      std::vector<std::string> ys(n), yss(n);
      std::vector<TermPtr> yv;
      for (size_t i = 0; i < n; ++i) {
        ys[i] = next();
        yss[i] = ys[i] + "*";
        yv.push_back(var(ys[i]));
      }
      FormulaPtr body = atomic(f->rel, yv, f->rel_conj);
      for (size_t i = 0; i < n; ++i) { body = f_and(body, arrow(f->args[i], yss[i], ar[i])); }
      for (size_t i = 0; i < n; ++i) { body = exists_diag(ys[i], yss[i], ar[i], body); }
      return run(body);
    }
    case Op::Not: return f_not(run(f->lhs));
    case Op::And: return f_and(run(f->lhs), run(f->rhs));
    case Op::Or: return f_not(f_and(f_not(run(f->lhs)), f_not(run(f->rhs))));
    case Op::Implies: return run(f_or(f_not(f->lhs), f_and(f->lhs, f->rhs)));
    case Op::Iff: return run(f_and(f_implies(f->lhs, f->rhs), f_implies(f->rhs, f->lhs)));
    case Op::Forall: return forall(f->v, f->sort, run(f->lhs));
    case Op::Exists: return f_not(forall(f->v, f->sort, f_not(run(f->lhs))));
    case Op::ForallDiag: {
      auto inner = f_implies(eq(f->sort, var(f->v), var(f->vs)), f->lhs);
      return run(forall(f->vs, QuantumSet::dual(f->sort), forall(f->v, f->sort, inner)));
    }
    case Op::ExistsDiag: return f_not(run(forall_diag(f->v, f->vs, f->sort, f_not(f->lhs))));
    }
    return f;
  }
};

} // namespace

FormulaPtr translate(FormulaPtr const &f)
{
  auto nd = nondup_check(f);
  if (!nd.ok) { throw Error(ErrorKind::Nonduplication, "variable " + nd.var + " repeated in " + nd.atomic); }
  Translator t;
  return t.run(f);
}

// ---------------------------------------------------------------------------
// semantics

QuantumSet context_set(Context const &ctx) { return QuantumSet::product_all(context_sorts(ctx)); }

std::vector<QuantumSet> context_sorts(Context const &ctx)
{
  std::vector<QuantumSet> s;
  for (auto const &v : ctx) { s.push_back(v.sort); }
  return s;
}

Relation atomic_clause(Relation const &r, std::vector<size_t> const &positions, std::vector<QuantumSet> const &ctx)
{
  size_t const n = ctx.size(), m = positions.size();
  std::vector<bool> used(n, false);
  for (auto p : positions) { used.at(p) = true; }
  std::vector<size_t> rest;
  for (size_t k = 0; k < n; ++k) {
    if (!used[k]) { rest.push_back(k); }
  }
  std::vector<QuantumSet> rsorts;
  for (auto p : positions) { rsorts.push_back(ctx[p]); }
  if (!r.dom().same_shape(QuantumSet::product_all(rsorts))) {
    throw Error(ErrorKind::SortError, "atomic clause: relation arity disagrees with the context sorts");
  }
  std::vector<size_t> ctx_radix(n), r_radix(m), rest_radix(rest.size());
  for (size_t k = 0; k < n; ++k) { ctx_radix[k] = ctx[k].size(); }
  for (size_t k = 0; k < m; ++k) { r_radix[k] = ctx[positions[k]].size(); }
  size_t nrest = 1;
  for (size_t k = 0; k < rest.size(); ++k) {
    rest_radix[k] = ctx[rest[k]].size();
    nrest *= rest_radix[k];
  }

  Relation out(QuantumSet::product_all(ctx), QuantumSet::unit());
  std::vector<size_t> a(n), dims(n), rd(m), restd(rest.size()), ri(m), resti(rest.size());
  for (auto const &[key, b] : r.blocks()) {
    auto ra = unflatten(key.first, r_radix);
    for (size_t rt = 0; rt < nrest; ++rt) {
      auto rsa = unflatten(rt, rest_radix);
      for (size_t k = 0; k < m; ++k) { a[positions[k]] = ra[k]; }
      for (size_t k = 0; k < rest.size(); ++k) { a[rest[k]] = rsa[k]; }
      size_t D = 1, Dr = 1;
      for (size_t k = 0; k < n; ++k) {
        dims[k] = static_cast<size_t>(ctx[k].dim(a[k]));
        D *= dims[k];
      }
      for (size_t k = 0; k < m; ++k) { rd[k] = dims[positions[k]]; }
      for (size_t k = 0; k < rest.size(); ++k) {
        restd[k] = dims[rest[k]];
        Dr *= restd[k];
      }
      Index const rank = b.rank();
      CMatrix out_v = CMatrix::Zero(static_cast<Index>(D), rank * static_cast<Index>(Dr));
      for (size_t t = 0; t < D; ++t) {
        auto idx = unflatten(t, dims);
        for (size_t k = 0; k < m; ++k) { ri[k] = idx[positions[k]]; }
        for (size_t k = 0; k < rest.size(); ++k) { resti[k] = idx[rest[k]]; }
        size_t const rix = flatten(ri, rd), six = flatten(resti, restd);
        for (Index p = 0; p < rank; ++p) {
          out_v(static_cast<Index>(t), p * static_cast<Index>(Dr) + static_cast<Index>(six)) = b.basis()(static_cast<Index>(rix), p);
        }
      }
      out.set_block(flatten(a, ctx_radix), 0, Subspace::from_orthonormal(1, static_cast<Index>(D), std::move(out_v)));
    }
  }
  return out;
}

Relation exists_first(Relation const &s, QuantumSet const &x, std::vector<QuantumSet> const &rest)
{
  QuantumSet rs = QuantumSet::product_all(rest);
  size_t const nr = rs.size();
  std::map<size_t, std::vector<CVector>> acc;
  for (auto const &[key, b] : s.blocks()) {
    size_t const a = key.first / nr, t = key.first % nr;
    Index const da = x.dim(a), Db = rs.dim(t);
    auto &cols = acc[t];
    for (Index p = 0; p < b.rank(); ++p) {
      for (Index i = 0; i < da; ++i) { cols.push_back(b.basis().col(p).segment(i * Db, Db)); }
    }
  }
  Relation out(rs, QuantumSet::unit());
  for (auto &[t, cols] : acc) {
    Index const Db = rs.dim(t);
    CMatrix m(Db, static_cast<Index>(cols.size()));
    for (size_t k = 0; k < cols.size(); ++k) { m.col(static_cast<Index>(k)) = cols[k]; }
    out.set_block(t, 0, Subspace::from_vectors(1, Db, m));
  }
  return out;
}

Relation exists_diag_first(Relation const &s, QuantumSet const &x, std::vector<QuantumSet> const &rest)
{
  QuantumSet rs = QuantumSet::product_all(rest);
  size_t const nr = rs.size(), nx = x.size();
  std::map<size_t, std::vector<CVector>> acc;
  for (auto const &[key, b] : s.blocks()) {
    size_t const pair = key.first / nr, t = key.first % nr;
    size_t const a = pair / nx, a2 = pair % nx;
    if (a != a2) { continue; }
    Index const da = x.dim(a), Db = rs.dim(t);
    auto &cols = acc[t];
    for (Index p = 0; p < b.rank(); ++p) {
      CVector g = CVector::Zero(Db);
      for (Index k = 0; k < da; ++k) { g += b.basis().col(p).segment((k * da + k) * Db, Db); }
      cols.push_back(g);
    }
  }
  Relation out(rs, QuantumSet::unit());
  for (auto &[t, cols] : acc) {
    Index const Db = rs.dim(t);
    CMatrix m(Db, static_cast<Index>(cols.size()));
    for (size_t k = 0; k < cols.size(); ++k) { m.col(static_cast<Index>(k)) = cols[k]; }
    out.set_block(t, 0, Subspace::from_vectors(1, Db, m));
  }
  return out;
}

Relation forall_residual(Relation const &s, std::vector<QuantumSet> const &sorts, size_t m)
{
  std::vector<QuantumSet> q(sorts.begin(), sorts.begin() + static_cast<long>(m)),
      rest(sorts.begin() + static_cast<long>(m), sorts.end());
  QuantumSet qs = QuantumSet::product_all(q), rs = QuantumSet::product_all(rest);
  size_t const nr = rs.size();
  Relation out(rs, QuantumSet::unit());
  for (size_t t = 0; t < nr; ++t) {
    Subspace acc = Subspace::full(1, rs.dim(t));
    for (size_t a = 0; a < qs.size() && !acc.is_zero(); ++a) {
      Subspace w = s.block(a * nr + t, 0);
      acc = meet(acc, residual_factor(Subspace::full(1, qs.dim(a)), w, 1, rs.dim(t)));
    }
    out.set_block(t, 0, acc);
  }
  return out;
}

Relation forall_diag_residual(Relation const &s, QuantumSet const &x, std::vector<QuantumSet> const &rest)
{
  QuantumSet rs = QuantumSet::product_all(rest);
  Relation e = equality(x);
  size_t const nr = rs.size(), nx = x.size();
  Relation out(rs, QuantumSet::unit());
  for (size_t t = 0; t < nr; ++t) {
    Subspace acc = Subspace::full(1, rs.dim(t));
    for (size_t a = 0; a < nx && !acc.is_zero(); ++a) {
      Subspace w = s.block((a * nx + a) * nr + t, 0);
      acc = meet(acc, residual_factor(e.block(a * nx + a, 0), w, 1, rs.dim(t)));
    }
    out.set_block(t, 0, acc);
  }
  return out;
}

namespace {

struct Interp
{
  InterpretOptions opt;
  InterpretStats *stats;
  int fresh = 0;

  static QuantumSet const *lookup(Context const &ctx, std::string const &v, size_t *pos = nullptr)
  {
    for (size_t k = 0; k < ctx.size(); ++k) {
      if (ctx[k].name == v) {
        if (pos) { *pos = k; }
        return &ctx[k].sort;
      }
    }
    return nullptr;
  }

  static void expect_sort(QuantumSet const &got, QuantumSet const &want, std::string const &what)
  {
    if (!got.compatible(want)) {
      throw Error(ErrorKind::SortError, what + " has sort " + got.name() + ", expected " + want.name());
    }
  }

  Relation term_own(TermPtr const &t, Context const &ctx, std::vector<VarDecl> &vars, QuantumSet *sort_out)
  {
    if (t->kind == Term::Kind::Var) {
      auto const *s = lookup(ctx, t->var);
      if (!s) { throw Error(ErrorKind::FreeVariableNotInContext, "variable " + t->var); }
      vars.push_back({t->var, *s});
      *sort_out = *s;
      return identity(*s);
    }
    FnSymbol const &fn = *t->fn;
    auto dom = t->conj ? duals(fn.dom_sorts) : fn.dom_sorts;
    if (t->args.size() != dom.size()) {
      throw Error(ErrorKind::SortError, "function " + fn.name + " applied to " + std::to_string(t->args.size()) +
                                            " arguments, expects " + std::to_string(dom.size()));
    }
    std::vector<Relation> parts;
    for (size_t k = 0; k < t->args.size(); ++k) {
      QuantumSet s;
      parts.push_back(term_own(t->args[k], ctx, vars, &s));
      expect_sort(s, dom[k], "argument " + std::to_string(k + 1) + " of " + fn.name);
    }
    Relation f = t->conj ? conjugate(fn.rel) : fn.rel;
    *sort_out = f.cod();
    if (parts.empty()) { return f; }
    return compose(f, cross_all(parts));
  }

  Relation atomic(Formula const &f, Context const &ctx)
  {
    RelSymbol const &rs = *f.rel;
    auto arity = f.rel_conj ? duals(rs.arity) : rs.arity;
    if (f.args.size() != arity.size()) {
      throw Error(ErrorKind::SortError, rs.name + " applied to " + std::to_string(f.args.size()) + " arguments, arity " +
                                            std::to_string(arity.size()));
    }
    Relation rel = f.rel_conj ? conjugate(rs.rel) : rs.rel;
    std::vector<VarDecl> vars;
    bool simple = true;
    std::vector<Relation> parts;
    for (size_t k = 0; k < f.args.size(); ++k) {
      QuantumSet s;
      parts.push_back(term_own(f.args[k], ctx, vars, &s));
      expect_sort(s, arity[k], "argument " + std::to_string(k + 1) + " of " + rs.name);
      simple = simple && f.args[k]->kind == Term::Kind::Var;
    }
    std::vector<size_t> pos;
    std::set<std::string> seen;
    for (auto const &v : vars) {
      if (!seen.insert(v.name).second) {
        throw Error(ErrorKind::Nonduplication, "variable " + v.name + " repeated in " + to_string(std::make_shared<Formula>(f)));
      }
      size_t p = 0;
      lookup(ctx, v.name, &p);
      pos.push_back(p);
    }
    Relation rt = simple ? rel : compose(rel, cross_all(parts));
    return atomic_clause(rt, pos, context_sorts(ctx));
  }

  // Binds (names..., ctx...) after renaming any clash with the context.
  FormulaPtr bind(FormulaPtr body, std::vector<std::string> &names, Context const &ctx)
  {
    for (auto &n : names) {
      bool clash = lookup(ctx, n) != nullptr;
      if (clash) {
        std::string nn = "$b" + std::to_string(++fresh);
        body = rename_free(body, n, nn);
        n = nn;
      }
    }
    return body;
  }

  void note_empty(QuantumSet const &x)
  {
    if (x.empty() && stats) { stats->empty_quantifier = true; }
  }

  Relation run(FormulaPtr const &f, Context const &ctx)
  {
    using Op = Formula::Op;
    switch (f->op) {
    case Op::True: return top(context_set(ctx), QuantumSet::unit());
    case Op::False: return bottom(context_set(ctx), QuantumSet::unit());
    case Op::Atomic: return atomic(*f, ctx);
    case Op::Not: return negate(run(f->lhs, ctx));
    case Op::And: return meet(run(f->lhs, ctx), run(f->rhs, ctx));
    case Op::Or: return join(run(f->lhs, ctx), run(f->rhs, ctx));
    case Op::Implies: return sasaki_arrow(run(f->lhs, ctx), run(f->rhs, ctx));
    case Op::Iff: {
      Relation a = run(f->lhs, ctx), b = run(f->rhs, ctx);
      return meet(sasaki_arrow(a, b), sasaki_arrow(b, a));
    }
    case Op::Forall:
    case Op::Exists: {
      note_empty(f->sort);
      std::vector<std::string> names{f->v};
      FormulaPtr body = bind(f->lhs, names, ctx);
      Context inner{{names[0], f->sort}};
      inner.insert(inner.end(), ctx.begin(), ctx.end());
      auto rest = context_sorts(ctx);
      Relation b = run(body, inner);
      if (f->op == Op::Exists) { return exists_first(b, f->sort, rest); }
      if (opt.forall == ForallMode::Residual) { return forall_residual(b, context_sorts(inner), 1); }
      return negate(exists_first(negate(b), f->sort, rest));
    }
    case Op::ForallDiag:
    case Op::ExistsDiag: {
      note_empty(f->sort);
      bool const all = f->op == Op::ForallDiag;
      if (opt.diag == DiagMode::Literal) {
        auto lit = [&](FormulaPtr body) {
          auto inner = f_implies(eq(f->sort, var(f->v), var(f->vs)), body);
          return forall(f->vs, QuantumSet::dual(f->sort), forall(f->v, f->sort, inner));
        };
        return run(all ? lit(f->lhs) : f_not(lit(f_not(f->lhs))), ctx);
      }
      std::vector<std::string> names{f->v, f->vs};
      FormulaPtr body = bind(f->lhs, names, ctx);
      Context inner{{names[0], f->sort}, {names[1], QuantumSet::dual(f->sort)}};
      inner.insert(inner.end(), ctx.begin(), ctx.end());
      auto rest = context_sorts(ctx);
      Relation b = run(body, inner);
      if (opt.diag == DiagMode::Residual) {
        return all ? forall_diag_residual(b, f->sort, rest) : negate(forall_diag_residual(negate(b), f->sort, rest));
      }
      return all ? negate(exists_diag_first(negate(b), f->sort, rest)) : exists_diag_first(b, f->sort, rest);
    }
    }
    throw Error(ErrorKind::InvariantViolation, "unknown formula node");
  }
};

void check_context(Context const &ctx)
{
  std::set<std::string> seen;
  for (auto const &v : ctx) {
    if (!seen.insert(v.name).second) { throw Error(ErrorKind::SortError, "duplicate context variable " + v.name); }
  }
}

} // namespace

Relation interpret(FormulaPtr const &f, Context const &ctx, InterpretOptions const &opt, InterpretStats *stats)
{
  check_context(ctx);
  for (auto const &v : free_vars(f)) {
    if (!Interp::lookup(ctx, v)) { throw Error(ErrorKind::FreeVariableNotInContext, "variable " + v); }
  }
  Interp in{opt, stats};
  return in.run(f, ctx);
}

Relation interpret_term_own(TermPtr const &t, Context const &ctx, std::vector<VarDecl> *vars)
{
  check_context(ctx);
  Interp in{{}, nullptr};
  std::vector<VarDecl> vs;
  QuantumSet s;
  Relation r = in.term_own(t, ctx, vs, &s);
  std::set<std::string> seen;
  for (auto const &v : vs) {
    if (!seen.insert(v.name).second) { throw Error(ErrorKind::Nonduplication, "variable " + v.name + " repeated in term"); }
  }
  std::vector<QuantumSet> sorts;
  for (auto const &v : vs) { sorts.push_back(v.sort); }
  if (vars) { *vars = vs; }
  return r.relabel(QuantumSet::product_all(sorts), r.cod());
}

Relation interpret_term(TermPtr const &t, Context const &ctx)
{
  std::vector<VarDecl> vs;
  Relation own = interpret_term_own(t, ctx, &vs);
  // positions of the term's variables in the context
  std::vector<size_t> pos;
  for (auto const &v : vs) {
    size_t p = 0;
    Interp::lookup(ctx, v.name, &p);
    pos.push_back(p);
  }
  std::vector<size_t> sorted = pos;
  std::sort(sorted.begin(), sorted.end());
  // discard unused context factors, keeping used ones in context order
  std::vector<Relation> proj;
  std::vector<QuantumSet> kept;
  for (size_t k = 0; k < ctx.size(); ++k) {
    bool used = std::find(pos.begin(), pos.end(), k) != pos.end();
    proj.push_back(used ? identity(ctx[k].sort) : top(ctx[k].sort, QuantumSet::unit()));
    if (used) { kept.push_back(ctx[k].sort); }
  }
  Relation p = cross_all(proj).relabel(context_set(ctx), QuantumSet::product_all(kept));
  // reorder from context order to term order: term slot k holds kept slot pi[k]
  std::vector<int> pi;
  for (auto q : pos) { pi.push_back(static_cast<int>(std::find(sorted.begin(), sorted.end(), q) - sorted.begin())); }
  Relation u = permutation_relation(kept, pi);
  return compose(own, compose(u, p));
}

bool truth(FormulaPtr const &f, InterpretOptions const &opt, InterpretStats *stats)
{
  auto fv = free_vars(f);
  if (!fv.empty()) { throw Error(ErrorKind::HasFreeVariables, "free variable " + fv.front()); }
  return is_top(interpret(f, {}, opt, stats));
}

} // namespace qrel
