#include <algorithm>
#include <cmath>
#include <set>

#include "qrel/frontend.hpp"

namespace qrel {

namespace {

struct Reject
{
};

class Elaborator
{
public:
  explicit Elaborator(std::vector<Diagnostic> &ds) : ds_(ds) {}

  Workspace run(ast::Workspace const &w)
  {
    for (auto const &d : w.decls) {
      std::visit([&](auto const &x) { declared_later_[x_name(x)] = true; }, d);
    }
    for (auto const &d : w.decls) {
      std::string name = std::visit([](auto const &x) { return x_name(x); }, d);
      declared_later_.erase(name);
      try {
        std::visit([&](auto const &x) { decl(x); }, d);
      } catch (Reject const &) {
        if (!name.empty()) { failed_.insert(name); }
      }
    }
    return std::move(ws_);
  }

private:
  template <typename T>
  static std::string x_name(T const &x)
  {
    if constexpr (std::is_same_v<T, ast::Assert> || std::is_same_v<T, ast::Verify>) {
      return {};
    } else {
      return x.name;
    }
  }

  void error(Span span, std::string msg, std::string hint = {})
  {
    ds_.push_back({Diagnostic::Severity::Error, span, std::move(msg), std::move(hint)});
  }
  [[noreturn]] void reject(Span span, std::string msg, std::string hint = {})
  {
    error(span, std::move(msg), std::move(hint));
    throw Reject{};
  }
  void warning(Span span, std::string msg)
  {
    ds_.push_back({Diagnostic::Severity::Warning, span, std::move(msg), {}});
  }

  // Unresolved reference; silent when the target's own declaration already failed.
  [[noreturn]] void unknown(Span span, std::string const &what, std::string const &name)
  {
    if (failed_.count(name)) { throw Reject{}; }
    reject(span, "unknown " + what + " '" + name + "'",
           declared_later_.count(name) ? "'" + name + "' is declared further down; declarations must precede their use"
                                       : std::string{});
  }

  // Quantum sets, relation/function symbols, formulas and the remaining
  // objects (families, metrics, graphs, irreps) live in separate namespaces.
  void claim(std::set<std::string> &names, std::string const &name, Span span, char const *what)
  {
    if (!names.insert(name).second) { reject(span, std::string("duplicate ") + what + " '" + name + "'"); }
  }

  QuantumSet sort(ast::Sort const &s)
  {
    switch (s.kind) {
    case ast::Sort::Kind::Unit: return QuantumSet::unit();
    case ast::Sort::Kind::Dual: return QuantumSet::dual(sort(s.args[0]));
    case ast::Sort::Kind::Product: return QuantumSet::product(sort(s.args[0]), sort(s.args[1]));
    case ast::Sort::Kind::Name: {
      auto it = ws_.sets.find(s.name);
      if (it == ws_.sets.end()) { unknown(s.span, "quantum set", s.name); }
      return it->second;
    }
    }
    return {};
  }

  static void product_factors(ast::Sort const &s, std::vector<ast::Sort const *> &out)
  {
    if (s.kind == ast::Sort::Kind::Product) {
      product_factors(s.args[0], out);
      product_factors(s.args[1], out);
    } else if (s.kind != ast::Sort::Kind::Unit) {
      out.push_back(&s);
    }
  }

  QuantumSet classical_set(std::string const &name, Span span)
  {
    auto it = ws_.sets.find(name);
    if (it == ws_.sets.end()) { unknown(span, "quantum set", name); }
    if (!it->second.is_classical()) { reject(span, "quantum set '" + name + "' is not classical"); }
    return it->second;
  }

  CMatrix matrix(ast::Matrix const &m, Index rows, Index cols)
  {
    Index r = static_cast<Index>(m.rows.size());
    Index c = r ? static_cast<Index>(m.rows[0].size()) : 0;
    for (auto const &row : m.rows) {
      if (static_cast<Index>(row.size()) != c) { reject(m.span, "ragged matrix: rows have different lengths"); }
    }
    if (r != rows || c != cols) {
      reject(m.span,
             "matrix is " + std::to_string(r) + "x" + std::to_string(c) + ", expected " + std::to_string(rows) + "x" +
                 std::to_string(cols),
             "a block from an atom of dimension n to one of dimension m is an m x n matrix");
    }
    CMatrix out(rows, cols);
    for (Index i = 0; i < r; ++i) {
      for (Index j = 0; j < c; ++j) {
        auto v = m.rows[i][j];
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) { reject(m.span, "matrix entries must be finite"); }
        out(i, j) = v;
      }
    }
    return out;
  }

  // Fills `rel` from block entries whose indices are resolved by `locate`.
  template <typename Locate>
  void fill_blocks(Relation &rel, std::vector<ast::Block> const &blocks, Locate locate)
  {
    std::set<std::pair<size_t, size_t>> seen;
    for (auto const &b : blocks) {
      auto [i, j] = locate(b);
      if (!seen.insert({i, j}).second) { reject(b.span, "block given twice"); }
      Index rows = rel.cod().dim(j), cols = rel.dom().dim(i);
      std::vector<CMatrix> mats;
      for (auto const &m : b.spanning) { mats.push_back(matrix(m, rows, cols)); }
      rel.set_block(i, j, span<Cx>(mats, rows, cols));
    }
  }

  size_t index_in(long idx, QuantumSet const &x, Span span)
  {
    if (idx < 0 || static_cast<size_t>(idx) >= x.size()) {
      reject(span, "atom index " + std::to_string(idx) + " out of range for " + sort_name(x) + " (" +
                       std::to_string(x.size()) + " atoms)");
    }
    return static_cast<size_t>(idx);
  }

  void decl(ast::Qset const &q)
  {
    claim(set_names_, q.name, q.span, "quantum set");
    try {
      if (q.classical) {
        ws_.sets[q.name] = QuantumSet::classical(q.name, q.labels);
      } else {
        std::vector<Index> dims;
        for (long d : q.dims) {
          if (d < 1) { reject(q.span, "atom dimensions must be positive, got " + std::to_string(d)); }
          dims.push_back(d);
        }
        ws_.sets[q.name] = QuantumSet::atoms(q.name, dims);
      }
    } catch (Error const &e) {
      reject(q.span, e.what());
    }
  }

  void decl(ast::Rel const &r)
  {
    claim(symbol_names_, r.name, r.span, "symbol");
    std::vector<QuantumSet> arity;
    for (auto const &s : r.arity) { arity.push_back(sort(s)); }
    Relation rel(QuantumSet::product_all(arity), QuantumSet::unit());
    std::vector<size_t> radix;
    for (auto const &a : arity) { radix.push_back(a.size()); }
    fill_blocks(rel, r.blocks, [&](ast::Block const &b) {
      if (b.index.size() != arity.size()) {
        reject(b.span, "block of '" + r.name + "' needs " + std::to_string(arity.size()) + " atom indices, got " +
                           std::to_string(b.index.size()));
      }
      std::vector<size_t> digits;
      for (size_t k = 0; k < arity.size(); ++k) { digits.push_back(index_in(b.index[k], arity[k], b.span)); }
      return std::pair<size_t, size_t>{flatten(digits, radix), 0};
    });
    ws_.rels[r.name] = make_rel(r.name, std::move(rel), arity);
  }

  void decl(ast::Fn const &f)
  {
    claim(symbol_names_, f.name, f.span, "symbol");
    std::vector<QuantumSet> dom;
    if (f.dom) {
      std::vector<ast::Sort const *> factors;
      product_factors(*f.dom, factors);
      for (auto const *s : factors) { dom.push_back(sort(*s)); }
    }
    QuantumSet cod = sort(f.cod);
    QuantumSet d = QuantumSet::product_all(dom);
    Relation rel(d, cod);
    std::vector<size_t> radix;
    for (auto const &a : dom) { radix.push_back(a.size()); }
    fill_blocks(rel, f.blocks, [&](ast::Block const &b) {
      size_t n = b.index.size();
      if (n == 2) { return std::pair<size_t, size_t>{index_in(b.index[0], d, b.span), index_in(b.index[1], cod, b.span)}; }
      if (n != dom.size() + 1) {
        reject(b.span, "block of '" + f.name + "' needs (domain atom, codomain atom) or one index per argument sort",
               "e.g. block (i, j) with i a flattened index into " + sort_name(d));
      }
      std::vector<size_t> digits;
      for (size_t k = 0; k < dom.size(); ++k) { digits.push_back(index_in(b.index[k], dom[k], b.span)); }
      return std::pair<size_t, size_t>{flatten(digits, radix), index_in(b.index[n - 1], cod, b.span)};
    });
    ws_.fns[f.name] = make_fn(f.name, std::move(rel), dom, cod);
  }

  // --- formulas --------------------------------------------------------------

  struct Scope
  {
    std::vector<VarDecl> bound;
    Context free;
    std::vector<Span> free_spans;
  };

  RelPtr symbol(std::string const &name, Span span)
  {
    if (auto it = ws_.rels.find(name); it != ws_.rels.end()) { return it->second; }
    if (auto it = ws_.fns.find(name); it != ws_.fns.end()) {
      auto &g = graphs_[name];
      if (!g) { g = graph_symbol(*it->second); }
      return g;
    }
    unknown(span, "relation symbol", name);
  }

  static std::string sorts_text(QuantumSet const &want, QuantumSet const &got)
  {
    return "expected sort " + sort_name(want) + ", found " + sort_name(got);
  }

  void check_sort(QuantumSet const &want, QuantumSet const &got, Span span, std::string const &what)
  {
    if (!want.compatible(got)) { reject(span, what + ": " + sorts_text(want, got)); }
  }

  // `want` is the sort the term must have; `conj` is the parity of enclosing ~.
  TermPtr term(ast::Term const &t, QuantumSet const &want, bool conj, Scope &sc, std::vector<std::string> &seen)
  {
    if (t.kind == ast::Term::Kind::Conj) {
      if (t.args[0].kind == ast::Term::Kind::Name && !is_constant(t.args[0].name, sc)) {
        warning(t.span, "conjugating a variable has no effect");
      }
      return term(t.args[0], want, !conj, sc, seen);
    }
    if (t.kind == ast::Term::Kind::Name && !is_constant(t.name, sc)) {
      seen.push_back(t.name);
      for (auto it = sc.bound.rbegin(); it != sc.bound.rend(); ++it) {
        if (it->name == t.name) {
          check_sort(want, it->sort, t.span, "variable '" + t.name + "'");
          return var(t.name);
        }
      }
      for (size_t k = 0; k < sc.free.size(); ++k) {
        if (sc.free[k].name == t.name) {
          if (!want.compatible(sc.free[k].sort)) {
            reject(t.span, "free variable '" + t.name + "' used at sort " + sort_name(want) +
                               " but earlier at sort " + sort_name(sc.free[k].sort));
          }
          return var(t.name);
        }
      }
      sc.free.push_back({t.name, want});
      sc.free_spans.push_back(t.span);
      return var(t.name);
    }
    auto it = ws_.fns.find(t.name);
    if (it == ws_.fns.end()) {
      unknown(t.span, "function symbol", t.name);
    }
    FnPtr const &f = it->second;
    QuantumSet cod = conj ? QuantumSet::dual(f->cod) : f->cod;
    check_sort(want, cod, t.span, "term " + ast::print(t));
    if (t.args.size() != f->dom_sorts.size()) {
      reject(t.span, "function '" + t.name + "' takes " + std::to_string(f->dom_sorts.size()) + " arguments, got " +
                         std::to_string(t.args.size()));
    }
    auto out = std::make_shared<Term>();
    out->kind = Term::Kind::App;
    out->fn = f;
    out->conj = conj;
    for (size_t k = 0; k < t.args.size(); ++k) {
      QuantumSet w = conj ? QuantumSet::dual(f->dom_sorts[k]) : f->dom_sorts[k];
      out->args.push_back(term(t.args[k], w, conj, sc, seen));
    }
    return out;
  }

  bool is_constant(std::string const &name, Scope const &sc) const
  {
    for (auto const &b : sc.bound) {
      if (b.name == name) { return false; }
    }
    auto it = ws_.fns.find(name);
    return it != ws_.fns.end() && it->second->dom_sorts.empty();
  }

  void nondup(std::vector<std::string> const &seen, Span span)
  {
    std::set<std::string> s;
    for (auto const &v : seen) {
      if (!s.insert(v).second) {
        reject(span, "variable '" + v + "' occurs more than once in this atomic formula; atomic formulas must be nonduplicating",
               "use a fresh variable for the second occurrence and relate the two through a quantifier, e.g. "
               "forall " + v + " == " + v + "s in X . ...");
      }
    }
  }

  FormulaPtr formula(ast::Formula const &f, Scope &sc)
  {
    using Op = ast::Formula::Op;
    switch (f.op) {
    case Op::True: return f_true();
    case Op::False: return f_false();
    case Op::Atomic: {
      RelPtr r = symbol(f.rel, f.span);
      if (f.args.size() != r->arity.size()) {
        reject(f.span, "relation '" + f.rel + "' has arity " + std::to_string(r->arity.size()) + ", got " +
                           std::to_string(f.args.size()) + " arguments");
      }
      std::vector<TermPtr> args;
      std::vector<std::string> seen;
      for (size_t k = 0; k < f.args.size(); ++k) {
        QuantumSet w = f.conj ? QuantumSet::dual(r->arity[k]) : r->arity[k];
        args.push_back(term(f.args[k], w, false, sc, seen));
      }
      nondup(seen, f.span);
      return atomic(r, std::move(args), f.conj);
    }
    case Op::Eq: {
      QuantumSet x = sort(*f.sort);
      std::vector<std::string> seen;
      auto a = term(f.args[0], x, false, sc, seen);
      auto b = term(f.args[1], QuantumSet::dual(x), false, sc, seen);
      nondup(seen, f.span);
      return eq(x, a, b);
    }
    case Op::Not: return f_not(formula(f.sub[0], sc));
    case Op::And:
    case Op::Or:
    case Op::Implies:
    case Op::Iff: {
      // left to right, so free variables are recorded in reading order
      auto a = formula(f.sub[0], sc);
      auto b = formula(f.sub[1], sc);
      if (f.op == Op::And) { return f_and(a, b); }
      if (f.op == Op::Or) { return f_or(a, b); }
      if (f.op == Op::Implies) { return f_implies(a, b); }
      return f_iff(a, b);
    }
    default: break;
    }
    QuantumSet x = sort(*f.sort);
    bool diag = f.op == Op::ForallDiag || f.op == Op::ExistsDiag;
    if (diag && f.v == f.vs) { reject(f.span, "a diagonal quantifier needs two distinct variables"); }
    size_t mark = sc.bound.size();
    sc.bound.push_back({f.v, x});
    if (diag) { sc.bound.push_back({f.vs, QuantumSet::dual(x)}); }
    FormulaPtr body = formula(f.sub[0], sc);
    sc.bound.resize(mark);
    switch (f.op) {
    case Op::Forall: return forall(f.v, x, body);
    case Op::Exists: return exists(f.v, x, body);
    case Op::ForallDiag: return forall_diag(f.v, f.vs, x, body);
    default: return exists_diag(f.v, f.vs, x, body);
    }
  }

  void decl(ast::NamedFormula const &n)
  {
    claim(formula_names_, n.name, n.span, "formula");
    Scope sc;
    Workspace::NamedFormula out;
    out.f = formula(n.body, sc);
    out.free = sc.free;
    out.span = n.span;
    ws_.formulas[n.name] = std::move(out);
    ws_.formula_order.push_back(n.name);
  }

  void decl(ast::Assert const &a)
  {
    auto it = ws_.formulas.find(a.name);
    if (it == ws_.formulas.end()) { unknown(a.span, "formula", a.name); }
    if (!it->second.free.empty()) {
      std::string vs;
      for (auto const &v : it->second.free) { vs += (vs.empty() ? "" : ", ") + v.name; }
      reject(a.span, "formula '" + a.name + "' has free variables (" + vs + ") and so has no truth value",
             "bind them with quantifiers, or evaluate it with `eval --context`");
    }
    ws_.asserts.push_back({a.name, a.expect.value_or(true), a.span});
  }

  // Endo-relation X -> X named by a rel of arity (X, X*) or a function symbol.
  void need_endo(std::string const &name, Span span)
  {
    if (auto it = ws_.rels.find(name); it != ws_.rels.end()) {
      auto const &a = it->second->arity;
      if (a.size() != 2 || !QuantumSet::dual(a[0]).compatible(a[1])) {
        reject(span, "relation '" + name + "' must have arity (X, X*)");
      }
      return;
    }
    if (auto it = ws_.fns.find(name); it != ws_.fns.end()) {
      if (!it->second->rel.dom().compatible(it->second->rel.cod())) {
        reject(span, "function '" + name + "' is not an endo-relation");
      }
      return;
    }
    unknown(span, "relation", name);
  }

  void need_function(std::string const &name, Span span)
  {
    if (auto it = ws_.rels.find(name); it != ws_.rels.end()) {
      if (it->second->arity.size() != 2) { reject(span, "relation '" + name + "' must have arity (X, Y*)"); }
      return;
    }
    if (!ws_.fns.count(name)) { unknown(span, "function", name); }
  }

  template <typename M>
  void need(M const &m, std::string const &name, Span span, char const *what)
  {
    if (!m.count(name)) { unknown(span, what, name); }
  }

  void arity(ast::Verify const &v, size_t n)
  {
    if (v.names.size() != n) {
      reject(v.span, "'verify " + v.kind + "' takes " + std::to_string(n) + " name" + (n > 1 ? "s" : "") + ", got " +
                         std::to_string(v.names.size()));
    }
  }

  void decl(ast::Verify const &v)
  {
    auto const &k = v.kind;
    if (k == "graph" || k == "preorder" || k == "poset-weaver" || k == "poset-nilpotent") {
      arity(v, 1);
      need_endo(v.names[0], v.span);
    } else if (k == "function" || k == "injective" || k == "surjective") {
      arity(v, 1);
      need_function(v.names[0], v.span);
    } else if (k == "metric" || k == "pseudometric") {
      arity(v, 1);
      need(ws_.metrics, v.names[0], v.span, "metric");
    } else if (k == "magic-unitary") {
      arity(v, 1);
      need(ws_.families, v.names[0], v.span, "family");
    } else if (k == "hom-witness" || k == "iso-witness") {
      arity(v, 3);
      need(ws_.families, v.names[0], v.span, "family");
      need(ws_.graphs, v.names[1], v.span, "graph");
      need(ws_.graphs, v.names[2], v.span, "graph");
      auto const &fam = ws_.families[v.names[0]];
      if (ws_.graphs[v.names[1]].set != fam.rows || ws_.graphs[v.names[2]].set != fam.cols) {
        reject(v.span, "graphs must live on the family's row set " + fam.rows + " and column set " + fam.cols);
      }
    } else if (k == "quantum-group") {
      if (v.names.size() == 1) {
        need(ws_.irreps, v.names[0], v.span, "irrep data");
      } else {
        arity(v, 2);
        need(ws_.fns, v.names[0], v.span, "function");
        need(ws_.fns, v.names[1], v.span, "function");
      }
    } else {
      reject(v.span, "unknown verification kind '" + k + "'");
    }
    ws_.verifies.push_back({v.kind, v.names, v.span});
  }

  void decl(ast::Family const &f)
  {
    claim(object_names_, f.name, f.span, "object");
    QuantumSet a = classical_set(f.rows, f.span), b = classical_set(f.cols, f.span);
    if (f.dim < 1) { reject(f.span, "family dimension must be positive"); }
    Workspace::Family out;
    out.rows = f.rows;
    out.cols = f.cols;
    auto &p = out.p;
    p.hilbert_dim = f.dim;
    for (auto const &at : a.atoms()) { p.row_labels.push_back(at.label); }
    for (auto const &at : b.atoms()) { p.col_labels.push_back(at.label); }
    p.p.assign(a.size(), std::vector<CMatrix>(b.size(), CMatrix::Zero(f.dim, f.dim)));
    std::set<std::pair<long, long>> seen;
    for (auto const &e : f.entries) {
      size_t i = index_in(e.a, a, e.m.span), j = index_in(e.b, b, e.m.span);
      if (!seen.insert({e.a, e.b}).second) { reject(e.m.span, "entry given twice"); }
      p.p[i][j] = matrix(e.m, f.dim, f.dim);
    }
    ws_.families[f.name] = std::move(out);
  }

  void decl(ast::Metric const &m)
  {
    claim(object_names_, m.name, m.span, "object");
    MetricFamily out;
    out.base = sort(m.base);
    for (size_t k = 0; k < m.values.size(); ++k) {
      auto const &[v, rname] = m.values[k];
      if (v < 0 || std::isnan(v)) { reject(m.span, "distances must be non-negative"); }
      if (k > 0 && !(v > m.values[k - 1].first)) { reject(m.span, "distances must be strictly increasing"); }
      auto it = ws_.rels.find(rname);
      if (it == ws_.rels.end()) { unknown(m.span, "relation", rname); }
      auto const &ar = it->second->arity;
      QuantumSet xs = QuantumSet::dual(out.base);
      if (ar.size() != 2 || !ar[0].compatible(out.base) || !ar[1].compatible(xs)) {
        reject(m.span, "relation '" + rname + "' must have arity (" + sort_name(out.base) + ", " + sort_name(xs) + ")");
      }
      out.values.push_back(v);
      out.relations.push_back(unbend(it->second->rel, out.base, out.base));
    }
    if (out.values.empty()) { reject(m.span, "a metric needs at least one distance"); }
    ws_.metrics[m.name] = std::move(out);
  }

  void decl(ast::Graph const &g)
  {
    claim(object_names_, g.name, g.span, "object");
    QuantumSet v = classical_set(g.set, g.span);
    Workspace::Graph out;
    out.set = g.set;
    for (auto const &at : v.atoms()) { out.g.labels.push_back(at.label); }
    out.g.adj.assign(v.size(), std::vector<bool>(v.size(), false));
    for (auto const &[x, y] : g.edges) {
      int i = v.index_of(x), j = v.index_of(y);
      if (i < 0 || j < 0) { reject(g.span, "no vertex '" + (i < 0 ? x : y) + "' in " + g.set); }
      if (i == j) { reject(g.span, "loop at '" + x + "': graphs are simple"); }
      out.g.adj[i][j] = out.g.adj[j][i] = true;
    }
    ws_.graphs[g.name] = std::move(out);
  }

  void decl(ast::Irreps const &r)
  {
    claim(object_names_, r.name, r.span, "object");
    IrrepData d;
    d.elements = r.elements;
    size_t n = r.elements.size();
    if (n == 0) { reject(r.span, "a group needs at least one element"); }
    for (auto const &ir : r.irreps) {
      IrrepData::Irrep out;
      out.name = ir.name;
      if (ir.rho.size() != n) {
        reject(r.span, "irrep '" + ir.name + "' gives " + std::to_string(ir.rho.size()) + " matrices for " +
                           std::to_string(n) + " elements");
      }
      out.dim = static_cast<Index>(ir.rho[0].rows.size());
      for (auto const &m : ir.rho) { out.rho.push_back(matrix(m, out.dim, out.dim)); }
      d.irreps.push_back(std::move(out));
    }
    // The multiplication table is read off the direct sum of the irreps, which
    // is faithful when the data is complete.
    d.mult.assign(n, std::vector<int>(n, -1));
    for (size_t g = 0; g < n; ++g) {
      for (size_t h = 0; h < n; ++h) {
        for (size_t k = 0; k < n && d.mult[g][h] < 0; ++k) {
          bool match = true;
          for (auto const &ir : d.irreps) {
            match = match && (ir.rho[g] * ir.rho[h] - ir.rho[k]).norm() <= tolerances().cmp;
          }
          if (match) { d.mult[g][h] = static_cast<int>(k); }
        }
        if (d.mult[g][h] < 0) {
          reject(r.span, "the product " + r.elements[g] + "·" + r.elements[h] + " is not among the listed elements");
        }
      }
    }
    try {
      validate(d);
    } catch (Error const &e) {
      reject(r.span, e.what());
    }
    ws_.irreps[r.name] = std::move(d);
  }

  std::vector<Diagnostic> &ds_;
  Workspace ws_;
  std::map<std::string, bool> declared_later_;
  std::set<std::string> failed_;
  std::map<std::string, RelPtr> graphs_;
  std::set<std::string> set_names_, symbol_names_, formula_names_, object_names_;
};

} // namespace

ElabResult elaborate(ast::Workspace const &w)
{
  ElabResult r;
  r.ws = Elaborator(r.diagnostics).run(w);
  return r;
}

ElabResult load_workspace(std::string const &text)
{
  auto p = parse_workspace(text);
  if (!p.ok()) { return {{}, std::move(p.diagnostics)}; }
  auto e = elaborate(p.ws);
  p.diagnostics.insert(p.diagnostics.end(), e.diagnostics.begin(), e.diagnostics.end());
  e.diagnostics = std::move(p.diagnostics);
  return e;
}

} // namespace qrel
