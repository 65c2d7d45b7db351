#include "qrel/generators.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <numbers>

namespace qrel {

ClassicalStructure::Set const &ClassicalStructure::set(std::string const &name) const
{
  for (auto const &s : sets) {
    if (s.name == name) { return s; }
  }
  throw Error(ErrorKind::InvariantViolation, "classical structure: unknown set " + name);
}

namespace {

std::vector<size_t> radix_of(ClassicalStructure const &cs, std::vector<std::string> const &sorts)
{
  std::vector<size_t> r;
  for (auto const &s : sorts) { r.push_back(cs.set(s).labels.size()); }
  return r;
}

size_t count(std::vector<size_t> const &radix)
{
  size_t n = 1;
  for (auto r : radix) { n *= r; }
  return n;
}

std::vector<QuantumSet> sorts_of(Lifted const &l, std::vector<std::string> const &names)
{
  std::vector<QuantumSet> out;
  for (auto const &n : names) { out.push_back(l.sets.at(n)); }
  return out;
}

} // namespace

Lifted lift(ClassicalStructure const &cs)
{
  Lifted l;
  for (auto const &s : cs.sets) {
    if (l.sets.count(s.name)) { throw Error(ErrorKind::InvariantViolation, "duplicate set " + s.name); }
    l.sets.emplace(s.name, QuantumSet::classical(s.name, s.labels));
  }
  for (auto const &r : cs.rels) {
    auto radix = radix_of(cs, r.sorts);
    auto sorts = sorts_of(l, r.sorts);
    Relation rel(QuantumSet::product_all(sorts), QuantumSet::unit());
    for (auto const &t : r.tuples) {
      if (t.size() != radix.size()) { throw Error(ErrorKind::InvariantViolation, "relation " + r.name + ": tuple arity"); }
      for (size_t k = 0; k < t.size(); ++k) {
        if (t[k] >= radix[k]) { throw Error(ErrorKind::InvariantViolation, "relation " + r.name + ": element out of range"); }
      }
      rel.set_block(flatten(t, radix), 0, Subspace::full(1, 1));
    }
    l.rels[r.name] = make_rel(r.name, rel, sorts);
  }
  for (auto const &f : cs.fns) {
    auto radix = radix_of(cs, f.dom);
    auto sorts = sorts_of(l, f.dom);
    QuantumSet cod = l.sets.at(f.cod);
    Relation rel(QuantumSet::product_all(sorts), cod);
    size_t const n = count(radix);
    for (size_t i = 0; i < n; ++i) {
      auto it = f.table.find(unflatten(i, radix));
      if (it == f.table.end()) { throw Error(ErrorKind::InvariantViolation, "function " + f.name + " is not total"); }
      if (it->second >= cod.size()) { throw Error(ErrorKind::InvariantViolation, "function " + f.name + ": value out of range"); }
      rel.set_block(i, it->second, Subspace::full(1, 1));
    }
    if (f.table.size() != n) { throw Error(ErrorKind::InvariantViolation, "function " + f.name + ": entries outside domain"); }
    l.fns[f.name] = make_fn(f.name, rel, sorts, cod);
  }
  return l;
}

// ---------------------------------------------------------------------------
// brute-force classical evaluation

namespace {

struct Tarski
{
  ClassicalStructure const &cs;
  std::map<std::string, size_t> env;

  ClassicalStructure::Fn const *fn(std::string const &name) const
  {
    for (auto const &f : cs.fns) {
      if (f.name == name) { return &f; }
    }
    return nullptr;
  }

  size_t term(TermPtr const &t) const
  {
    if (t->kind == Term::Kind::Var) {
      auto it = env.find(t->var);
      if (it == env.end()) { throw Error(ErrorKind::FreeVariableNotInContext, "variable " + t->var); }
      return it->second;
    }
    auto const *f = fn(t->fn->name);
    if (!f) { throw Error(ErrorKind::InvariantViolation, "unknown function " + t->fn->name); }
    std::vector<size_t> args;
    for (auto const &a : t->args) { args.push_back(term(a)); }
    return f->table.at(args);
  }

  bool atomic(Formula const &f) const
  {
    std::vector<size_t> args;
    for (auto const &a : f.args) { args.push_back(term(a)); }
    std::string const &name = f.rel->name;
    if (name.rfind("E[", 0) == 0) { return args.at(0) == args.at(1); }
    for (auto const &r : cs.rels) {
      if (r.name == name) { return r.tuples.count(args) > 0; }
    }
    if (auto const *g = fn(name); g && args.size() == g->dom.size() + 1) {
      std::vector<size_t> in(args.begin(), args.end() - 1);
      return g->table.at(in) == args.back();
    }
    throw Error(ErrorKind::InvariantViolation, "unknown relation " + name);
  }

  bool quant(FormulaPtr const &f, bool all, std::vector<std::string> const &vars)
  {
    if (!f->sort.is_classical()) { throw Error(ErrorKind::NonClassicalSort, "sort " + f->sort.name() + " is not classical"); }
    std::vector<std::pair<std::string, std::optional<size_t>>> saved;
    for (auto const &v : vars) {
      auto it = env.find(v);
      saved.emplace_back(v, it == env.end() ? std::nullopt : std::optional<size_t>(it->second));
    }
    bool res = all;
    for (size_t a = 0; a < f->sort.size(); ++a) {
      for (auto const &v : vars) { env[v] = a; }
      bool b = eval(f->lhs);
      if (b != all) {
        res = b;
        break;
      }
    }
    for (auto const &[v, old] : saved) {
      if (old) { env[v] = *old; }
      else { env.erase(v); }
    }
    return res;
  }

  bool eval(FormulaPtr const &f)
  {
    using Op = Formula::Op;
    switch (f->op) {
    case Op::True: return true;
    case Op::False: return false;
    case Op::Atomic: return atomic(*f);
    case Op::Not: return !eval(f->lhs);
    case Op::And: return eval(f->lhs) && eval(f->rhs);
    case Op::Or: return eval(f->lhs) || eval(f->rhs);
    case Op::Implies: return !eval(f->lhs) || eval(f->rhs);
    case Op::Iff: return eval(f->lhs) == eval(f->rhs);
    case Op::Forall: return quant(f, true, {f->v});
    case Op::Exists: return quant(f, false, {f->v});
    case Op::ForallDiag: return quant(f, true, {f->v, f->vs});
    case Op::ExistsDiag: return quant(f, false, {f->v, f->vs});
    }
    throw Error(ErrorKind::InvariantViolation, "unknown formula node");
  }
};

} // namespace

bool fol_eval(ClassicalStructure const &cs, FormulaPtr const &f)
{
  Tarski t{cs, {}};
  return t.eval(f);
}

// ---------------------------------------------------------------------------
// Pauli strings and the Hamming family

std::vector<CMatrix> pauli_strings(int n, int k)
{
  if (n < 0 || k < 0) { throw Error(ErrorKind::BadParams, "pauli strings: negative length or weight"); }
  std::array<CMatrix, 4> p;
  for (auto &m : p) { m = CMatrix::Zero(2, 2); }
  p[0] << 1, 0, 0, 1;
  p[1] << 0, 1, 1, 0;
  p[2] << 0, Cx(0, -1), Cx(0, 1), 0;
  p[3] << 1, 0, 0, -1;
  std::vector<CMatrix> out;
  size_t const total = static_cast<size_t>(1) << (2 * n);
  for (size_t code = 0; code < total; ++code) {
    int w = 0;
    CMatrix m = CMatrix::Identity(1, 1);
    for (int q = 0; q < n; ++q) {
      size_t const s = (code >> (2 * q)) & 3;
      w += s != 0;
      m = kron<Cx>(m, p[s]);
    }
    if (w == k) { out.push_back(std::move(m)); }
  }
  return out;
}

MetricFamily quantum_hamming(int n)
{
  if (n < 1) { throw Error(ErrorKind::BadParams, "quantum_hamming: need at least one qubit"); }
  if (n > 4) { throw Error(ErrorKind::TooLarge, "quantum_hamming: at most 4 qubits"); }
  Index const d = Index(1) << n;
  MetricFamily m;
  m.base = QuantumSet::atoms("H", {d});
  for (int k = 0; k <= n; ++k) {
    Relation r(m.base, m.base);
    r.set_block(0, 0, span<Cx>(pauli_strings(n, k), d, d));
    m.values.push_back(k);
    m.relations.push_back(std::move(r));
  }
  return m;
}

// ---------------------------------------------------------------------------
// dual groups

void validate(IrrepData const &d)
{
  size_t const n = d.elements.size();
  double const tol = tolerances().cmp;
  if (n == 0) { throw Error(ErrorKind::InvariantViolation, "irreps: empty group"); }
  if (d.mult.size() != n) { throw Error(ErrorKind::InvariantViolation, "irreps: multiplication table has wrong size"); }
  for (auto const &row : d.mult) {
    if (row.size() != n) { throw Error(ErrorKind::InvariantViolation, "irreps: multiplication table has wrong size"); }
    for (int v : row) {
      if (v < 0 || static_cast<size_t>(v) >= n) { throw Error(ErrorKind::InvariantViolation, "irreps: table entry out of range"); }
    }
  }
  Index sq = 0;
  int trivial = 0;
  for (auto const &ir : d.irreps) {
    if (ir.dim < 1 || ir.rho.size() != n) {
      throw Error(ErrorKind::InvariantViolation, "irrep " + ir.name + ": need one matrix per element");
    }
    sq += ir.dim * ir.dim;
    bool triv = ir.dim == 1;
    for (size_t g = 0; g < n; ++g) {
      CMatrix const &m = ir.rho[g];
      if (m.rows() != ir.dim || m.cols() != ir.dim) {
        throw Error(ErrorKind::InvariantViolation, "irrep " + ir.name + ": matrix of wrong size");
      }
      if ((m * m.adjoint() - CMatrix::Identity(ir.dim, ir.dim)).norm() > tol) {
        throw Error(ErrorKind::InvariantViolation, "irrep " + ir.name + ": matrix is not unitary");
      }
      triv = triv && std::abs(m(0, 0) - 1.0) <= tol;
      for (size_t h = 0; h < n; ++h) {
        if ((m * ir.rho[h] - ir.rho[static_cast<size_t>(d.mult[g][h])]).norm() > tol) {
          throw Error(ErrorKind::InvariantViolation, "irrep " + ir.name + " is not a homomorphism");
        }
      }
    }
    trivial += triv;
  }
  if (sq != static_cast<Index>(n)) {
    throw Error(ErrorKind::InvariantViolation, "irreps: squared dimensions do not sum to the group order");
  }
  if (trivial != 1) { throw Error(ErrorKind::InvariantViolation, "irreps: need exactly one trivial irrep"); }
}

namespace {

// Row-major vectorization: vec(A v B) = (A ⊗ Bᵀ) vec(v).
CMatrix unvec_rows(CVector const &v, Index rows, Index cols)
{
  CMatrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) { m(i, j) = v(i * cols + j); }
  }
  return m;
}

} // namespace

DualGroup dual_group(IrrepData const &d)
{
  validate(d);
  size_t const n = d.elements.size(), m = d.irreps.size();
  std::vector<Index> dims;
  std::vector<std::string> labels;
  for (auto const &ir : d.irreps) {
    dims.push_back(ir.dim);
    labels.push_back(ir.name);
  }
  DualGroup out;
  out.x = QuantumSet::atoms("Irr", dims, labels);
  out.f = Relation(QuantumSet::product(out.x, out.x), out.x);
  for (size_t i = 0; i < m; ++i) {
    for (size_t j = 0; j < m; ++j) {
      auto const &pi = d.irreps[i], &pj = d.irreps[j];
      Index const dij = pi.dim * pj.dim;
      for (size_t k = 0; k < m; ++k) {
        auto const &pk = d.irreps[k];
        // projection onto {v : πₖ(g) v (πᵢ⊗πⱼ)(g)⁻¹ = v for all g}
        CMatrix avg = CMatrix::Zero(pk.dim * dij, pk.dim * dij);
        for (size_t g = 0; g < n; ++g) {
          CMatrix t = kron<Cx>(pi.rho[g], pj.rho[g]);
          avg += kron<Cx>(pk.rho[g], CMatrix(t.adjoint().transpose()));
        }
        avg /= static_cast<double>(n);
        std::vector<CMatrix> mats;
        for (Index c = 0; c < avg.cols(); ++c) { mats.push_back(unvec_rows(avg.col(c), pk.dim, dij)); }
        Subspace s = span<Cx>(mats, pk.dim, dij);
        if (!s.is_zero()) { out.f.set_block(i * m + j, k, s); }
      }
    }
  }
  out.c = Relation(QuantumSet::unit(), out.x);
  for (size_t k = 0; k < m; ++k) {
    auto const &ir = d.irreps[k];
    bool triv = ir.dim == 1 && std::all_of(ir.rho.begin(), ir.rho.end(),
                                           [](CMatrix const &r) { return std::abs(r(0, 0) - 1.0) <= tolerances().cmp; });
    if (triv) { out.c.set_block(0, k, Subspace::full(1, 1)); }
  }
  return out;
}

IrrepData cyclic_irreps(int n)
{
  if (n < 1 || n > 24) { throw Error(ErrorKind::BadParams, "cyclic group order must be in [1, 24]"); }
  IrrepData d;
  d.mult.assign(n, std::vector<int>(n));
  for (int g = 0; g < n; ++g) {
    d.elements.push_back(std::to_string(g));
    for (int h = 0; h < n; ++h) { d.mult[g][h] = (g + h) % n; }
  }
  for (int j = 0; j < n; ++j) {
    IrrepData::Irrep ir;
    ir.name = "chi" + std::to_string(j);
    for (int g = 0; g < n; ++g) {
      double const a = 2.0 * std::numbers::pi * j * g / n;
      ir.rho.push_back(CMatrix::Constant(1, 1, std::polar(1.0, a)));
    }
    d.irreps.push_back(std::move(ir));
  }
  return d;
}

IrrepData s3_irreps()
{
  std::vector<std::array<int, 3>> perms = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}, {1, 0, 2}, {2, 1, 0}, {0, 2, 1}};
  IrrepData d;
  d.elements = {"e", "r", "r2", "s01", "s02", "s12"};
  size_t const n = perms.size();
  d.mult.assign(n, std::vector<int>(n));
  for (size_t g = 0; g < n; ++g) {
    for (size_t h = 0; h < n; ++h) {
      std::array<int, 3> gh{};
      for (int i = 0; i < 3; ++i) { gh[i] = perms[g][perms[h][i]]; }
      d.mult[g][h] = static_cast<int>(std::find(perms.begin(), perms.end(), gh) - perms.begin());
    }
  }
  // orthonormal basis of the complement of (1,1,1)
  CMatrix b(3, 2);
  b << 1 / std::sqrt(2.0), 1 / std::sqrt(6.0), -1 / std::sqrt(2.0), 1 / std::sqrt(6.0), 0, -2 / std::sqrt(6.0);
  IrrepData::Irrep triv{"triv", 1, {}}, sign{"sign", 1, {}}, std_{"std", 2, {}};
  for (auto const &p : perms) {
    CMatrix pm = CMatrix::Zero(3, 3);
    for (int i = 0; i < 3; ++i) { pm(p[i], i) = 1.0; }
    triv.rho.push_back(CMatrix::Identity(1, 1));
    sign.rho.push_back(CMatrix::Constant(1, 1, pm.determinant()));
    std_.rho.push_back(b.adjoint() * pm * b);
  }
  d.irreps = {triv, sign, std_};
  return d;
}

DualGroup lift_monoid(std::string const &name, std::vector<std::vector<size_t>> const &table, size_t unit)
{
  size_t const n = table.size();
  if (n == 0 || unit >= n) { throw Error(ErrorKind::BadParams, "monoid: empty carrier or unit out of range"); }
  std::vector<std::string> labels;
  for (size_t k = 0; k < n; ++k) { labels.push_back(std::to_string(k)); }
  DualGroup g;
  g.x = QuantumSet::classical(name, labels);
  g.f = Relation(QuantumSet::product(g.x, g.x), g.x);
  for (size_t a = 0; a < n; ++a) {
    if (table[a].size() != n) { throw Error(ErrorKind::BadParams, "monoid: table is not square"); }
    for (size_t b = 0; b < n; ++b) {
      if (table[a][b] >= n) { throw Error(ErrorKind::BadParams, "monoid: table entry out of range"); }
      g.f.set_block(a * n + b, table[a][b], Subspace::full(1, 1));
    }
  }
  g.c = Relation(QuantumSet::unit(), g.x);
  g.c.set_block(0, unit, Subspace::full(1, 1));
  return g;
}

// ---------------------------------------------------------------------------
// random instances

namespace {

CMatrix gaussian(std::mt19937_64 &rng, Index r, Index c)
{
  std::normal_distribution<double> nd;
  CMatrix m(r, c);
  for (Index i = 0; i < r; ++i) {
    for (Index j = 0; j < c; ++j) { m(i, j) = Cx(nd(rng), nd(rng)); }
  }
  return m;
}

size_t pick(std::mt19937_64 &rng, size_t n) { return std::uniform_int_distribution<size_t>(0, n - 1)(rng); }

} // namespace

Subspace random_subspace(std::mt19937_64 &rng, Index rows, Index cols, Index rank)
{
  if (rows < 1 || cols < 1 || rank < 0 || rank > rows * cols) {
    throw Error(ErrorKind::BadParams, "random subspace: rank out of range");
  }
  return Subspace::from_vectors(rows, cols, gaussian(rng, rows * cols, rank));
}

CMatrix random_unitary(std::mt19937_64 &rng, Index dim)
{
  if (dim < 1) { throw Error(ErrorKind::BadParams, "random unitary: dimension must be positive"); }
  Eigen::HouseholderQR<CMatrix> qr(gaussian(rng, dim, dim));
  CMatrix q = qr.householderQ();
  CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index k = 0; k < dim; ++k) {
    if (std::abs(r(k, k)) > 0) { q.col(k) *= r(k, k) / std::abs(r(k, k)); }
  }
  return q;
}

CMatrix random_projection(std::mt19937_64 &rng, Index dim, Index rank)
{
  if (dim < 1 || rank < 0 || rank > dim) { throw Error(ErrorKind::BadParams, "random projection: rank out of range"); }
  CMatrix u = random_unitary(rng, dim).leftCols(rank);
  return u * u.adjoint();
}

Relation random_relation(std::mt19937_64 &rng, QuantumSet const &x, QuantumSet const &y, Index max_rank)
{
  if (max_rank < 0) { throw Error(ErrorKind::BadParams, "random relation: negative rank"); }
  Relation r(x, y);
  for (size_t i = 0; i < x.size(); ++i) {
    for (size_t j = 0; j < y.size(); ++j) {
      Index const amb = x.dim(i) * y.dim(j);
      Index const k = static_cast<Index>(pick(rng, static_cast<size_t>(std::min(amb, max_rank) + 1)));
      if (k > 0) { r.set_block(i, j, random_subspace(rng, y.dim(j), x.dim(i), k)); }
    }
  }
  return r;
}

Relation random_endo_relation(std::mt19937_64 &rng, QuantumSet const &x, Index max_rank)
{
  return random_relation(rng, x, x, max_rank);
}

QuantumSet random_qset(std::mt19937_64 &rng, std::string const &name, size_t max_atoms, Index max_dim)
{
  if (max_atoms < 1 || max_dim < 1) { throw Error(ErrorKind::BadParams, "random quantum set: empty range"); }
  size_t n = 1 + pick(rng, max_atoms);
  std::vector<Index> dims;
  for (size_t k = 0; k < n; ++k) { dims.push_back(1 + static_cast<Index>(pick(rng, static_cast<size_t>(max_dim)))); }
  return QuantumSet::atoms(name, dims);
}

ProjectionFamily random_magic_unitary(std::mt19937_64 &rng, size_t n, int blocks)
{
  if (n < 1 || blocks < 1 || blocks > 8) { throw Error(ErrorKind::BadParams, "random magic unitary: need n ≥ 1 and 1..8 blocks"); }
  auto perm = [&] {
    std::vector<size_t> p(n);
    for (size_t k = 0; k < n; ++k) { p[k] = k; }
    std::shuffle(p.begin(), p.end(), rng);
    return p;
  };
  std::vector<Index> bdims;
  for (int k = 0; k < blocks; ++k) { bdims.push_back(1 + static_cast<Index>(pick(rng, 2))); }
  Index d = 0;
  for (auto b : bdims) { d += b; }
  ProjectionFamily p;
  p.hilbert_dim = d;
  for (size_t k = 0; k < n; ++k) {
    p.row_labels.push_back(std::to_string(k));
    p.col_labels.push_back(std::to_string(k));
  }
  p.p.assign(n, std::vector<CMatrix>(n, CMatrix::Zero(d, d)));
  Index off = 0;
  for (auto b : bdims) {
    auto s = perm();
    if (b == 1) {
      for (size_t a = 0; a < n; ++a) { p.p[a][s[a]](off, off) = 1.0; }
    }
    else {
      auto t = perm();
      CMatrix q = random_projection(rng, 2, 1);
      CMatrix qc = CMatrix::Identity(2, 2) - q;
      for (size_t a = 0; a < n; ++a) {
        p.p[a][s[a]].block(off, off, 2, 2) += q;
        p.p[a][t[a]].block(off, off, 2, 2) += qc;
      }
    }
    off += b;
  }
  CMatrix u = random_unitary(rng, d);
  for (auto &row : p.p) {
    for (auto &m : row) { m = u * m * u.adjoint(); }
  }
  return p;
}

ClassicalStructure random_classical_structure(std::mt19937_64 &rng, RandomStructureParams const &p)
{
  if (p.max_set_size < 1) { throw Error(ErrorKind::BadParams, "random structure: sets must be nonempty"); }
  ClassicalStructure cs;
  size_t const nsets = 1 + pick(rng, 2);
  for (size_t s = 0; s < nsets; ++s) {
    ClassicalStructure::Set set;
    set.name = std::string(1, static_cast<char>('A' + s));
    size_t const n = 1 + pick(rng, p.max_set_size);
    for (size_t k = 0; k < n; ++k) { set.labels.push_back(set.name + std::to_string(k)); }
    cs.sets.push_back(std::move(set));
  }
  auto any_set = [&] { return cs.sets[pick(rng, cs.sets.size())].name; };
  size_t const nrels = 1 + pick(rng, 3);
  for (size_t r = 0; r < nrels; ++r) {
    ClassicalStructure::Rel rel;
    rel.name = "R" + std::to_string(r);
    size_t const ar = 1 + pick(rng, 3);
    for (size_t k = 0; k < ar; ++k) { rel.sorts.push_back(any_set()); }
    auto radix = radix_of(cs, rel.sorts);
    for (size_t i = 0; i < count(radix); ++i) {
      if (rng() % 2) { rel.tuples.insert(unflatten(i, radix)); }
    }
    cs.rels.push_back(std::move(rel));
  }
  size_t const nfns = pick(rng, 3);
  for (size_t f = 0; f < nfns; ++f) {
    ClassicalStructure::Fn fn;
    fn.name = "f" + std::to_string(f);
    size_t const ar = pick(rng, 3);
    for (size_t k = 0; k < ar; ++k) { fn.dom.push_back(any_set()); }
    fn.cod = any_set();
    auto radix = radix_of(cs, fn.dom);
    size_t const nc = cs.set(fn.cod).labels.size();
    for (size_t i = 0; i < count(radix); ++i) { fn.table[unflatten(i, radix)] = pick(rng, nc); }
    cs.fns.push_back(std::move(fn));
  }
  return cs;
}

namespace {

struct SentenceGen
{
  std::mt19937_64 &rng;
  Lifted const &l;
  std::vector<std::string> set_names;
  int fresh = 0;

  struct Bound
  {
    std::string name, set;
    bool dual;
  };

  // A term of sort set (or its dual) using variables not in `used`.
  TermPtr term(std::vector<Bound> const &scope, std::string const &set, bool dual, std::vector<std::string> &used,
               int budget)
  {
    auto t = plain(scope, set, dual, used, budget);
    return t && dual ? conj(t) : t;
  }

  // Unconjugated term over variables of the requested variance; conj() of it
  // has the dual sort.
  TermPtr plain(std::vector<Bound> const &scope, std::string const &set, bool dual, std::vector<std::string> &used,
                int budget)
  {
    std::vector<std::string> vars;
    for (auto const &b : scope) {
      if (b.set == set && b.dual == dual && std::find(used.begin(), used.end(), b.name) == used.end()) {
        vars.push_back(b.name);
      }
    }
    std::vector<FnPtr> fns;
    for (auto const &[n, f] : l.fns) {
      if (f->cod.name() == set) { fns.push_back(f); }
    }
    bool const use_fn = !fns.empty() && budget > 0 && (vars.empty() || rng() % 3 == 0);
    if (!use_fn) {
      if (vars.empty()) { return nullptr; }
      auto v = vars[pick(rng, vars.size())];
      used.push_back(v);
      return var(v);
    }
    auto f = fns[pick(rng, fns.size())];
    std::vector<TermPtr> args;
    for (auto const &s : f->dom_sorts) {
      auto a = plain(scope, s.name(), dual, used, budget - 1);
      if (!a) { return nullptr; }
      args.push_back(a);
    }
    return app(f, std::move(args));
  }

  FormulaPtr atom(std::vector<Bound> const &scope)
  {
    for (int attempt = 0; attempt < 6; ++attempt) {
      std::vector<TermPtr> args;
      std::vector<std::string> used;
      FormulaPtr out;
      switch (rng() % 3) {
      case 0: { // relation, possibly conjugated
        auto it = l.rels.begin();
        std::advance(it, static_cast<long>(pick(rng, l.rels.size())));
        bool const c = rng() % 4 == 0;
        bool ok = true;
        for (auto const &s : it->second->arity) {
          auto t = term(scope, s.name(), c, used, 2);
          if (!t) { ok = false; break; }
          args.push_back(t);
        }
        if (ok) { out = atomic(it->second, args, c); }
        break;
      }
      case 1: { // equality E[X](s, t*)
        auto const &set = set_names[pick(rng, set_names.size())];
        auto a = term(scope, set, false, used, 2);
        auto b = a ? term(scope, set, true, used, 2) : nullptr;
        if (a && b) { out = atomic(equality_symbol(l.sets.at(set)), {a, b}); }
        break;
      }
      default: { // function graph
        if (l.fns.empty()) { break; }
        auto it = l.fns.begin();
        std::advance(it, static_cast<long>(pick(rng, l.fns.size())));
        auto g = graph_symbol(*it->second);
        bool ok = true;
        for (size_t k = 0; k < g->arity.size(); ++k) {
          bool const last = k + 1 == g->arity.size();
          std::string const set = last ? it->second->cod.name() : it->second->dom_sorts[k].name();
          auto t = term(scope, set, last, used, 1);
          if (!t) { ok = false; break; }
          args.push_back(t);
        }
        if (ok) { out = atomic(g, args); }
        break;
      }
      }
      if (out) { return out; }
    }
    return rng() % 2 ? f_true() : f_false();
  }

  FormulaPtr run(std::vector<Bound> const &scope, int d)
  {
    if (d <= 0) { return atom(scope); }
    // quantifiers are favoured while few variables are in scope
    int const r = static_cast<int>(rng() % 10);
    bool const bind = scope.size() < 2 ? r < 6 : r < 3;
    if (bind) {
      auto const &set = set_names[pick(rng, set_names.size())];
      QuantumSet x = l.sets.at(set);
      std::string v = "v" + std::to_string(++fresh);
      auto in = scope;
      switch (rng() % 3) {
      case 0: {
        in.push_back({v, set, false});
        auto body = run(in, d - 1);
        return rng() % 2 ? forall(v, x, body) : exists(v, x, body);
      }
      case 1: {
        in.push_back({v + "*", set, true});
        auto body = run(in, d - 1);
        return rng() % 2 ? forall(v + "*", QuantumSet::dual(x), body) : exists(v + "*", QuantumSet::dual(x), body);
      }
      default: {
        in.push_back({v, set, false});
        in.push_back({v + "*", set, true});
        auto body = run(in, d - 1);
        return rng() % 2 ? forall_diag(v, v + "*", x, body) : exists_diag(v, v + "*", x, body);
      }
      }
    }
    switch (rng() % 6) {
    case 0: return atom(scope);
    case 1: return f_not(run(scope, d - 1));
    case 2: return f_and(run(scope, d - 1), run(scope, d - 1));
    case 3: return f_or(run(scope, d - 1), run(scope, d - 1));
    case 4: return f_implies(run(scope, d - 1), run(scope, d - 1));
    default: return f_iff(run(scope, d - 1), run(scope, d - 1));
    }
  }
};

} // namespace

FormulaPtr random_sentence(std::mt19937_64 &rng, ClassicalStructure const &cs, Lifted const &l, int depth)
{
  if (depth < 0) { throw Error(ErrorKind::BadParams, "random sentence: negative depth"); }
  SentenceGen g{rng, l, {}};
  for (auto const &s : cs.sets) {
    if (!s.labels.empty()) { g.set_names.push_back(s.name); }
  }
  if (g.set_names.empty()) { return f_true(); }
  return g.run({}, depth);
}

FormulaPtr random_formula(std::mt19937_64 &rng, std::vector<RelPtr> const &rels, Context const &ctx,
                          std::vector<QuantumSet> const &sorts, int depth, bool defined)
{
  if (depth < 0) { throw Error(ErrorKind::BadParams, "random formula: negative depth"); }
  std::vector<QuantumSet> qs;
  for (auto const &s : sorts) {
    if (!s.empty()) { qs.push_back(s); }
  }
  int fresh = 0;
  std::function<FormulaPtr(Context const &)> atom = [&](Context const &c) -> FormulaPtr {
    std::vector<RelPtr> ok;
    for (auto const &r : rels) {
      std::vector<bool> used(c.size(), false);
      bool fits = true;
      for (auto const &s : r->arity) {
        bool found = false;
        for (size_t k = 0; k < c.size() && !found; ++k) {
          if (!used[k] && c[k].sort.compatible(s)) { used[k] = found = true; }
        }
        fits = fits && found;
      }
      if (fits) { ok.push_back(r); }
    }
    if (ok.empty()) { return rng() % 2 ? f_true() : f_false(); }
    auto r = ok[pick(rng, ok.size())];
    std::vector<TermPtr> args;
    std::vector<bool> used(c.size(), false);
    for (auto const &s : r->arity) {
      std::vector<size_t> cand;
      for (size_t k = 0; k < c.size(); ++k) {
        if (!used[k] && c[k].sort.compatible(s)) { cand.push_back(k); }
      }
      size_t k = cand[pick(rng, cand.size())];
      used[k] = true;
      args.push_back(var(c[k].name));
    }
    return atomic(r, args);
  };
  std::function<FormulaPtr(Context const &, int)> run = [&](Context const &c, int d) -> FormulaPtr {
    if (d == 0) { return atom(c); }
    int const n = defined ? 10 : 4;
    int const op = static_cast<int>(rng() % static_cast<unsigned>(n));
    bool const quant = op == 3 || op == 7 || op >= 8;
    if (quant && qs.empty()) { return atom(c); }
    switch (op) {
    case 0: return atom(c);
    case 1: return f_not(run(c, d - 1));
    case 2: return f_and(run(c, d - 1), run(c, d - 1));
    case 4: return f_or(run(c, d - 1), run(c, d - 1));
    case 5: return f_implies(run(c, d - 1), run(c, d - 1));
    case 6: return f_iff(run(c, d - 1), run(c, d - 1));
    case 3:
    case 7: {
      auto x = qs[pick(rng, qs.size())];
      std::string v = "q" + std::to_string(++fresh);
      Context in = c;
      in.push_back({v, x});
      auto body = run(in, d - 1);
      return op == 3 ? forall(v, x, body) : exists(v, x, body);
    }
    default: {
      auto x = qs[pick(rng, qs.size())];
      std::string v = "q" + std::to_string(++fresh);
      Context in = c;
      in.push_back({v, x});
      in.push_back({v + "*", QuantumSet::dual(x)});
      auto body = run(in, d - 1);
      return rng() % 2 ? forall_diag(v, v + "*", x, body) : exists_diag(v, v + "*", x, body);
    }
    }
  };
  return run(ctx, depth);
}

} // namespace qrel
