#include "qrel/structures.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qrel {

Condition const *VerificationReport::find(std::string const &id) const
{
  for (auto const &c : conditions) {
    if (c.id == id) { return &c; }
  }
  return nullptr;
}

void VerificationReport::add(std::string id, std::string formula, double margin, std::string note)
{
  Condition c;
  c.id = std::move(id);
  c.formula = std::move(formula);
  c.margin = margin;
  c.passed = margin <= tolerances().cmp;
  c.note = std::move(note);
  if (margin > tolerances().cmp && margin <= tolerances().warn) { warn = true; }
  passed = passed && c.passed;
  conditions.push_back(std::move(c));
}

void VerificationReport::add_skipped(std::string id, std::string formula, std::string note)
{
  Condition c;
  c.id = std::move(id);
  c.formula = std::move(formula);
  c.passed = true;
  c.skipped = true;
  c.note = std::move(note);
  conditions.push_back(std::move(c));
}

std::vector<std::string> VerificationReport::failed_ids() const
{
  std::vector<std::string> out;
  for (auto const &c : conditions) {
    if (!c.passed) { out.push_back(c.id); }
  }
  return out;
}

namespace {

QuantumSet dual(QuantumSet const &x) { return QuantumSet::dual(x); }
QuantumSet one() { return QuantumSet::unit(); }

// Largest atom dimension of the interpreter's context: the product of the
// largest atom of each bound sort (a diagonal binder contributes twice).
double formula_load(FormulaPtr const &f)
{
  using Op = Formula::Op;
  switch (f->op) {
  case Op::True:
  case Op::False:
  case Op::Atomic: return 1.0;
  case Op::Not: return formula_load(f->lhs);
  case Op::And:
  case Op::Or:
  case Op::Implies:
  case Op::Iff: return std::max(formula_load(f->lhs), formula_load(f->rhs));
  case Op::Forall:
  case Op::Exists: return static_cast<double>(f->sort.max_dim()) * formula_load(f->lhs);
  default: {
    double d = static_cast<double>(f->sort.max_dim());
    return d * d * formula_load(f->lhs);
  }
  }
}

void add_formula(VerificationReport &rep, std::string const &id, FormulaPtr const &f, CheckOptions const &opt)
{
  double load = formula_load(f);
  if (load > static_cast<double>(opt.formula_limit)) {
    std::ostringstream os;
    os << "formula path skipped: context atom dimension " << load << " exceeds " << opt.formula_limit;
    rep.add_skipped(id, to_string(f), os.str());
    return;
  }
  InterpretStats st;
  bool t = truth(f, opt.interp, &st);
  if (st.empty_quantifier) { rep.empty_sort = true; }
  rep.add(id, to_string(f), t ? 0.0 : 1.0, st.empty_quantifier ? "quantifies over an empty quantum set" : "");
}

void add_direct(VerificationReport &rep, std::string const &id, std::string const &text, double margin)
{
  rep.add(id + "/direct", text, margin);
}

void require_endo(Relation const &r, char const *what)
{
  if (!r.dom().compatible(r.cod())) {
    throw Error(ErrorKind::SortMismatch, std::string(what) + ": relation must be an endo relation");
  }
}

TermPtr v(char const *n) { return var(n); }

double opnorm(CMatrix const &m)
{
  if (m.size() == 0) { return 0.0; }
  Eigen::JacobiSVD<CMatrix> svd(m);
  return svd.singularValues()(0);
}

FormulaPtr reflexive_formula(RelPtr const &rb, QuantumSet const &x)
{
  return forall_diag("x", "x*", x, atomic(rb, {v("x"), v("x*")}));
}

FormulaPtr symmetric_formula(RelPtr const &rb, QuantumSet const &x)
{
  return forall_diag("x1", "x1*", x,
                     forall_diag("x2", "x2*", x,
                                 f_implies(atomic(rb, {v("x1"), v("x2*")}), atomic(rb, {v("x2"), v("x1*")}))));
}

FormulaPtr transitive_formula(RelPtr const &rb, QuantumSet const &x)
{
  auto body = f_implies(f_and(atomic(rb, {v("x1"), v("x2*")}), atomic(rb, {v("x2"), v("x3*")})),
                        atomic(rb, {v("x1*"), v("x3")}, true));
  return forall_diag("x1", "x1*", x, forall_diag("x2", "x2*", x, forall_diag("x3", "x3*", x, body)));
}

void preorder_conditions(VerificationReport &rep, Relation const &r, CheckOptions const &opt)
{
  QuantumSet const &x = r.dom();
  auto rb = make_rel("R", bend(r), {x, dual(x)});
  add_formula(rep, "ThmB.3(1)", reflexive_formula(rb, x), opt);
  add_direct(rep, "ThmB.3(1)", "I <= R", leq_margin(identity(x), r));
  add_formula(rep, "ThmB.3(2)", transitive_formula(rb, x), opt);
  add_direct(rep, "ThmB.3(2)", "R . R <= R", leq_margin(compose(r, r), r));
}

} // namespace

Subspace projection_predicate(CMatrix const &p)
{
  // L(H, C)·p: row vectors w p, i.e. the columns of pᵀ.
  return Subspace::from_vectors(1, p.rows(), CMatrix(p.transpose()));
}

VerificationReport check_graph(Relation const &r, CheckOptions const &opt)
{
  require_endo(r, "graph");
  VerificationReport rep;
  rep.kind = "graph";
  QuantumSet const &x = r.dom();
  auto rb = make_rel("R", bend(r), {x, dual(x)});
  add_formula(rep, "ThmA.5(1)", reflexive_formula(rb, x), opt);
  add_direct(rep, "ThmA.5(1)", "I <= R", leq_margin(identity(x), r));
  add_formula(rep, "ThmA.5(2)", symmetric_formula(rb, x), opt);
  add_direct(rep, "ThmA.5(2)", "R <= R^dagger", leq_margin(r, dagger(r)));
  return rep;
}

VerificationReport check_preorder(Relation const &r, CheckOptions const &opt)
{
  require_endo(r, "preorder");
  VerificationReport rep;
  rep.kind = "preorder";
  preorder_conditions(rep, r, opt);
  return rep;
}

VerificationReport check_poset(Relation const &r, PosetMode mode, CheckOptions const &opt)
{
  require_endo(r, "poset");
  QuantumSet const &x = r.dom();
  if (mode == PosetMode::Nilpotent && x.size() != 1) {
    throw Error(ErrorKind::ModeRequiresSingleAtom, "nilpotent poset mode requires a single-atom quantum set");
  }
  VerificationReport rep;
  rep.kind = mode == PosetMode::Weaver ? "poset-weaver" : "poset-nilpotent";
  preorder_conditions(rep, r, opt);
  auto rb = make_rel("R", bend(r), {x, dual(x)});
  auto ex = equality_symbol(x);
  auto a = atomic(rb, {v("x1"), v("x2*")});
  auto b = atomic(rb, {v("x2*"), v("x1")}, true);
  auto e = atomic(ex, {v("x1"), v("x2*")});
  Relation id = identity(x);
  if (mode == PosetMode::Weaver) {
    auto f = forall("x1", x, forall("x2*", dual(x), f_implies(f_and(a, b), e)));
    add_formula(rep, "CorC.2(3)", f, opt);
    add_direct(rep, "CorC.2(3)", "R meet R^dagger <= I", leq_margin(meet(r, dagger(r)), id));
  } else {
    // Sasaki projection a & b written as not (b -> not a)
    auto f = forall("x1", x, forall("x2*", dual(x), f_implies(f_not(f_implies(b, f_not(a))), e)));
    add_formula(rep, "ThmC.4(3)", f, opt);
    add_direct(rep, "ThmC.4(3)", "R & R^dagger <= I", leq_margin(sasaki_and(r, dagger(r)), id));
    Relation s = meet(r, negate(id));
    rep.add("LemC.3(S_perp_I)", "S = R meet not I;  S perp I", orth_margin(s, id));
    rep.add("LemC.3(SS_le_S)", "S . S <= S", leq_margin(compose(s, s), s));
  }
  return rep;
}

VerificationReport check_function(Relation const &f, FunctionMode mode, CheckOptions const &opt)
{
  VerificationReport rep;
  rep.kind = mode == FunctionMode::Function ? "function" : mode == FunctionMode::Injective ? "injective" : "surjective";
  QuantumSet const &x = f.dom(), &y = f.cod();
  auto fb = make_rel("F", bend(f), {x, dual(y)});
  auto ey = equality_symbol(y);
  auto f1 = forall("x", x, exists("y*", dual(y), atomic(fb, {v("x"), v("y*")})));
  add_formula(rep, "PropD.1(1)", f1, opt);
  add_direct(rep, "PropD.1(1)", "T_Y . F = T_X", leq_margin(top(x, one()), compose(top(y, one()), f)));
  auto body = f_implies(f_and(atomic(fb, {v("x"), v("y1*")}), atomic(fb, {v("x*"), v("y2")}, true)),
                        atomic(ey, {v("y1"), v("y2*")}));
  auto f2 = forall_diag("x", "x*", x, forall_diag("y1", "y1*", y, forall_diag("y2", "y2*", y, body)));
  add_formula(rep, "PropD.1(2)", f2, opt);
  add_direct(rep, "PropD.1(2)", "F . F^dagger <= I", leq_margin(compose(f, dagger(f)), identity(y)));
  // with (2), condition (1) is equivalent to this
  rep.add("PropD.1(FdagF>=I)", "I <= F^dagger . F", leq_margin(identity(x), compose(dagger(f), f)));
  auto fs = make_fn("F", f, {x}, y);
  if (mode == FunctionMode::Injective) {
    auto ex = equality_symbol(x);
    auto f3 = forall("x", x, forall("x*", dual(x), f_implies(atomic(ey, {app(fs, {v("x")}), conj(app(fs, {v("x*")}))}),
                                                             atomic(ex, {v("x"), v("x*")}))));
    add_formula(rep, "PropD.2(3)", f3, opt);
    add_direct(rep, "PropD.2(3)", "F^dagger . F <= I", leq_margin(compose(dagger(f), f), identity(x)));
  }
  if (mode == FunctionMode::Surjective) {
    auto f4 = forall("y*", dual(y), exists("x", x, atomic(ey, {app(fs, {v("x")}), v("y*")})));
    add_formula(rep, "PropD.3(4)", f4, opt);
    add_direct(rep, "PropD.3(4)", "T_X . F^dagger = T_Y", leq_margin(top(y, one()), compose(top(x, one()), dagger(f))));
    rep.add("PropD.3(FFdag=I)", "F . F^dagger = I", distance(compose(f, dagger(f)), identity(y)));
  }
  return rep;
}

void validate(MetricFamily const &m)
{
  if (m.values.size() != m.relations.size() || m.values.empty()) {
    throw Error(ErrorKind::FamilyInvariantViolation, "metric family: one relation per value required");
  }
  for (size_t k = 0; k < m.values.size(); ++k) {
    if (m.values[k] < 0 || std::isnan(m.values[k]) || (k > 0 && !(m.values[k] > m.values[k - 1]))) {
      throw Error(ErrorKind::FamilyInvariantViolation, "metric family: values must be increasing and nonnegative");
    }
    if (!m.relations[k].dom().compatible(m.base) || !m.relations[k].cod().compatible(m.base)) {
      throw Error(ErrorKind::FamilyInvariantViolation, "metric family: relations must be endo relations on the base");
    }
  }
  for (size_t i = 0; i < m.relations.size(); ++i) {
    for (size_t j = i + 1; j < m.relations.size(); ++j) {
      if (!perp(m.relations[i], m.relations[j])) {
        throw Error(ErrorKind::FamilyInvariantViolation, "metric family: relations are not pairwise orthogonal");
      }
    }
  }
  Relation all = bottom(m.base, m.base);
  for (auto const &r : m.relations) { all = join(all, r); }
  if (!equal(all, top(m.base, m.base))) {
    throw Error(ErrorKind::FamilyInvariantViolation, "metric family: relations do not join to the top relation");
  }
}

namespace {

std::string value_label(double v)
{
  if (std::isinf(v)) { return "inf"; }
  std::ostringstream os;
  os << v;
  return os.str();
}

} // namespace

VerificationReport check_metric(MetricFamily const &m, MetricMode mode, CheckOptions const &opt)
{
  validate(m);
  VerificationReport rep;
  rep.kind = mode == MetricMode::Metric ? "metric" : "pseudometric";
  QuantumSet const &x = m.base;
  size_t const n = m.values.size();
  Relation id = identity(x);

  // direct conditions (a)–(e)
  double ma = 0.0;
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) { ma = std::max(ma, orth_margin(m.relations[i], m.relations[j])); }
  }
  rep.add("ThmF.5(a)", "R_a perp R_b for a != b", ma);
  Relation all = bottom(x, x);
  for (auto const &r : m.relations) { all = join(all, r); }
  rep.add("ThmF.5(b)", "join of R_a = T", leq_margin(top(x, x), all));
  Relation r0 = m.values.front() == 0.0 ? m.relations.front() : bottom(x, x);
  double mc = leq_margin(id, r0);
  double md = 0.0;
  for (auto const &r : m.relations) { md = std::max(md, distance(r, dagger(r))); }
  double me = 0.0;
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) {
      double s = m.values[i] + m.values[j];
      Relation bound = bottom(x, x);
      for (size_t k = 0; k < n; ++k) {
        if (m.values[k] <= s) { bound = join(bound, m.relations[k]); }
      }
      me = std::max(me, leq_margin(compose(m.relations[j], m.relations[i]), bound));
    }
  }

  // formula path through F : X × X* → `A
  std::vector<double> vals = m.values;
  if (std::find(vals.begin(), vals.end(), 0.0) == vals.end()) { vals.insert(vals.begin(), 0.0); }
  std::vector<std::string> labels;
  for (double val : vals) { labels.push_back(value_label(val)); }
  QuantumSet a = QuantumSet::classical("Dist", labels);
  QuantumSet as = dual(a);
  QuantumSet xx = QuantumSet::product(x, dual(x));
  size_t const na = vals.size();
  auto slot = [&](double val) { return static_cast<size_t>(std::find(vals.begin(), vals.end(), val) - vals.begin()); };
  Relation fr(xx, a);
  for (size_t k = 0; k < n; ++k) {
    Relation b = bend(m.relations[k]);
    for (auto const &[key, blk] : b.blocks()) { fr.set_block(key.first, slot(m.values[k]), blk); }
  }
  auto fsym = make_fn("F", fr, {x, dual(x)}, a);
  Relation zero(one(), a);
  zero.set_block(0, slot(0.0), Subspace::full(1, 1));
  auto zsym = make_fn("zero", zero, {}, a);
  Relation ca(a, as);
  for (size_t k = 0; k < na; ++k) { ca.set_block(k, k, Subspace::full(1, 1)); }
  auto csym = make_fn("C", ca, {a}, as);
  Relation le(a, a);
  for (size_t i = 0; i < na; ++i) {
    for (size_t j = 0; j < na; ++j) {
      if (vals[i] <= vals[j]) { le.set_block(i, j, Subspace::full(1, 1)); }
    }
  }
  auto tsym = make_rel("T", bend(le), {a, as});
  // sums are rounded down into the value set; d ≤ s ⟺ d ≤ round_down(s) for d in the set
  Relation plus(QuantumSet::product(a, a), a);
  for (size_t i = 0; i < na; ++i) {
    for (size_t j = 0; j < na; ++j) {
      double s = vals[i] + vals[j];
      size_t k = 0;
      for (size_t t = 0; t < na; ++t) {
        if (vals[t] <= s) { k = t; }
      }
      plus.set_block(i * na + j, k, Subspace::full(1, 1));
    }
  }
  auto psym = make_fn("plus", plus, {a, a}, a);
  auto ea = equality_symbol(a);
  auto ex = equality_symbol(x);
  auto F = [&](char const *p, char const *q) { return app(fsym, {v(p), v(q)}); };

  auto f1 = forall_diag("x1", "x1*", x, atomic(ea, {F("x1", "x1*"), conj(app(zsym, {}))}));
  add_formula(rep, "ThmF.5(1)", f1, opt);
  rep.add("ThmF.5(c)", "R_0 >= I", mc);
  auto f2 = forall_diag("x1", "x1*", x,
                        forall_diag("x2", "x2*", x, atomic(ea, {F("x1", "x2*"), app(csym, {F("x2", "x1*")})})));
  add_formula(rep, "ThmF.5(2)", f2, opt);
  rep.add("ThmF.5(d)", "R_a^dagger = R_a", md);
  auto f3 = forall_diag(
      "x1", "x1*", x,
      forall_diag("x2", "x2*", x,
                  forall_diag("x3", "x3*", x,
                              atomic(tsym, {F("x1", "x2*"), conj(app(psym, {F("x1*", "x3"), F("x3*", "x2")}))}))));
  add_formula(rep, "ThmF.5(3)", f3, opt);
  rep.add("ThmF.5(e)", "R_b . R_a <= join of R_c for c <= a + b", me);
  if (mode == MetricMode::Metric) {
    auto f4 = forall("x1", x, forall("x2*", dual(x), f_implies(atomic(ea, {F("x1", "x2*"), conj(app(zsym, {}))}),
                                                                atomic(ex, {v("x1"), v("x2*")}))));
    add_formula(rep, "CorF.6(4)", f4, opt);
    add_direct(rep, "CorF.6(4)", "R_0 <= I", leq_margin(r0, id));
  }
  return rep;
}

void validate(ProjectionFamily const &p)
{
  double const tol = tolerances().cmp;
  if (p.p.size() != p.row_labels.size()) { throw Error(ErrorKind::NotProjections, "family: row count mismatch"); }
  for (auto const &row : p.p) {
    if (row.size() != p.col_labels.size()) { throw Error(ErrorKind::NotProjections, "family: column count mismatch"); }
    for (auto const &m : row) {
      if (m.rows() != p.hilbert_dim || m.cols() != p.hilbert_dim) {
        throw Error(ErrorKind::NotProjections, "family: matrix of wrong size");
      }
      if ((m * m - m).norm() > tol * std::max(1.0, m.norm()) || (m - m.adjoint()).norm() > tol) {
        throw Error(ErrorKind::NotProjections, "family: entry is not an orthogonal projection");
      }
    }
  }
}

Relation family_function(ProjectionFamily const &p, QuantumSet const &x, QuantumSet const &a, QuantumSet const &b)
{
  Relation f(QuantumSet::product(x, a), b);
  for (size_t i = 0; i < p.p.size(); ++i) {
    for (size_t j = 0; j < p.p[i].size(); ++j) { f.set_block(i, j, projection_predicate(p.p[i][j])); }
  }
  return f;
}

Relation graph_relation(ClassicalGraph const &g, QuantumSet const &v)
{
  Relation r(v, v);
  for (size_t i = 0; i < g.adj.size(); ++i) {
    for (size_t j = 0; j < g.adj[i].size(); ++j) {
      if (g.adj[i][j]) { r.set_block(i, j, Subspace::full(1, 1)); }
    }
  }
  return r;
}

namespace {

struct GameSetup
{
  QuantumSet x, a, b;
  FnPtr f;
};

GameSetup game_setup(ProjectionFamily const &p)
{
  GameSetup s;
  s.x = QuantumSet::atoms("H", {p.hilbert_dim});
  s.a = QuantumSet::classical("A", p.row_labels);
  s.b = QuantumSet::classical("B", p.col_labels);
  s.f = make_fn("F", family_function(p, s.x, s.a, s.b), {s.x, s.a}, s.b);
  return s;
}

double row_sum_margin(ProjectionFamily const &p)
{
  double m = 0.0;
  CMatrix id = CMatrix::Identity(p.hilbert_dim, p.hilbert_dim);
  for (auto const &row : p.p) {
    CMatrix s = CMatrix::Zero(p.hilbert_dim, p.hilbert_dim);
    for (auto const &q : row) { s += q; }
    m = std::max(m, opnorm(id - s));
  }
  return m;
}

double col_sum_margin(ProjectionFamily const &p)
{
  double m = 0.0;
  CMatrix id = CMatrix::Identity(p.hilbert_dim, p.hilbert_dim);
  for (size_t j = 0; j < p.col_labels.size(); ++j) {
    CMatrix s = CMatrix::Zero(p.hilbert_dim, p.hilbert_dim);
    for (auto const &row : p.p) { s += row[j]; }
    m = std::max(m, opnorm(id - s));
  }
  return m;
}

// max ‖p_{a1 b1} p_{a2 b2}‖ over (a1,a2) ∈ r and (b1,b2) ∉ s.
double orth_pairs(ProjectionFamily const &p, std::vector<std::vector<bool>> const &r,
                  std::vector<std::vector<bool>> const &s)
{
  double m = 0.0;
  size_t const na = p.row_labels.size(), nb = p.col_labels.size();
  for (size_t a1 = 0; a1 < na; ++a1) {
    for (size_t a2 = 0; a2 < na; ++a2) {
      if (!r[a1][a2]) { continue; }
      for (size_t b1 = 0; b1 < nb; ++b1) {
        for (size_t b2 = 0; b2 < nb; ++b2) {
          if (!s[b1][b2]) { m = std::max(m, opnorm(p.p[a1][b1] * p.p[a2][b2])); }
        }
      }
    }
  }
  return m;
}

std::vector<std::vector<bool>> eq_table(size_t n)
{
  std::vector<std::vector<bool>> t(n, std::vector<bool>(n, false));
  for (size_t i = 0; i < n; ++i) { t[i][i] = true; }
  return t;
}

std::vector<std::vector<bool>> negate_table(std::vector<std::vector<bool>> t)
{
  for (auto &row : t) {
    for (size_t k = 0; k < row.size(); ++k) { row[k] = !row[k]; }
  }
  return t;
}

// ↔ between relation r on A and s on B: orthogonality for (r, ¬s) and (¬r, s).
double iff_pairs(ProjectionFamily const &p, std::vector<std::vector<bool>> const &r,
                 std::vector<std::vector<bool>> const &s)
{
  return std::max(orth_pairs(p, r, s), orth_pairs(p, negate_table(r), negate_table(s)));
}

double join_cover_margin(ProjectionFamily const &p)
{
  // ⋁_a p_ab = 1 for every b
  double m = 0.0;
  for (size_t j = 0; j < p.col_labels.size(); ++j) {
    Subspace acc = Subspace::zero(1, p.hilbert_dim);
    for (auto const &row : p.p) { acc = join(acc, projection_predicate(row[j])); }
    m = std::max(m, leq_margin(Subspace::full(1, p.hilbert_dim), acc));
  }
  return m;
}

void require_labels(ProjectionFamily const &p, ClassicalGraph const &ga, ClassicalGraph const &gb)
{
  if (ga.labels != p.row_labels || gb.labels != p.col_labels) {
    throw Error(ErrorKind::LabelMismatch, "projection family labels do not match the graphs");
  }
  auto square = [](ClassicalGraph const &g) {
    if (g.adj.size() != g.labels.size()) { return false; }
    return std::all_of(g.adj.begin(), g.adj.end(), [&](auto const &row) { return row.size() == g.labels.size(); });
  };
  if (!square(ga) || !square(gb)) { throw Error(ErrorKind::LabelMismatch, "graph adjacency has the wrong size"); }
}

// (∀(x=x*))(∀(a1=a1*))(∀(a2=a2*)) (R(a1,a2*) op S_*(F_*(x*,a1*), F(x,a2)))
FormulaPtr game_formula(GameSetup const &g, RelPtr const &r, RelPtr const &s, bool iff)
{
  auto lhs = atomic(r, {v("a1"), v("a2*")});
  auto rhs = atomic(s, {conj(app(g.f, {v("x*"), v("a1*")})), app(g.f, {v("x"), v("a2")})}, true);
  auto body = iff ? f_iff(lhs, rhs) : f_implies(lhs, rhs);
  return forall_diag("x", "x*", g.x, forall_diag("a1", "a1*", g.a, forall_diag("a2", "a2*", g.a, body)));
}

FormulaPtr cover_formula(GameSetup const &g)
{
  auto eb = equality_symbol(g.b);
  return forall("x", g.x,
                forall("b*", dual(g.b), exists("a", g.a, atomic(eb, {app(g.f, {v("x"), v("a")}), v("b*")}))));
}

// The formula readings assume the family defines a function X × `A → `B.
void note_not_function(VerificationReport &rep, size_t from)
{
  for (size_t k = from; k < rep.conditions.size(); ++k) {
    auto &n = rep.conditions[k].note;
    n += n.empty() ? "" : "; ";
    n += "rows do not sum to 1, so F is not a function and the two readings may differ";
  }
}

} // namespace

VerificationReport check_magic_unitary(ProjectionFamily const &p, CheckOptions const &opt)
{
  validate(p);
  VerificationReport rep;
  rep.kind = "magic-unitary";
  rep.add("DefG.6(1)", "sum_b p_ab = 1 for all a", row_sum_margin(p));
  rep.add("DefG.6(2)", "sum_a p_ab = 1 for all b", col_sum_margin(p));
  auto g = game_setup(p);
  size_t const before = rep.conditions.size();
  add_formula(rep, "CorG.7(1)", cover_formula(g), opt);
  add_direct(rep, "CorG.7(1)", "join_a p_ab = 1 for all b", join_cover_margin(p));
  auto f2 = game_formula(g, equality_symbol(g.a), equality_symbol(g.b), true);
  add_formula(rep, "CorG.7(2)", f2, opt);
  add_direct(rep, "CorG.7(2)", "p_a1b1 perp p_a2b2 when (a1 = a2) xor (b1 = b2)",
             iff_pairs(p, eq_table(p.row_labels.size()), eq_table(p.col_labels.size())));
  if (!rep.conditions[0].passed) { note_not_function(rep, before); }
  return rep;
}

VerificationReport check_hom_witness(ProjectionFamily const &p, ClassicalGraph const &ga, ClassicalGraph const &gb,
                                     CheckOptions const &opt)
{
  require_labels(p, ga, gb);
  validate(p);
  VerificationReport rep;
  rep.kind = "hom-witness";
  size_t const na = p.row_labels.size(), nb = p.col_labels.size();
  rep.add("DefG.4(1)", "sum_b p_ab = 1 for all a", row_sum_margin(p));
  double m2 = std::max(orth_pairs(p, eq_table(na), eq_table(nb)), orth_pairs(p, ga.adj, gb.adj));
  rep.add("DefG.4(2)", "p_a1b1 p_a2b2 = 0 when (a1 = a2, b1 != b2) or (a1 ~ a2, b1 !~ b2)", m2);
  auto g = game_setup(p);
  auto r = make_rel("R", bend(graph_relation(ga, g.a)), {g.a, dual(g.a)});
  auto s = make_rel("S", bend(graph_relation(gb, g.b)), {g.b, dual(g.b)});
  size_t const before = rep.conditions.size();
  add_formula(rep, "CorG.5", game_formula(g, r, s, false), opt);
  add_direct(rep, "CorG.5", "p_a1b1 perp p_a2b2 when a1 ~ a2, b1 !~ b2", orth_pairs(p, ga.adj, gb.adj));
  if (!rep.conditions[0].passed) { note_not_function(rep, before); }
  return rep;
}

VerificationReport check_iso_witness(ProjectionFamily const &p, ClassicalGraph const &ga, ClassicalGraph const &gb,
                                     CheckOptions const &opt)
{
  require_labels(p, ga, gb);
  validate(p);
  VerificationReport rep;
  rep.kind = "iso-witness";
  size_t const na = p.row_labels.size(), nb = p.col_labels.size();
  rep.add("DefG.8(1)", "sum_b p_ab = 1 for all a", row_sum_margin(p));
  rep.add("DefG.8(2)", "sum_a p_ab = 1 for all b", col_sum_margin(p));
  rep.add("DefG.8(3)", "A ->q B orthogonality",
          std::max(orth_pairs(p, eq_table(na), eq_table(nb)), orth_pairs(p, ga.adj, gb.adj)));
  ProjectionFamily t;
  t.hilbert_dim = p.hilbert_dim;
  t.row_labels = p.col_labels;
  t.col_labels = p.row_labels;
  t.p.assign(nb, std::vector<CMatrix>(na));
  for (size_t i = 0; i < na; ++i) {
    for (size_t j = 0; j < nb; ++j) { t.p[j][i] = p.p[i][j]; }
  }
  rep.add("DefG.8(4)", "B ->q A orthogonality",
          std::max(orth_pairs(t, eq_table(nb), eq_table(na)), orth_pairs(t, gb.adj, ga.adj)));
  auto g = game_setup(p);
  size_t const before = rep.conditions.size();
  add_formula(rep, "CorG.9(1)", cover_formula(g), opt);
  add_direct(rep, "CorG.9(1)", "join_a p_ab = 1 for all b", join_cover_margin(p));
  add_formula(rep, "CorG.9(2)", game_formula(g, equality_symbol(g.a), equality_symbol(g.b), true), opt);
  add_direct(rep, "CorG.9(2)", "p_a1b1 perp p_a2b2 when (a1 = a2) xor (b1 = b2)",
             iff_pairs(p, eq_table(na), eq_table(nb)));
  auto r = make_rel("R", bend(graph_relation(ga, g.a)), {g.a, dual(g.a)});
  auto s = make_rel("S", bend(graph_relation(gb, g.b)), {g.b, dual(g.b)});
  add_formula(rep, "CorG.9(3)", game_formula(g, r, s, true), opt);
  add_direct(rep, "CorG.9(3)", "p_a1b1 perp p_a2b2 when (a1 ~ a2) xor (b1 ~ b2)", iff_pairs(p, ga.adj, gb.adj));
  if (!rep.conditions[0].passed) { note_not_function(rep, before); }
  return rep;
}

VerificationReport check_quantum_group(Relation const &f, Relation const &c, CheckOptions const &opt)
{
  QuantumSet const &x = f.cod();
  if (!f.dom().compatible(QuantumSet::product(x, x)) || !c.dom().compatible(one()) || !c.cod().compatible(x)) {
    throw Error(ErrorKind::SortMismatch, "quantum group: expected F : X x X -> X and C : 1 -> X");
  }
  for (auto const *r : {&f, &c}) {
    auto fr = check_function(*r, FunctionMode::Function, CheckOptions{0, opt.interp});
    if (!fr.passed) { throw Error(ErrorKind::NotAFunction, "quantum group: multiplication or unit is not a function"); }
  }
  VerificationReport rep;
  rep.kind = "quantum-group";
  auto fs = make_fn("F", f, {x, x}, x);
  auto cs = make_fn("C", c, {}, x);
  auto ex = equality_symbol(x);
  auto C = [&] { return app(cs, {}); };
  auto f1 = forall_diag(
      "x1", "x1*", x,
      forall_diag("x2", "x2*", x,
                  forall_diag("x3", "x3*", x,
                              atomic(ex, {app(fs, {app(fs, {v("x1"), v("x2")}), v("x3")}),
                                          conj(app(fs, {v("x1*"), app(fs, {v("x2*"), v("x3*")})}))}))));
  Relation id = identity(x);
  add_formula(rep, "CorH.6(1)", f1, opt);
  add_direct(rep, "CorH.6(1)", "F . (F x I) = F . (I x F)",
             distance(compose(f, cross(f, id)), compose(f, cross(id, f)).relabel(QuantumSet::product(QuantumSet::product(x, x), x), x)));
  auto f2 = forall_diag("x", "x*", x, atomic(ex, {app(fs, {v("x"), C()}), v("x*")}));
  add_formula(rep, "CorH.6(2)", f2, opt);
  add_direct(rep, "CorH.6(2)", "F . (I x C) = I", distance(compose(f, cross(id, c)).relabel(x, x), id));
  auto f3 = forall_diag("x", "x*", x, atomic(ex, {app(fs, {C(), v("x")}), v("x*")}));
  add_formula(rep, "CorH.6(3)", f3, opt);
  add_direct(rep, "CorH.6(3)", "F . (C x I) = I", distance(compose(f, cross(c, id)).relabel(x, x), id));
  auto f4 = forall("x1", x, exists("x2", x, atomic(ex, {app(fs, {v("x1"), v("x2")}), conj(C())})));
  add_formula(rep, "CorH.6(4)", f4, opt);
  Relation p = compose(dagger(c), f); // [x1, x2 | E(F(x1,x2), C*)]
  Relation tdag = dagger(top(x, one()));
  add_direct(rep, "CorH.6(4)", "C^dagger . F . (I x T^dagger) = T",
             leq_margin(top(x, one()), compose(p, cross(id, tdag)).relabel(x, one())));
  auto f5 = forall("x2", x, exists("x1", x, atomic(ex, {app(fs, {v("x1"), v("x2")}), conj(C())})));
  add_formula(rep, "CorH.6(5)", f5, opt);
  add_direct(rep, "CorH.6(5)", "C^dagger . F . (T^dagger x I) = T",
             leq_margin(top(x, one()), compose(p, cross(tdag, id)).relabel(x, one())));
  return rep;
}

} // namespace qrel
