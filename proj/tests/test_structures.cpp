#include <doctest.h>

#include "oracles.hpp"
#include "qrel/structures.hpp"

using namespace qrel;
using oracle::unit;

namespace {

CMatrix pauli_x()
{
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 1) = m(1, 0) = 1.0;
  return m;
}

Relation single(std::vector<CMatrix> const &ms, Index d = 2)
{
  auto x = QuantumSet::atoms("X", {d});
  Relation r(x, x);
  r.set_block(0, 0, span<Cx>(ms, d, d));
  return r;
}

CMatrix eye(Index d) { return CMatrix::Identity(d, d); }

bool passed(VerificationReport const &rep, std::string const &id)
{
  auto const *c = rep.find(id);
  REQUIRE_MESSAGE(c, id);
  return c->passed;
}

// Every id with a /direct twin agrees with it unless the formula path was skipped.
void check_agreement(VerificationReport const &rep)
{
  for (auto const &c : rep.conditions) {
    auto const *d = rep.find(c.id + "/direct");
    if (!d || c.skipped) { continue; }
    CHECK_MESSAGE(c.passed == d->passed, rep.kind << " " << c.id << " formula=" << c.passed << " direct=" << d->passed);
  }
  // metric formulas (1)–(3) against the relation conditions (c)–(e)
  for (auto [f, d] : {std::pair{"ThmF.5(1)", "ThmF.5(c)"}, {"ThmF.5(2)", "ThmF.5(d)"}, {"ThmF.5(3)", "ThmF.5(e)"}}) {
    auto const *cf = rep.find(f);
    auto const *cd = rep.find(d);
    if (!cf || !cd || cf->skipped) { continue; }
    CHECK_MESSAGE(cf->passed == cd->passed, rep.kind << " " << f << " formula=" << cf->passed << " direct=" << cd->passed);
  }
}

Relation lift_table(QuantumSet const &x, QuantumSet const &y, std::vector<int> const &f)
{
  Relation r(x, y);
  for (size_t i = 0; i < f.size(); ++i) { r.set_block(i, f[i], Subspace::full(1, 1)); }
  return r;
}

Relation closure(Relation r)
{
  for (int k = 0; k < 8; ++k) {
    Relation n = join(r, compose(r, r));
    if (equal(n, r)) { break; }
    r = n;
  }
  return r;
}

CMatrix proj(CVector v)
{
  v.normalize();
  return v * v.adjoint();
}

ClassicalGraph graph(std::vector<std::string> labels, std::vector<std::pair<int, int>> const &edges)
{
  ClassicalGraph g;
  g.labels = std::move(labels);
  g.adj.assign(g.labels.size(), std::vector<bool>(g.labels.size(), false));
  for (auto [a, b] : edges) { g.adj[a][b] = g.adj[b][a] = true; }
  return g;
}

ProjectionFamily classical_family(std::vector<std::string> const &rows, std::vector<std::string> const &cols,
                                  std::vector<int> const &f)
{
  ProjectionFamily p;
  p.hilbert_dim = 1;
  p.row_labels = rows;
  p.col_labels = cols;
  p.p.assign(rows.size(), std::vector<CMatrix>(cols.size(), CMatrix::Zero(1, 1)));
  for (size_t a = 0; a < f.size(); ++a) { p.p[a][f[a]](0, 0) = 1.0; }
  return p;
}

ProjectionFamily plus_family()
{
  CVector v(2);
  v << 1.0, 1.0;
  CMatrix p = proj(v);
  ProjectionFamily f;
  f.hilbert_dim = 2;
  f.row_labels = {"0", "1"};
  f.col_labels = {"0", "1"};
  f.p = {{p, eye(2) - p}, {eye(2) - p, p}};
  return f;
}

} // namespace

TEST_CASE("graph examples")
{
  auto os = check_graph(single({eye(2), pauli_x()}));
  CHECK(os.passed);
  CHECK(os.conditions.size() == 4);
  check_agreement(os);
  auto e12 = check_graph(single({unit(2, 2, 0, 1)}));
  CHECK_FALSE(e12.passed);
  CHECK_FALSE(passed(e12, "ThmA.5(1)"));
  CHECK_FALSE(passed(e12, "ThmA.5(1)/direct"));
  CHECK(e12.find("ThmA.5(1)/direct")->margin > 0.1);
  check_agreement(e12);
  // path graph on 3 vertices with loops
  auto v = QuantumSet::classical("V", {"a", "b", "c"});
  Relation g = identity(v);
  g.set_block(0, 1, Subspace::full(1, 1));
  g.set_block(1, 0, Subspace::full(1, 1));
  g.set_block(1, 2, Subspace::full(1, 1));
  g.set_block(2, 1, Subspace::full(1, 1));
  CHECK(check_graph(g).passed);
  g.set_block(2, 0, Subspace::full(1, 1));
  auto asym = check_graph(g);
  CHECK(passed(asym, "ThmA.5(1)"));
  CHECK_FALSE(passed(asym, "ThmA.5(2)"));
  check_agreement(asym);
  CHECK_THROWS_AS(check_graph(Relation(v, QuantumSet::classical("W", {"a"}))), Error);
}

TEST_CASE("preorder examples")
{
  auto ut = check_preorder(single({eye(2), unit(2, 2, 0, 1)}));
  CHECK(ut.passed);
  check_agreement(ut);
  auto os = check_preorder(single({eye(2), pauli_x()}));
  CHECK(os.passed);
  check_agreement(os);
  auto bad = check_preorder(single({unit(2, 2, 0, 1)}));
  CHECK_FALSE(passed(bad, "ThmB.3(1)"));
  CHECK(passed(bad, "ThmB.3(2)")); // E12² = 0
  check_agreement(bad);
  // span{1, E12, E21} generates M₂: not transitive
  auto nt = check_preorder(single({eye(2), unit(2, 2, 0, 1), unit(2, 2, 1, 0)}));
  CHECK_FALSE(passed(nt, "ThmB.3(2)"));
  check_agreement(nt);
}

TEST_CASE("poset examples")
{
  Relation ut = single({eye(2), unit(2, 2, 0, 1)});
  auto nil = check_poset(ut, PosetMode::Nilpotent);
  CHECK(nil.passed);
  check_agreement(nil);
  CHECK(passed(nil, "LemC.3(S_perp_I)"));
  CHECK(passed(nil, "LemC.3(SS_le_S)"));
  auto w = check_poset(ut, PosetMode::Weaver);
  CHECK(w.passed);
  check_agreement(w);
  auto diag = check_poset(single({eye(2), unit(2, 2, 0, 0)}), PosetMode::Weaver);
  CHECK_FALSE(passed(diag, "CorC.2(3)"));
  CHECK_FALSE(passed(diag, "CorC.2(3)/direct"));
  check_agreement(diag);
  auto two = QuantumSet::atoms("X", {1, 2});
  CHECK_THROWS_AS(check_poset(identity(two), PosetMode::Nilpotent), Error);
  // the operator system span{1, σx} is symmetric, so it is not antisymmetric
  auto sx = check_poset(single({eye(2), pauli_x()}), PosetMode::Nilpotent);
  CHECK_FALSE(sx.passed);
  check_agreement(sx);
}

TEST_CASE("function examples")
{
  auto x = QuantumSet::atoms("X", {1, 2});
  for (auto mode : {FunctionMode::Function, FunctionMode::Injective, FunctionMode::Surjective}) {
    auto rep = check_function(identity(x), mode);
    CHECK(rep.passed);
    check_agreement(rep);
  }
  auto ab = QuantumSet::classical("A", {"a", "b"});
  auto c = QuantumSet::classical("C", {"c"});
  Relation k = lift_table(ab, c, {0, 0});
  CHECK(check_function(k, FunctionMode::Function).passed);
  auto inj = check_function(k, FunctionMode::Injective);
  CHECK_FALSE(inj.passed);
  CHECK_FALSE(passed(inj, "PropD.2(3)"));
  check_agreement(inj);
  auto sur = check_function(k, FunctionMode::Surjective);
  CHECK(sur.passed);
  check_agreement(sur);

  // span{diag(1,2)}: surjective by composition, but F F† ≥ I fails
  CMatrix a = CMatrix::Zero(2, 2);
  a(0, 0) = 1.0;
  a(1, 1) = 2.0;
  auto cex = check_function(single({a}), FunctionMode::Surjective);
  CHECK(passed(cex, "PropD.3(4)"));
  CHECK(passed(cex, "PropD.3(4)/direct"));
  CHECK_FALSE(passed(cex, "PropD.3(FFdag=I)"));
  CHECK_FALSE(cex.passed);
  check_agreement(cex);
}

TEST_CASE("metric examples")
{
  auto v = QuantumSet::classical("V", {"a", "b", "c"});
  // shortest-path metric on the path a-b-c
  std::vector<std::vector<int>> d = {{0, 1, 2}, {1, 0, 1}, {2, 1, 0}};
  MetricFamily m;
  m.base = v;
  m.values = {0, 1, 2};
  for (int k = 0; k < 3; ++k) {
    Relation r(v, v);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        if (d[i][j] == k) { r.set_block(i, j, Subspace::full(1, 1)); }
      }
    }
    m.relations.push_back(r);
  }
  auto rep = check_metric(m, MetricMode::Metric);
  CHECK(rep.passed);
  check_agreement(rep);
  CHECK(rep.find("ThmF.5(3)") != nullptr);
  CHECK_FALSE(rep.find("ThmF.5(3)")->skipped);

  // d(a,c) = 3 breaks the triangle inequality; with value set {0,1,3}
  m.values = {0, 1, 3};
  auto tri = check_metric(m, MetricMode::Metric);
  CHECK_FALSE(passed(tri, "ThmF.5(e)"));
  CHECK_FALSE(passed(tri, "ThmF.5(3)"));
  CHECK(passed(tri, "ThmF.5(c)"));

  // replacing 2 by ∞ breaks the triangle a-b-c
  m.values = {0, 1, std::numeric_limits<double>::infinity()};
  CHECK_FALSE(passed(check_metric(m, MetricMode::Metric), "ThmF.5(3)"));

  // c infinitely far from the edge a-b
  MetricFamily far;
  far.base = v;
  far.values = {0, 1, std::numeric_limits<double>::infinity()};
  far.relations.assign(3, Relation(v, v));
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      int k = i == j ? 0 : (i < 2 && j < 2) ? 1 : 2;
      far.relations[k].set_block(i, j, Subspace::full(1, 1));
    }
  }
  auto fr = check_metric(far, MetricMode::Metric);
  CHECK(fr.passed);
  check_agreement(fr);

  // pseudometric: a and b at distance zero
  MetricFamily pm;
  pm.base = v;
  pm.values = {0, 1};
  Relation z(v, v), o(v, v);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) { ((i < 2) == (j < 2) ? z : o).set_block(i, j, Subspace::full(1, 1)); }
  }
  pm.relations = {z, o};
  auto ps = check_metric(pm, MetricMode::Pseudometric);
  CHECK(ps.passed);
  check_agreement(ps);
  auto mt = check_metric(pm, MetricMode::Metric);
  CHECK_FALSE(mt.passed);
  CHECK_FALSE(passed(mt, "CorF.6(4)"));
  check_agreement(mt);

  // R₀ = span{1, E11} on M₂ with R₁ its complement: pseudometric but not metric
  MetricFamily q;
  q.values = {0, 1};
  Relation r0 = single({eye(2), unit(2, 2, 0, 0)});
  q.base = r0.dom();
  q.relations = {r0, negate(r0)};
  auto qm = check_metric(q, MetricMode::Metric);
  CHECK(passed(qm, "ThmF.5(c)"));
  CHECK(passed(qm, "ThmF.5(d)"));
  CHECK_FALSE(passed(qm, "CorF.6(4)/direct"));
  check_agreement(qm);

  MetricFamily broken = m;
  broken.relations[1] = broken.relations[0];
  CHECK_THROWS_AS(check_metric(broken, MetricMode::Metric), Error);
  MetricFamily unsorted = m;
  std::swap(unsorted.values[0], unsorted.values[1]);
  CHECK_THROWS_AS(check_metric(unsorted, MetricMode::Metric), Error);
}

TEST_CASE("magic unitary examples")
{
  auto rep = check_magic_unitary(plus_family());
  CHECK(rep.passed);
  check_agreement(rep);
  auto perm = check_magic_unitary(classical_family({"0", "1", "2"}, {"0", "1", "2"}, {2, 0, 1}));
  CHECK(perm.passed);
  check_agreement(perm);

  ProjectionFamily sub = plus_family();
  sub.p[0][1] = CMatrix::Zero(2, 2);
  auto bad = check_magic_unitary(sub);
  CHECK_FALSE(passed(bad, "DefG.6(1)"));
  CHECK(bad.find("DefG.6(1)")->margin == doctest::Approx(1.0));
  CHECK_FALSE(passed(bad, "CorG.7(1)"));
  CHECK(passed(bad, "CorG.7(2)/direct"));
  // F is not a function here, so the readings of (2) are allowed to differ
  CHECK_FALSE(bad.find("CorG.7(2)")->note.empty());

  ProjectionFamily np = plus_family();
  np.p[0][0](0, 1) = 0.7;
  CHECK_THROWS_AS(check_magic_unitary(np), Error);
}

TEST_CASE("hom and iso witnesses")
{
  auto k2 = graph({"u", "v"}, {{0, 1}});
  auto id = classical_family({"u", "v"}, {"u", "v"}, {0, 1});
  auto hom = check_hom_witness(id, k2, k2);
  CHECK(hom.passed);
  check_agreement(hom);
  auto collapse = check_hom_witness(classical_family({"u", "v"}, {"u", "v"}, {0, 0}), k2, k2);
  CHECK(passed(collapse, "DefG.4(1)"));
  CHECK_FALSE(passed(collapse, "DefG.4(2)"));
  CHECK_FALSE(passed(collapse, "CorG.5"));
  check_agreement(collapse);

  auto empty = graph({"0", "1"}, {});
  auto q = check_hom_witness(plus_family(), empty, empty);
  CHECK(q.passed);
  check_agreement(q);
  CHECK_THROWS_AS(check_hom_witness(plus_family(), k2, k2), Error);

  std::vector<std::string> l = {"0", "1", "2", "3"};
  auto c4 = graph(l, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
  auto k4 = graph(l, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}});
  auto ident = check_iso_witness(classical_family(l, l, {0, 1, 2, 3}), c4, c4);
  CHECK(ident.passed);
  check_agreement(ident);
  auto rot = check_iso_witness(classical_family(l, l, {1, 2, 3, 0}), c4, c4);
  CHECK(rot.passed);
  check_agreement(rot);
  auto cross = check_iso_witness(classical_family(l, l, {0, 2, 1, 3}), c4, c4);
  CHECK_FALSE(cross.passed);
  check_agreement(cross);
  auto ck = check_iso_witness(classical_family(l, l, {0, 1, 2, 3}), c4, k4);
  CHECK_FALSE(ck.passed);
  CHECK(passed(ck, "DefG.8(3)"));
  CHECK_FALSE(passed(ck, "DefG.8(4)"));
  CHECK_FALSE(passed(ck, "CorG.9(3)"));
  check_agreement(ck);
  // C₄ to K₄ as a hom passes
  CHECK(check_hom_witness(classical_family(l, l, {0, 1, 2, 3}), c4, k4).passed);
}

TEST_CASE("quantum group of a classical group")
{
  auto z3 = QuantumSet::classical("Z3", {"0", "1", "2"});
  auto zz = QuantumSet::product(z3, z3);
  Relation f(zz, z3);
  for (size_t a = 0; a < 3; ++a) {
    for (size_t b = 0; b < 3; ++b) { f.set_block(a * 3 + b, (a + b) % 3, Subspace::full(1, 1)); }
  }
  Relation c(QuantumSet::unit(), z3);
  c.set_block(0, 0, Subspace::full(1, 1));
  auto rep = check_quantum_group(f, c);
  CHECK(rep.passed);
  check_agreement(rep);
  Relation notf = f;
  notf.set_block(0, 1, Subspace::full(1, 1));
  CHECK_THROWS_AS(check_quantum_group(notf, c), Error);
}

TEST_CASE("random agreement and correspondences")
{
  std::mt19937_64 rng(20261016);
  int graph_pass = 0, graph_fail = 0, pre_pass = 0, pre_fail = 0;
  for (int it = 0; it < 24; ++it) {
    auto x = oracle::random_qset(rng, "X", 2, 2);
    Relation r = oracle::random_relation(rng, x, x, 2);
    if (it % 2 == 0) { r = join(r, dagger(r)); }
    if (it % 3 != 2) { r = join(r, identity(x)); }
    if (it % 4 == 1) { r = closure(r); }
    auto g = check_graph(r);
    check_agreement(g);
    (g.passed ? graph_pass : graph_fail)++;
    auto p = check_preorder(r);
    check_agreement(p);
    (p.passed ? pre_pass : pre_fail)++;
    auto w = check_poset(r, PosetMode::Weaver);
    check_agreement(w);
  }
  CHECK(graph_pass > 0);
  CHECK(graph_fail > 0);
  CHECK(pre_pass > 0);
  CHECK(pre_fail > 0);
}

TEST_CASE("operator system correspondence on M3")
{
  // single atom: passes check_graph ⟺ the block contains 1 and is closed under †
  std::mt19937_64 rng(7);
  int seen_pass = 0, seen_fail = 0;
  for (int it = 0; it < 20; ++it) {
    std::vector<CMatrix> gens;
    int n = 1 + static_cast<int>(rng() % 3);
    for (int k = 0; k < n; ++k) {
      CMatrix a = oracle::random_matrix(rng, 3, 3);
      if (it % 2 == 0) { a = (a + a.adjoint()).eval(); }
      gens.push_back(a);
    }
    if (it % 3 != 0) { gens.push_back(eye(3)); }
    Relation r = single(gens, 3);
    Subspace s = r.block(0, 0);
    bool unital = contains(s, CMatrix(eye(3)));
    bool selfadj = true;
    for (Index k = 0; k < s.rank(); ++k) { selfadj = selfadj && contains(s, CMatrix(s.matrix(k).adjoint())); }
    bool got = check_graph(r, {0, {}}).passed;
    CHECK(got == (unital && selfadj));
    (got ? seen_pass : seen_fail)++;
  }
  CHECK(seen_pass > 0);
  CHECK(seen_fail > 0);
}

TEST_CASE("unital *-algebra correspondence")
{
  // single atom: graph + preorder ⟺ the block is a unital *-subalgebra
  std::mt19937_64 rng(11);
  for (int it = 0; it < 20; ++it) {
    std::vector<CMatrix> gens = {eye(3)};
    CMatrix a = oracle::random_matrix(rng, 3, 3);
    if (it % 4 == 0) { gens.push_back(a + a.adjoint()); }
    else if (it % 4 == 1) {
      // block-diagonal algebra M₁ ⊕ M₂
      gens.push_back(unit(3, 3, 0, 0));
      for (int i = 1; i < 3; ++i) {
        for (int j = 1; j < 3; ++j) { gens.push_back(unit(3, 3, i, j)); }
      }
    }
    else if (it % 4 == 2) { gens.push_back(unit(3, 3, 0, 1)); }
    else { gens.push_back(unit(3, 3, 0, 0)); }
    Relation r = single(gens, 3);
    if (it % 3 == 0) { r = closure(r); }
    Subspace s = r.block(0, 0);
    bool algebra = contains(s, CMatrix(eye(3)));
    for (Index i = 0; i < s.rank(); ++i) {
      algebra = algebra && contains(s, CMatrix(s.matrix(i).adjoint()));
      for (Index j = 0; j < s.rank(); ++j) { algebra = algebra && contains(s, CMatrix(s.matrix(i) * s.matrix(j))); }
    }
    bool both = check_graph(r, {0, {}}).passed && check_preorder(r, {0, {}}).passed;
    CHECK(both == algebra);
  }
}

TEST_CASE("strict-part bijection")
{
  // R ↦ R ∧ ¬I and S ↦ S ∨ I are mutually inverse on nilpotent posets
  std::vector<Relation> rs = {single({eye(2), unit(2, 2, 0, 1)}),
                              single({eye(3), unit(3, 3, 0, 1), unit(3, 3, 1, 2), unit(3, 3, 0, 2)}, 3),
                              single({eye(3), unit(3, 3, 0, 2)}, 3)};
  for (auto const &r : rs) {
    REQUIRE(check_poset(r, PosetMode::Nilpotent, {0, {}}).passed);
    Relation id = identity(r.dom());
    Relation s = meet(r, negate(id));
    CHECK(perp(s, id));
    CHECK(leq(compose(s, s), s));
    CHECK(equal(join(s, id), r));
    CHECK(equal(meet(join(s, id), negate(id)), s));
  }
}
