#include <doctest.h>

#include "oracles.hpp"
#include "qrel/generators.hpp"

using namespace qrel;

namespace {

ClassicalStructure two_point(std::set<std::vector<size_t>> tuples)
{
  ClassicalStructure cs;
  cs.sets.push_back({"A", {"a", "b"}});
  cs.rels.push_back({"r", {"A", "A"}, std::move(tuples)});
  return cs;
}

// ⟨χ, ψ⟩ = (1/|G|) Σ χ(g) conj(ψ(g))
Cx char_product(std::vector<Cx> const &a, std::vector<Cx> const &b)
{
  Cx s = 0;
  for (size_t k = 0; k < a.size(); ++k) { s += a[k] * std::conj(b[k]); }
  return s / static_cast<double>(a.size());
}

std::vector<Cx> character(IrrepData::Irrep const &ir)
{
  std::vector<Cx> c;
  for (auto const &m : ir.rho) { c.push_back(m.trace()); }
  return c;
}

void all_five(DualGroup const &g, bool expect45 = true)
{
  auto rep = check_quantum_group(g.f, g.c);
  for (auto const *id : {"CorH.6(1)", "CorH.6(2)", "CorH.6(3)"}) {
    CHECK_MESSAGE(rep.find(id)->passed, id);
    CHECK_MESSAGE(rep.find(std::string(id) + "/direct")->passed, id);
  }
  for (auto const *id : {"CorH.6(4)", "CorH.6(5)"}) {
    CHECK_MESSAGE(rep.find(id)->passed == expect45, id);
    CHECK_MESSAGE(rep.find(std::string(id) + "/direct")->passed == expect45, id);
  }
}

} // namespace

TEST_CASE("lift")
{
  auto cs = two_point({{0, 1}});
  auto l = lift(cs);
  CHECK(l.rels.at("r")->rel.nonzero_blocks() == 1);
  CHECK(l.rels.at("r")->rel.find(1, 0) != nullptr);
  cs.fns.push_back({"id", {"A"}, "A", {{{0}, 0}, {{1}, 1}}});
  cs.rels.push_back({"none", {"A"}, {}});
  l = lift(cs);
  CHECK(equal(l.fns.at("id")->rel, identity(l.sets.at("A"))));
  CHECK(equal(l.rels.at("none")->rel, bottom(l.sets.at("A"), QuantumSet::unit())));
  CHECK(check_function(l.fns.at("id")->rel, FunctionMode::Function).passed);
  cs.fns.push_back({"partial", {"A"}, "A", {{{0}, 0}}});
  CHECK_THROWS_AS(lift(cs), Error);
}

TEST_CASE("fol_eval examples")
{
  auto cs = two_point({{0, 0}, {1, 0}});
  auto l = lift(cs);
  auto a = l.sets.at("A");
  auto r = l.rels.at("r");
  auto f = forall("x", a, exists("y", a, atomic(r, {var("x"), var("y")})));
  CHECK(fol_eval(cs, f));
  CHECK(truth(f));
  auto g = exists("x", a, atomic(r, {var("x"), var("x")}));
  cs = two_point({{0, 1}});
  CHECK_FALSE(fol_eval(cs, g));
  auto q = QuantumSet::atoms("Q", {2});
  CHECK_THROWS_AS(fol_eval(cs, forall("x", q, f_true())), Error);
}

TEST_CASE("classical soundness")
{
  std::mt19937_64 rng(4242);
  int trues = 0, n = 0;
  for (int it = 0; it < 150; ++it) {
    auto cs = random_classical_structure(rng);
    auto l = lift(cs);
    auto f = random_sentence(rng, cs, l, 1 + it % 4);
    REQUIRE(nondup_check(f).ok);
    REQUIRE(free_vars(f).empty());
    bool expect = fol_eval(cs, f);
    bool got = truth(f);
    CHECK_MESSAGE(got == expect, to_string(f));
    trues += expect;
    ++n;
  }
  CHECK(trues > 10);
  CHECK(n - trues > 10);
}

TEST_CASE("pauli counting")
{
  // 3^k C(n,k) strings of weight k
  CHECK(pauli_strings(2, 1).size() == 6);
  CHECK(pauli_strings(3, 2).size() == 27);
  auto h1 = quantum_hamming(1);
  CHECK(h1.relations[0].block(0, 0).rank() == 1);
  CHECK(h1.relations[1].block(0, 0).rank() == 3);
  auto h2 = quantum_hamming(2);
  CHECK(h2.relations[1].block(0, 0).rank() == 6);
  CHECK(join(h2.relations[0], h2.relations[1]).block(0, 0).rank() == 7);
  auto h3 = quantum_hamming(3);
  CHECK(h3.relations[1].block(0, 0).rank() == 9);
  CHECK_THROWS_AS(quantum_hamming(5), Error);
}

TEST_CASE("hamming is a metric")
{
  for (int n : {1, 2}) {
    auto m = quantum_hamming(n);
    auto rep = check_metric(m, MetricMode::Metric);
    CHECK(rep.passed);
    for (auto const &r : m.relations) { CHECK(equal(r, dagger(r))); }
  }
}

TEST_CASE("irrep data")
{
  auto s3 = s3_irreps();
  CHECK_NOTHROW(validate(s3));
  auto bad = s3;
  bad.irreps[2].rho[1] = bad.irreps[2].rho[3];
  CHECK_THROWS_AS(validate(bad), Error);
  auto missing = s3;
  missing.irreps.pop_back();
  CHECK_THROWS_AS(validate(missing), Error);
  CHECK_NOTHROW(validate(cyclic_irreps(5)));
}

TEST_CASE("dual groups")
{
  for (int n : {2, 3}) {
    auto d = dual_group(cyclic_irreps(n));
    // the character group of ℤₙ is ℤₙ: χᵢχⱼ = χᵢ₊ⱼ
    std::vector<std::vector<size_t>> table(n, std::vector<size_t>(n));
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) { table[i][j] = static_cast<size_t>((i + j) % n); }
    }
    auto l = lift_monoid("Z", table, 0);
    CHECK(equal(d.f.relabel(l.f.dom(), l.f.cod()), l.f));
    CHECK(equal(d.c.relabel(l.c.dom(), l.c.cod()), l.c));
    all_five(d);
  }
  auto s3 = s3_irreps();
  auto d = dual_group(s3);
  // Hom(std ⊗ std → triv): multiplicity ⟨χ_std², χ_triv⟩
  auto cs = character(s3.irreps[2]);
  std::vector<Cx> sq;
  for (auto c : cs) { sq.push_back(c * c); }
  Cx mult = char_product(sq, character(s3.irreps[0]));
  CHECK(mult.real() == doctest::Approx(1.0));
  CHECK(d.f.block(2 * 3 + 2, 0).rank() == 1);
  CHECK(d.f.block(2 * 3 + 2, 2).rank() == 1);
  CHECK(check_function(d.f, FunctionMode::Function).passed);
  CHECK(check_function(d.c, FunctionMode::Function).passed);
  all_five(d);
}

TEST_CASE("classical groups and a monoid")
{
  auto s3 = s3_irreps();
  std::vector<std::vector<size_t>> t(6, std::vector<size_t>(6));
  for (size_t g = 0; g < 6; ++g) {
    for (size_t h = 0; h < 6; ++h) { t[g][h] = static_cast<size_t>(s3.mult[g][h]); }
  }
  all_five(lift_monoid("S3", t, 0));
  all_five(lift_monoid("Z2", {{0, 1}, {1, 0}}, 0));
  all_five(lift_monoid("max", {{0, 1}, {1, 1}}, 0), false);
}

TEST_CASE("random generators")
{
  std::mt19937_64 a(7), b(7);
  CMatrix p = random_projection(a, 3, 1);
  CHECK((p - random_projection(b, 3, 1)).norm() == 0.0);
  CHECK((p * p - p).norm() < 1e-12);
  CHECK(std::abs(p.trace() - 1.0) < 1e-12);
  CHECK_THROWS_AS(random_projection(a, 2, 3), Error);
  std::mt19937_64 rng(99);
  for (int it = 0; it < 10; ++it) {
    auto m = random_magic_unitary(rng, 2 + it % 3, 1 + it % 3);
    CHECK(check_magic_unitary(m).passed);
  }
  auto x = QuantumSet::atoms("X", {1, 2});
  auto r = random_endo_relation(rng, x, 2);
  auto rels = std::vector<RelPtr>{make_rel("R", bend(r), {x, QuantumSet::dual(x)})};
  for (int it = 0; it < 20; ++it) {
    auto f = random_formula(rng, rels, {}, {x}, 3);
    CHECK(nondup_check(f).ok);
    CHECK(free_vars(f).empty());
  }
  std::mt19937_64 c(5), d(5);
  auto s1 = random_classical_structure(c);
  auto s2 = random_classical_structure(d);
  auto f1 = random_sentence(c, s1, lift(s1), 4);
  auto f2 = random_sentence(d, s2, lift(s2), 4);
  CHECK(to_string(f1) == to_string(f2));
}
