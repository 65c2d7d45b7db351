#include <doctest.h>

#include <random>

#include "qrel/frontend.hpp"

using namespace qrel;

namespace {

std::string const graph_src = R"(# a reflexive symmetric relation on one qubit atom
qset X { atoms = [2] }
rel R : (X, X*) {
  block (0, 0) = [[[[1, 0], [0, 0], [0, 0], [1, 0]]]]
}
formula refl := forall x == xs in X . R(x, xs)
formula open := R(x, y)
assert refl is true
verify graph R
)";

ParseResult parsed(std::string const &src)
{
  auto r = parse_workspace(src);
  INFO(format_diagnostics(r.diagnostics, "t"));
  REQUIRE(r.ok());
  return r;
}

bool within(Span const &s, std::string const &text)
{
  return s.begin.offset <= s.end.offset && s.end.offset <= text.size() && s.begin.line >= 1 && s.begin.col >= 1;
}

// Random syntax trees over a fixed vocabulary.
struct AstGen
{
  std::mt19937_64 &rng;
  int fresh = 0;

  ast::Sort sort(int d)
  {
    ast::Sort s;
    int k = static_cast<int>(rng() % (d > 0 ? 4 : 2));
    if (k == 0) {
      s.name = rng() % 2 ? "X" : "Y";
    } else if (k == 1) {
      s.kind = ast::Sort::Kind::Unit;
    } else if (k == 2) {
      s.kind = ast::Sort::Kind::Dual;
      s.args.push_back(sort(d - 1));
    } else {
      s.kind = ast::Sort::Kind::Product;
      s.args.push_back(sort(d - 1));
      s.args.push_back(sort(d - 1));
    }
    return s;
  }

  ast::Term term(int d)
  {
    ast::Term t;
    int k = static_cast<int>(rng() % (d > 0 ? 3 : 1));
    if (k == 0) {
      t.name = "v" + std::to_string(rng() % 4);
    } else if (k == 1) {
      t.kind = ast::Term::Kind::App;
      t.name = "F";
      for (size_t n = rng() % 3; n > 0; --n) { t.args.push_back(term(d - 1)); }
    } else {
      t.kind = ast::Term::Kind::Conj;
      t.args.push_back(term(d - 1));
    }
    return t;
  }

  ast::Formula formula(int d)
  {
    using Op = ast::Formula::Op;
    ast::Formula f;
    int k = static_cast<int>(rng() % (d > 0 ? 12 : 4));
    static Op const ops[] = {Op::True,  Op::False,   Op::Atomic, Op::Eq,     Op::Not,        Op::And,
                             Op::Or,    Op::Implies, Op::Iff,    Op::Forall, Op::ExistsDiag, Op::Exists};
    f.op = ops[k];
    switch (f.op) {
    case Op::Atomic:
      f.rel = rng() % 2 ? "R" : "S";
      f.conj = rng() % 3 == 0;
      for (size_t n = rng() % 3; n > 0; --n) { f.args.push_back(term(2)); }
      break;
    case Op::Eq:
      f.sort = sort(2);
      f.args = {term(1), term(1)};
      break;
    case Op::Not: f.sub.push_back(formula(d - 1)); break;
    case Op::And:
    case Op::Or:
    case Op::Implies:
    case Op::Iff:
      f.sub.push_back(formula(d - 1));
      f.sub.push_back(formula(d - 1));
      break;
    case Op::Forall:
    case Op::Exists:
    case Op::ExistsDiag:
      f.v = "v" + std::to_string(fresh++);
      if (f.op == Op::ExistsDiag) { f.vs = f.v + "s"; }
      f.sort = sort(2);
      f.sub.push_back(formula(d - 1));
      break;
    default: break;
    }
    return f;
  }
};

} // namespace

TEST_CASE("parse: qset and diagonal formula")
{
  auto r = parsed("qset X { atoms = [2] }\nformula refl := forall x == xs in X . R(x, xs)\n");
  REQUIRE(r.ws.decls.size() == 2);
  auto const &q = std::get<ast::Qset>(r.ws.decls[0]);
  CHECK(q.name == "X");
  CHECK(q.dims == std::vector<long>{2});
  auto const &f = std::get<ast::NamedFormula>(r.ws.decls[1]).body;
  CHECK(f.op == ast::Formula::Op::ForallDiag);
  CHECK(f.v == "x");
  CHECK(f.vs == "xs");
  CHECK(f.sub[0].op == ast::Formula::Op::Atomic);
  CHECK(f.sub[0].args.size() == 2);
}

TEST_CASE("parse: precedence")
{
  std::vector<Diagnostic> ds;
  auto f = parse_formula("not P() and Q() or P() -> Q() -> P()", ds);
  REQUIRE(f);
  using Op = ast::Formula::Op;
  CHECK(f->op == Op::Implies);
  CHECK(f->sub[0].op == Op::Or);
  CHECK(f->sub[0].sub[0].op == Op::And);
  CHECK(f->sub[0].sub[0].sub[0].op == Op::Not);
  CHECK(f->sub[1].op == Op::Implies);
  // a quantifier body extends to the right
  f = parse_formula("P() and forall x in X . Q() or P()", ds);
  REQUIRE(f);
  CHECK(f->op == Op::And);
  CHECK(f->sub[1].sub[0].op == Op::Or);
}

TEST_CASE("print-parse fixpoint")
{
  auto r = parsed(graph_src);
  auto text = ast::print(r.ws);
  auto again = parsed(text);
  CHECK(again.ws == r.ws);
  CHECK(ast::print(again.ws) == text);

  std::mt19937_64 rng(17);
  for (int it = 0; it < 300; ++it) {
    AstGen g{rng};
    auto f = g.formula(4);
    std::vector<Diagnostic> ds;
    auto back = parse_formula(ast::print(f), ds);
    INFO(ast::print(f));
    REQUIRE(back);
    CHECK(*back == f);
  }
}

TEST_CASE("fixpoint keeps every declaration kind")
{
  std::string src = R"(
qset A { classical = ["a", "b \"quoted\""] }
qset X { atoms = [1, 2] }
rel T : () { block () = [[[[1, 0]]]] }
fn F : X >< X -> X { block (0, 0, 0) = [[[[0.5, -1e-3]]]] }
const c : X { block (0, 1) = [] }
family P : (A, A) dim 1 { entry (0, 0) = [[[1, 0]]] entry (1, 1) = [[[1, 0]]] }
metric D on X { 0 = T, 2.5 = T, inf = T }
graph G on A { "a" - "b \"quoted\"" }
irreps Z1 { elements = ["e"] irrep triv = [[[[1, 0]]]] }
verify poset-weaver T
assert foo is false
)";
  auto r = parsed(src);
  CHECK(r.ws.decls.size() == 11);
  auto again = parsed(ast::print(r.ws));
  CHECK(again.ws == r.ws);
  auto const &m = std::get<ast::Metric>(r.ws.decls[6]);
  CHECK(std::isinf(m.values[2].first));
  CHECK(std::get<ast::Fn>(r.ws.decls[3]).blocks[0].spanning[0].rows[0][0] == std::complex<double>(0.5, -1e-3));
}

TEST_CASE("diagnostics")
{
  CHECK(format_diagnostics({}, "f.qrel").empty());

  auto r = parse_workspace("qset X { atoms = [2] }\nrel R : (X X) {}\n");
  REQUIRE(r.diagnostics.size() == 1);
  CHECK(format_diagnostics(r.diagnostics, "f.qrel") == "f.qrel:2:12: error: expected ')', found 'X'\n");

  // recovery continues at the next declaration
  r = parse_workspace("qset { }\nqset Y { atoms = [1] }\nformula f := forall in X . P()\nqset Z { atoms = [1] }\n");
  CHECK(r.diagnostics.size() == 2);
  CHECK(r.ws.decls.size() == 2);

  // columns count code points
  r = parse_workspace("qset A { classical = [\"é\"] } $");
  REQUIRE(r.diagnostics.size() == 1);
  CHECK(r.diagnostics[0].span.begin.col == 30);

  // keywords, unknown verify kinds
  CHECK_FALSE(parse_workspace("qset forall { atoms = [1] }").ok());
  r = parse_workspace("verify grpah R\n");
  REQUIRE(r.diagnostics.size() == 1);
  CHECK(r.diagnostics[0].message.find("grpah") != std::string::npos);
}

TEST_CASE("elaboration: wrong matrix shape is reported at the matrix")
{
  std::string src = "qset X { atoms = [2] }\n"
                    "rel R : (X, X*) { block (0,0) = [[[ [1,0],[0,0] ],[ [0,0],[1,0] ]]] }\n";
  auto e = load_workspace(src);
  REQUIRE(e.diagnostics.size() == 1);
  auto const &d = e.diagnostics[0];
  CHECK(d.message == "matrix is 2x2, expected 1x4");
  CHECK(d.span.begin.line == 2);
  CHECK(d.span.begin.col == 34);
  CHECK(src.substr(d.span.begin.offset, d.span.end.offset - d.span.begin.offset) ==
        "[[ [1,0],[0,0] ],[ [0,0],[1,0] ]]");
}

TEST_CASE("elaboration: nonduplication cites the variable")
{
  auto e = load_workspace("qset X { atoms = [2] }\nrel R : (X, X) {}\nformula bad := forall x in X . R(x, x)\n");
  REQUIRE(e.diagnostics.size() == 1);
  auto line = format_diagnostics(e.diagnostics, "w.qrel");
  CHECK(line.rfind("w.qrel:3:32: error: variable 'x' occurs more than once", 0) == 0);
  // repetition across atomic formulas is fine
  e = load_workspace("qset X { atoms = [2] }\nrel R : (X) {}\nformula ok := forall x in X . R(x) and R(x)\n");
  CHECK(e.ok());
  // so is reuse through a function term of another variable
  e = load_workspace("qset X { atoms = [2] }\nrel R : (X, X) {}\nfn F : X -> X {}\n"
                     "formula bad := forall x in X . R(F(x), x)\n");
  CHECK_FALSE(e.ok());
}

TEST_CASE("elaboration: resolution and sorts")
{
  auto e = load_workspace(graph_src);
  INFO(format_diagnostics(e.diagnostics, "g"));
  REQUIRE(e.ok());
  auto const &ws = e.ws;
  CHECK(ws.formulas.at("refl").free.empty());
  CHECK(truth(ws.formulas.at("refl").f));
  auto const &open = ws.formulas.at("open");
  REQUIRE(open.free.size() == 2);
  CHECK(open.free[0].name == "x");
  CHECK(open.free[1].sort.compatible(QuantumSet::dual(ws.sets.at("X"))));
  REQUIRE(ws.verifies.size() == 1);
  CHECK(ws.asserts.size() == 1);

  auto msg = [](std::string const &src) {
    auto r = load_workspace(src);
    return r.diagnostics.empty() ? std::string() : r.diagnostics[0].message;
  };
  std::string pre = "qset X { atoms = [2] }\nqset Y { classical = [\"a\"] }\nrel R : (X, X*) {}\n";
  CHECK(msg(pre + "formula f := forall x in Y . R(x, x)").find("expected sort X, found Y") != std::string::npos);
  CHECK(msg(pre + "formula f := exists x in X . R(x)").find("arity 2") != std::string::npos);
  CHECK(msg(pre + "formula f := Q(x)") == "unknown relation symbol 'Q'");
  CHECK(msg(pre + "qset X { atoms = [1] }") == "duplicate quantum set 'X'");
  CHECK(msg(pre + "rel S : (X) { block (3) = [] }").find("out of range") != std::string::npos);
  CHECK(msg(pre + "formula f := R(x, y) and R(y, x)").find("free variable 'y'") != std::string::npos);
  CHECK(msg(pre + "formula f := R(x, y)\nassert f").find("free variables (x, y)") != std::string::npos);
  CHECK(msg(pre + "formula f := E[X](x, y) and R(x, y)").empty());
  CHECK(msg(pre + "verify graph Q").find("unknown relation 'Q'") != std::string::npos);
  CHECK(msg(pre + "verify metric R").find("unknown metric") != std::string::npos);
  CHECK(msg("formula f := forall x in W . true\nqset W { atoms = [1] }").find("unknown quantum set") !=
        std::string::npos);
  auto later = load_workspace("formula f := forall x in W . true\nqset W { atoms = [1] }");
  CHECK(later.diagnostics[0].hint.find("declared further down") != std::string::npos);
  // a failed declaration does not cascade
  auto cascade = load_workspace("qset X { atoms = [0] }\nformula f := forall x in X . true\nassert f\n");
  CHECK(cascade.diagnostics.size() == 1);
}

TEST_CASE("elaboration: conjugate terms")
{
  // F : X -> Y, so ~F(x) takes x : X* and has sort Y*
  std::string pre = "qset X { atoms = [2] }\nqset Y { atoms = [1, 1] }\nfn F : X -> Y {}\nrel G : (Y*) {}\n";
  auto e = load_workspace(pre + "formula f := forall x in X* . G(~F(x))\n");
  INFO(format_diagnostics(e.diagnostics, "c"));
  CHECK(e.ok());
  auto const &f = e.ws.formulas.at("f").f;
  CHECK(f->lhs->args[0]->conj);
  CHECK_FALSE(load_workspace(pre + "formula f := forall x in X . G(~F(x))\n").ok());
  CHECK_FALSE(load_workspace(pre + "formula f := forall x in X* . G(F(x))\n").ok());
  // function symbols in atomic position denote their graphs
  e = load_workspace(pre + "formula g := forall x in X . forall y in Y* . F(x, y)\n");
  CHECK(e.ok());
}

TEST_CASE("elaboration: objects")
{
  auto e = load_workspace(R"(
qset A { classical = ["0", "1"] }
family P : (A, A) dim 2 {
  entry (0, 0) = [[[1, 0], [0, 0]], [[0, 0], [0, 0]]]
  entry (1, 1) = [[[1, 0], [0, 0]], [[0, 0], [0, 0]]]
  entry (0, 1) = [[[0, 0], [0, 0]], [[0, 0], [1, 0]]]
  entry (1, 0) = [[[0, 0], [0, 0]], [[0, 0], [1, 0]]]
}
graph K on A { "0" - "1" }
verify magic-unitary P
verify iso-witness P K K
)");
  INFO(format_diagnostics(e.diagnostics, "o"));
  REQUIRE(e.ok());
  CHECK(check_magic_unitary(e.ws.families.at("P").p).passed);
  CHECK(check_iso_witness(e.ws.families.at("P").p, e.ws.graphs.at("K").g, e.ws.graphs.at("K").g).passed);
  CHECK_FALSE(load_workspace("qset A { classical = [\"0\"] }\ngraph G on A { \"0\" - \"0\" }").ok());
  CHECK_FALSE(load_workspace("qset X { atoms = [2] }\ngraph G on X { }").ok());

  // irreps read back from their printed form; the multiplication table is recovered
  auto s3 = s3_irreps();
  ast::Irreps ir;
  ir.name = "S3";
  ir.elements = s3.elements;
  for (auto const &rep : s3.irreps) {
    ast::Irreps::Irrep a;
    a.name = rep.name;
    for (auto const &m : rep.rho) {
      ast::Matrix am;
      for (Index i = 0; i < m.rows(); ++i) {
        ast::Row row;
        for (Index j = 0; j < m.cols(); ++j) { row.push_back(m(i, j)); }
        am.rows.push_back(row);
      }
      a.rho.push_back(am);
    }
    ir.irreps.push_back(a);
  }
  e = load_workspace(ast::print(ast::Workspace{{ir}}));
  INFO(format_diagnostics(e.diagnostics, "s3"));
  REQUIRE(e.ok());
  CHECK(e.ws.irreps.at("S3").mult == s3.mult);
  ir.irreps.pop_back();
  CHECK_FALSE(load_workspace(ast::print(ast::Workspace{{ir}})).ok());
}

TEST_CASE("spans stay inside the text")
{
  std::mt19937_64 rng(3);
  std::string const base = graph_src;
  char const junk[] = "(){}[],.*~:=-<>\"#x1 \n";
  for (int it = 0; it < 400; ++it) {
    std::string s = base;
    for (int k = 0; k < 3; ++k) {
      size_t at = rng() % (s.size() + 1);
      if (rng() % 2 && at < s.size()) {
        s.erase(at, 1 + rng() % 4);
      } else {
        s.insert(at, 1, junk[rng() % (sizeof junk - 1)]);
      }
    }
    auto e = load_workspace(s);
    for (auto const &d : e.diagnostics) { CHECK(within(d.span, s)); }
  }
}
