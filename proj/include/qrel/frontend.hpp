#pragma once

#include <complex>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "qrel/generators.hpp"
#include "qrel/structures.hpp"

// The .qrel workspace language: syntax tree, parser, printer, diagnostics, and
// elaboration into quantum sets, relation/function symbols and formulas.

namespace qrel {

struct SourcePos
{
  int line = 1;
  int col = 1; // 1-based, in code points
  size_t offset = 0;
};

// Spans locate syntax but are not part of its identity: two trees that differ
// only in positions compare equal.
struct Span
{
  SourcePos begin, end;
  friend bool operator==(Span const &, Span const &) { return true; }
};

struct Diagnostic
{
  enum class Severity { Error, Warning, Note };
  Severity severity = Severity::Error;
  Span span;
  std::string message;
  std::string hint;
};

char const *to_string(Diagnostic::Severity s);
// `path:line:col: severity: message`, one line each, ordered by position.
std::string format_diagnostics(std::vector<Diagnostic> ds, std::string const &path);
bool has_errors(std::vector<Diagnostic> const &ds);

namespace ast {

struct Sort
{
  enum class Kind { Name, Unit, Dual, Product };
  Kind kind = Kind::Name;
  std::string name;
  std::vector<Sort> args; // one for Dual, two for Product
  Span span;
  bool operator==(Sort const &) const = default;
};

struct Term
{
  enum class Kind { Name, App, Conj };
  Kind kind = Kind::Name;
  std::string name;
  std::vector<Term> args; // App: arguments; Conj: the conjugated term
  Span span;
  bool operator==(Term const &) const = default;
};

struct Formula
{
  enum class Op { True, False, Atomic, Eq, Not, And, Or, Implies, Iff, Forall, Exists, ForallDiag, ExistsDiag };
  Op op = Op::True;
  std::string rel;   // Atomic
  bool conj = false; // Atomic: ~R(...)
  std::vector<Term> args;
  std::optional<Sort> sort; // Eq and quantifiers
  std::string v, vs;
  std::vector<Formula> sub;
  Span span;
  bool operator==(Formula const &) const = default;
};

using Row = std::vector<std::complex<double>>;

struct Matrix
{
  std::vector<Row> rows;
  Span span;
  bool operator==(Matrix const &) const = default;
};

struct Block
{
  std::vector<long> index;
  std::vector<Matrix> spanning;
  Span span;
  bool operator==(Block const &) const = default;
};

struct Qset
{
  std::string name;
  bool classical = false;
  std::vector<long> dims;
  std::vector<std::string> labels;
  Span span;
  bool operator==(Qset const &) const = default;
};

struct Rel
{
  std::string name;
  std::vector<Sort> arity;
  std::vector<Block> blocks;
  Span span;
  bool operator==(Rel const &) const = default;
};

// `fn F : X -> Y { ... }`, or `const c : Y { ... }` for a nullary function.
struct Fn
{
  std::string name;
  bool constant = false;
  std::optional<Sort> dom;
  Sort cod;
  std::vector<Block> blocks;
  Span span;
  bool operator==(Fn const &) const = default;
};

struct NamedFormula
{
  std::string name;
  Formula body;
  Span span;
  bool operator==(NamedFormula const &) const = default;
};

struct Assert
{
  std::string name;
  std::optional<bool> expect;
  Span span;
  bool operator==(Assert const &) const = default;
};

struct Verify
{
  std::string kind;
  std::vector<std::string> names;
  Span span;
  bool operator==(Verify const &) const = default;
};

// `family P : (A, B) dim d { entry (a, b) = M ... }`
struct Family
{
  std::string name;
  std::string rows, cols; // classical qsets
  long dim = 1;
  struct Entry
  {
    long a = 0, b = 0;
    Matrix m;
    bool operator==(Entry const &) const = default;
  };
  std::vector<Entry> entries;
  Span span;
  bool operator==(Family const &) const = default;
};

// `metric D on X { 0 = R0, 1 = R1, inf = R2 }`
struct Metric
{
  std::string name;
  Sort base;
  std::vector<std::pair<double, std::string>> values;
  Span span;
  bool operator==(Metric const &) const = default;
};

// `graph G on A { "a" - "b", ... }`
struct Graph
{
  std::string name;
  std::string set;
  std::vector<std::pair<std::string, std::string>> edges;
  Span span;
  bool operator==(Graph const &) const = default;
};

// `irreps S { elements = [...]  irrep name = [M_g, ...] ... }`
struct Irreps
{
  std::string name;
  std::vector<std::string> elements;
  struct Irrep
  {
    std::string name;
    std::vector<Matrix> rho;
    bool operator==(Irrep const &) const = default;
  };
  std::vector<Irrep> irreps;
  Span span;
  bool operator==(Irreps const &) const = default;
};

using Decl = std::variant<Qset, Rel, Fn, NamedFormula, Assert, Verify, Family, Metric, Graph, Irreps>;

struct Workspace
{
  std::vector<Decl> decls;
  bool operator==(Workspace const &) const = default;
};

std::string print(Sort const &s);
std::string print(Term const &t);
std::string print(Formula const &f);
std::string print(Workspace const &w);

} // namespace ast

struct ParseResult
{
  ast::Workspace ws;
  std::vector<Diagnostic> diagnostics;
  bool ok() const { return !has_errors(diagnostics); }
};

ParseResult parse_workspace(std::string const &text);

// Parses a standalone formula (used for the tests and for `--context` free checks).
std::optional<ast::Formula> parse_formula(std::string const &text, std::vector<Diagnostic> &ds);

// Elaborated workspace.
struct Workspace
{
  std::map<std::string, QuantumSet> sets;
  std::map<std::string, RelPtr> rels;
  std::map<std::string, FnPtr> fns;

  struct NamedFormula
  {
    FormulaPtr f;
    Context free; // free variables in first-occurrence order, with their inferred sorts
    Span span;
  };
  std::map<std::string, NamedFormula> formulas;
  std::vector<std::string> formula_order;

  struct Assertion
  {
    std::string formula;
    bool expect = true;
    Span span;
  };
  std::vector<Assertion> asserts;

  struct Directive
  {
    std::string kind;
    std::vector<std::string> names;
    Span span;
  };
  std::vector<Directive> verifies;

  struct Family
  {
    ProjectionFamily p;
    std::string rows, cols;
  };
  std::map<std::string, Family> families;
  std::map<std::string, MetricFamily> metrics;
  struct Graph
  {
    ClassicalGraph g;
    std::string set;
  };
  std::map<std::string, Graph> graphs;
  std::map<std::string, IrrepData> irreps;
};

struct ElabResult
{
  Workspace ws;
  std::vector<Diagnostic> diagnostics;
  bool ok() const { return !has_errors(diagnostics); }
};

ElabResult elaborate(ast::Workspace const &w);
// parse_workspace followed by elaborate; diagnostics of both stages.
ElabResult load_workspace(std::string const &text);

std::vector<std::string> const &verify_kinds();

} // namespace qrel
