#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qrel/qset.hpp"

namespace qrel {

// A function symbol F : X_1 × ... × X_k → Y (k = 0 for constants).
struct FnSymbol
{
  std::string name;
  Relation rel;
  std::vector<QuantumSet> dom_sorts;
  QuantumSet cod;
};

// A relation symbol of arity (Y_1, ..., Y_n), i.e. a relation Y_1×...×Y_n → 1.
struct RelSymbol
{
  std::string name;
  Relation rel;
  std::vector<QuantumSet> arity;
};

using FnPtr = std::shared_ptr<FnSymbol const>;
using RelPtr = std::shared_ptr<RelSymbol const>;

FnPtr make_fn(std::string name, Relation rel, std::vector<QuantumSet> dom_sorts, QuantumSet cod);
RelPtr make_rel(std::string name, Relation rel, std::vector<QuantumSet> arity);
RelPtr equality_symbol(QuantumSet const &x);
// Ğ for a function F: the arity-(X_1, ..., X_k, Y*) graph relation.
RelPtr graph_symbol(FnSymbol const &f);

struct Term;
using TermPtr = std::shared_ptr<Term const>;

struct Term
{
  enum class Kind { Var, App };
  Kind kind = Kind::Var;
  std::string var;
  FnPtr fn;
  bool conj = false; // use F_* in place of F
  std::vector<TermPtr> args;
};

TermPtr var(std::string name);
TermPtr app(FnPtr fn, std::vector<TermPtr> args);
// Conjugates every function symbol of the term; variables are named explicitly.
TermPtr conj(TermPtr const &t);

struct Formula;
using FormulaPtr = std::shared_ptr<Formula const>;

struct Formula
{
  enum class Op { True, False, Atomic, Not, And, Or, Implies, Iff, Forall, Exists, ForallDiag, ExistsDiag };
  Op op = Op::True;
  RelPtr rel;
  bool rel_conj = false;
  std::vector<TermPtr> args;
  FormulaPtr lhs, rhs;
  std::string v, vs; // bound variable (and its dual partner for diagonal quantifiers)
  QuantumSet sort;   // sort of v; vs ranges over its dual
};

FormulaPtr f_true();
FormulaPtr f_false();
FormulaPtr atomic(RelPtr rel, std::vector<TermPtr> args, bool conj = false);
FormulaPtr eq(QuantumSet const &x, TermPtr a, TermPtr b);
FormulaPtr f_not(FormulaPtr a);
FormulaPtr f_and(FormulaPtr a, FormulaPtr b);
FormulaPtr f_or(FormulaPtr a, FormulaPtr b);
FormulaPtr f_implies(FormulaPtr a, FormulaPtr b);
FormulaPtr f_iff(FormulaPtr a, FormulaPtr b);
FormulaPtr forall(std::string v, QuantumSet x, FormulaPtr body);
FormulaPtr exists(std::string v, QuantumSet x, FormulaPtr body);
FormulaPtr forall_diag(std::string v, std::string vs, QuantumSet x, FormulaPtr body);
FormulaPtr exists_diag(std::string v, std::string vs, QuantumSet x, FormulaPtr body);

struct VarDecl
{
  std::string name;
  QuantumSet sort;
};
using Context = std::vector<VarDecl>;

std::string to_string(TermPtr const &t);
std::string to_string(FormulaPtr const &f);

// Variables in order of first occurrence.
std::vector<std::string> term_vars(TermPtr const &t);
std::vector<std::string> free_vars(FormulaPtr const &f);
bool is_primitive(FormulaPtr const &f); // only ¬, ∧, ∀ and atomics on variables
int depth(FormulaPtr const &f);

struct NondupResult
{
  bool ok = true;
  std::string path; // position of the offending atomic subformula
  std::string var;  // a duplicated variable
  std::string atomic;
};
NondupResult nondup_check(FormulaPtr const &f);

// Eliminates defined symbols down to ¬, ∧, ∀ and primitive atomics.
FormulaPtr translate(FormulaPtr const &f);

enum class ForallMode { NegExistsNeg, Residual };
enum class DiagMode { Direct, Residual, Literal };

struct InterpretOptions
{
  ForallMode forall = ForallMode::NegExistsNeg;
  DiagMode diag = DiagMode::Direct;
};

struct InterpretStats
{
  bool empty_quantifier = false; // some quantifier ranged over an empty quantum set
};

QuantumSet context_set(Context const &ctx);
std::vector<QuantumSet> context_sorts(Context const &ctx);

Relation interpret(FormulaPtr const &f, Context const &ctx, InterpretOptions const &opt = {},
                   InterpretStats *stats = nullptr);
// [t] over exactly the variables of t, in first-occurrence order; `vars` receives them.
Relation interpret_term_own(TermPtr const &t, Context const &ctx, std::vector<VarDecl> *vars = nullptr);
// [t] as a function from the whole context.
Relation interpret_term(TermPtr const &t, Context const &ctx);
bool truth(FormulaPtr const &f, InterpretOptions const &opt = {}, InterpretStats *stats = nullptr);

// Quantifier kernels on predicates whose first factor(s) are being bound.
Relation exists_first(Relation const &s, QuantumSet const &x, std::vector<QuantumSet> const &rest);
Relation exists_diag_first(Relation const &s, QuantumSet const &x, std::vector<QuantumSet> const &rest);
// sup{R | ⊤_{X_1}×...×⊤_{X_m}×R ≤ S}
Relation forall_residual(Relation const &s, std::vector<QuantumSet> const &sorts, size_t m);
// sup{R | E_X × R ≤ S}
Relation forall_diag_residual(Relation const &s, QuantumSet const &x, std::vector<QuantumSet> const &rest);
// Predicate R (arity sorts of positions) padded with ⊤ and placed into ctx.
Relation atomic_clause(Relation const &r, std::vector<size_t> const &positions, std::vector<QuantumSet> const &ctx);

} // namespace qrel
