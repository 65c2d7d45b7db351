#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "qrel/structures.hpp"

namespace qrel {

struct ClassicalStructure
{
  struct Set
  {
    std::string name;
    std::vector<std::string> labels;
  };
  struct Rel
  {
    std::string name;
    std::vector<std::string> sorts;
    std::set<std::vector<size_t>> tuples;
  };
  struct Fn
  {
    std::string name;
    std::vector<std::string> dom; // empty for constants
    std::string cod;
    std::map<std::vector<size_t>, size_t> table;
  };
  std::vector<Set> sets;
  std::vector<Rel> rels;
  std::vector<Fn> fns;

  Set const &set(std::string const &name) const;
};

struct Lifted
{
  std::map<std::string, QuantumSet> sets;
  std::map<std::string, RelPtr> rels;
  std::map<std::string, FnPtr> fns;
};

Lifted lift(ClassicalStructure const &cs);

// Tarski semantics by enumeration. Relation and function symbols are looked up
// by name in `cs`; E[...] symbols are equality, and a relation symbol named
// like a function with one extra argument is that function's graph. Dual sorts
// index the same elements. Throws NonClassicalSort on a non-classical sort.
bool fol_eval(ClassicalStructure const &cs, FormulaPtr const &f);

MetricFamily quantum_hamming(int n);
// Pauli strings of length n with exactly k non-identity factors.
std::vector<CMatrix> pauli_strings(int n, int k);

struct IrrepData
{
  std::vector<std::string> elements;
  std::vector<std::vector<int>> mult; // mult[g][h] = index of gh
  struct Irrep
  {
    std::string name;
    Index dim = 1;
    std::vector<CMatrix> rho; // one unitary per element
  };
  std::vector<Irrep> irreps;
};

void validate(IrrepData const &d); // InvariantViolation

struct DualGroup
{
  QuantumSet x;
  Relation f; // X × X → X
  Relation c; // 1 → X
};
DualGroup dual_group(IrrepData const &d);

IrrepData cyclic_irreps(int n);
IrrepData s3_irreps();

// Classical group or monoid on labels 0..n-1 given by its table and unit.
DualGroup lift_monoid(std::string const &name, std::vector<std::vector<size_t>> const &table, size_t unit);

// Seeded random instances.
Subspace random_subspace(std::mt19937_64 &rng, Index rows, Index cols, Index rank);
CMatrix random_projection(std::mt19937_64 &rng, Index dim, Index rank);
CMatrix random_unitary(std::mt19937_64 &rng, Index dim);
Relation random_relation(std::mt19937_64 &rng, QuantumSet const &x, QuantumSet const &y, Index max_rank);
Relation random_endo_relation(std::mt19937_64 &rng, QuantumSet const &x, Index max_rank);
QuantumSet random_qset(std::mt19937_64 &rng, std::string const &name, size_t max_atoms, Index max_dim);
ProjectionFamily random_magic_unitary(std::mt19937_64 &rng, size_t n, int blocks);

struct RandomStructureParams
{
  size_t max_set_size = 4;
  int max_depth = 4;
};
ClassicalStructure random_classical_structure(std::mt19937_64 &rng, RandomStructureParams const &p = {});
// Nonduplicating sentence over the lifted symbols of `cs`; never quantifies over
// an empty sort.
FormulaPtr random_sentence(std::mt19937_64 &rng, ClassicalStructure const &cs, Lifted const &l, int depth);
// Nonduplicating formula over the given relation symbols with free variables
// drawn from `ctx` (may be closed under quantifiers over `sorts`).
FormulaPtr random_formula(std::mt19937_64 &rng, std::vector<RelPtr> const &rels, Context const &ctx,
                          std::vector<QuantumSet> const &sorts, int depth, bool defined = true);

} // namespace qrel
