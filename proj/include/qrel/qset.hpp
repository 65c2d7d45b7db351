#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "qrel/subspace.hpp"

namespace qrel {

using Eigen::Index;

struct Atom
{
  std::string label;
  Index dim = 1;
  int dual_depth = 0; // parity: 1 means the atom is read as a dual space
};

// Ordered finite list of atoms plus the construction that produced it.
class QuantumSet
{
public:
  enum class Kind { Unit, Classical, Opaque, Product, Dual };

  QuantumSet(); // the unit set 1

  static QuantumSet unit() { return {}; }
  static QuantumSet classical(std::string name, std::vector<std::string> const &labels);
  static QuantumSet atoms(std::string name, std::vector<Index> const &dims, std::vector<std::string> labels = {});
  static QuantumSet product(QuantumSet const &x, QuantumSet const &y);
  static QuantumSet product_all(std::vector<QuantumSet> const &xs);
  static QuantumSet dual(QuantumSet const &x);

  size_t size() const { return node_->atoms.size(); }
  bool empty() const { return node_->atoms.empty(); }
  Atom const &atom(size_t i) const { return node_->atoms[i]; }
  std::vector<Atom> const &atoms() const { return node_->atoms; }
  Index dim(size_t i) const { return node_->atoms[i].dim; }
  Index total_dim() const;
  Index max_dim() const;
  bool is_classical() const; // every atom one-dimensional
  Kind kind() const { return node_->kind; }
  QuantumSet left() const { return QuantumSet(node_->a); }
  QuantumSet right() const { return QuantumSet(node_->b); }
  QuantumSet base() const { return QuantumSet(node_->a); }

  std::string name() const;
  // Flattened list of (base name, dual parity); units dropped.
  std::vector<std::pair<std::string, int>> const &sort_key() const { return node_->key; }
  // Flattened factor list for products (units dropped); {*this} otherwise.
  std::vector<QuantumSet> factors() const;
  int index_of(std::string const &label) const;

  bool same_shape(QuantumSet const &o) const;
  // Same shape and same flattened sort key.
  bool compatible(QuantumSet const &o) const { return same_shape(o) && sort_key() == o.sort_key(); }
  bool identical(QuantumSet const &o) const { return node_ == o.node_; }

private:
  struct Node
  {
    Kind kind = Kind::Unit;
    std::string name;
    std::vector<Atom> atoms;
    std::shared_ptr<Node const> a, b;
    std::vector<std::pair<std::string, int>> key;
  };
  explicit QuantumSet(std::shared_ptr<Node const> n) : node_(std::move(n)) {}
  std::shared_ptr<Node const> node_;
};

std::string sort_name(QuantumSet const &x);

// Mixed-radix helpers for product atoms/basis indices (left factor major).
std::vector<size_t> unflatten(size_t idx, std::vector<size_t> const &radix);
size_t flatten(std::vector<size_t> const &digits, std::vector<size_t> const &radix);

// Block-indexed family of subspaces; block (i, j) ⊆ L(X_i, Y_j). Absent blocks are zero.
class Relation
{
public:
  using Key = std::pair<size_t, size_t>;

  Relation() = default;
  Relation(QuantumSet dom, QuantumSet cod) : dom_(std::move(dom)), cod_(std::move(cod)) {}

  QuantumSet const &dom() const { return dom_; }
  QuantumSet const &cod() const { return cod_; }
  Subspace block(size_t i, size_t j) const;
  Subspace const *find(size_t i, size_t j) const;
  void set_block(size_t i, size_t j, Subspace s);
  std::map<Key, Subspace> const &blocks() const { return blocks_; }
  size_t nonzero_blocks() const { return blocks_.size(); }
  Index total_rank() const;
  // Same blocks over shape-equal sets.
  Relation relabel(QuantumSet dom, QuantumSet cod) const;

private:
  QuantumSet dom_, cod_;
  std::map<Key, Subspace> blocks_;
};

Relation top(QuantumSet const &x, QuantumSet const &y);
Relation bottom(QuantumSet const &x, QuantumSet const &y);
Relation identity(QuantumSet const &x);
// Arity (X, X*): spanned on each X_i ⊗ X_i* by the evaluation functional.
Relation equality(QuantumSet const &x);
Relation braiding(QuantumSet const &x, QuantumSet const &y);

Relation compose(Relation const &s, Relation const &r);
Relation compose_all(std::vector<Relation> const &rs); // rs[0] ∘ rs[1] ∘ ...
Relation dagger(Relation const &r);
Relation conjugate(Relation const &r);
Relation cross(Relation const &r, Relation const &s);
Relation cross_all(std::vector<Relation> const &rs);

Relation negate(Relation const &r);
Relation meet(Relation const &r, Relation const &s);
Relation join(Relation const &r, Relation const &s);
Relation sasaki_arrow(Relation const &p, Relation const &q);
Relation sasaki_and(Relation const &p, Relation const &q);

// Spectral margins, maximized over blocks.
double leq_margin(Relation const &r, Relation const &s);
double orth_margin(Relation const &r, Relation const &s);
double distance(Relation const &r, Relation const &s);
bool leq(Relation const &r, Relation const &s);
bool perp(Relation const &r, Relation const &s);
bool equal(Relation const &r, Relation const &s);

// π_#: R has arity (X_{π(0)},...,X_{π(n-1)}); the result has arity (X_0,...,X_{n-1}).
Relation permute(Relation const &r, std::vector<QuantumSet> const &sorts, std::vector<int> const &pi);
// U_π : X_0×...×X_{n-1} → X_{π(0)}×...×X_{π(n-1)}, as a composite of adjacent braidings.
Relation permutation_relation(std::vector<QuantumSet> const &sorts, std::vector<int> const &pi);
Relation permute_via_braidings(Relation const &r, std::vector<QuantumSet> const &sorts, std::vector<int> const &pi);

Relation bend(Relation const &f);
Relation unbend(Relation const &g, QuantumSet const &x, QuantumSet const &y);

// Arity-() predicate: ⊤ iff R is not orthogonal to I.
Relation trace_pred(Relation const &r);
bool is_top(Relation const &r);

Relation delta_bruteforce(QuantumSet const &x, int n_samples, std::uint64_t seed, bool transpose = true);

Relation weaver_to_blocks(Subspace const &v, QuantumSet const &x, QuantumSet const &y);
Subspace weaver_to_global(Relation const &r);
// max over central projections of dist(q_j v p_i, V); 0 for a bimodule.
double weaver_bimodule_margin(Subspace const &v, QuantumSet const &x, QuantumSet const &y);

} // namespace qrel
