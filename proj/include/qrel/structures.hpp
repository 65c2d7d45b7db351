#pragma once

#include <limits>
#include <string>
#include <vector>

#include "qrel/logic.hpp"

// Verifiers for discrete quantum structures. Each condition is evaluated on the
// logical formula (through the interpreter) and, where an equivalent relation
// inequality exists, directly; the direct reading is reported under the same id
// with a "/direct" suffix.

namespace qrel {

struct Condition
{
  std::string id;
  std::string formula;
  bool passed = false;
  double margin = 0.0; // distance from passing; 0 when passed exactly
  bool skipped = false;
  std::string note;
};

struct VerificationReport
{
  std::string kind;
  std::vector<Condition> conditions;
  bool passed = true;
  bool warn = false;       // some margin fell in the instability band
  bool empty_sort = false; // some formula quantified over an empty quantum set

  Condition const *find(std::string const &id) const;
  // Records a margin-based condition; passes when margin ≤ tolerance.
  void add(std::string id, std::string formula, double margin, std::string note = {});
  void add_skipped(std::string id, std::string formula, std::string note);
  std::vector<std::string> failed_ids() const;
};

struct CheckOptions
{
  // The formula path is evaluated only when the largest atom of the interpreter's
  // context has at most this dimension.
  Index formula_limit = 256;
  InterpretOptions interp;
};

// Distances; the last value may be +∞.
struct MetricFamily
{
  QuantumSet base;
  std::vector<double> values;     // strictly increasing
  std::vector<Relation> relations; // endo relations on base, one per value
};

struct ProjectionFamily
{
  Index hilbert_dim = 1;
  std::vector<std::string> row_labels; // A
  std::vector<std::string> col_labels; // B
  std::vector<std::vector<CMatrix>> p; // p[a][b]
};

// A finite simple graph on labelled vertices: adjacency as a boolean matrix.
struct ClassicalGraph
{
  std::vector<std::string> labels;
  std::vector<std::vector<bool>> adj;
};

enum class PosetMode { Weaver, Nilpotent };
enum class FunctionMode { Function, Injective, Surjective };
enum class MetricMode { Pseudometric, Metric };

VerificationReport check_graph(Relation const &r, CheckOptions const &opt = {});
VerificationReport check_preorder(Relation const &r, CheckOptions const &opt = {});
VerificationReport check_poset(Relation const &r, PosetMode mode, CheckOptions const &opt = {});
VerificationReport check_function(Relation const &f, FunctionMode mode, CheckOptions const &opt = {});
VerificationReport check_metric(MetricFamily const &m, MetricMode mode, CheckOptions const &opt = {});
VerificationReport check_magic_unitary(ProjectionFamily const &p, CheckOptions const &opt = {});
VerificationReport check_hom_witness(ProjectionFamily const &p, ClassicalGraph const &ga, ClassicalGraph const &gb,
                                     CheckOptions const &opt = {});
VerificationReport check_iso_witness(ProjectionFamily const &p, ClassicalGraph const &ga, ClassicalGraph const &gb,
                                     CheckOptions const &opt = {});
VerificationReport check_quantum_group(Relation const &f, Relation const &c, CheckOptions const &opt = {});

// Helpers shared with generators and tests.
void validate(MetricFamily const &m);       // FamilyInvariantViolation
void validate(ProjectionFamily const &p);   // NotProjections
// The function X × `A → `B of a projection family over the single-atom set X.
Relation family_function(ProjectionFamily const &p, QuantumSet const &x, QuantumSet const &a, QuantumSet const &b);
// Classical relation `r on a labelled graph's vertex set.
Relation graph_relation(ClassicalGraph const &g, QuantumSet const &v);
// Predicate of arity (X) for a projection on the single atom of X.
Subspace projection_predicate(CMatrix const &p);

} // namespace qrel
