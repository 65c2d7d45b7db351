#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qrel/generators.hpp"

// Seeded property suites over random and constructed instances. Each suite
// counts cases and failures and records the worst margin seen; `selftest` and
// the acceptance binary both run them.

namespace qrel {

struct SuiteOptions
{
  std::uint64_t seed = 20261016;
  double tol = 1e-8; // pass threshold for margins/distances
  double scale = 1.0; // multiplies the default instance counts
};

struct SuiteResult
{
  int id = 0;
  std::string name;
  int cases = 0;
  int failures = 0;
  double max_margin = 0.0;
  double seconds = 0.0;
  std::vector<std::string> details; // first few failure descriptions
  bool passed() const { return cases > 0 && failures == 0; }
};

SuiteResult suite_classical_soundness(SuiteOptions const &opt);   // 500 pairs
SuiteResult suite_orthomodular(SuiteOptions const &opt);          // 200 pairs/triples
SuiteResult suite_dagger_compact(SuiteOptions const &opt);        // 100 relations
SuiteResult suite_quantifier_laws(SuiteOptions const &opt);       // 100 formulas
SuiteResult suite_equality_delta(SuiteOptions const &opt);
SuiteResult suite_correspondences(SuiteOptions const &opt);
SuiteResult suite_hamming(SuiteOptions const &opt);
SuiteResult suite_games(SuiteOptions const &opt);
SuiteResult suite_quantum_groups(SuiteOptions const &opt);
SuiteResult suite_weaver(SuiteOptions const &opt);                // 50 subspaces

// All ten, in order.
std::vector<SuiteResult> run_property_suites(SuiteOptions const &opt);

// Constructed instances shared with tests and the CLI corpus.
ClassicalGraph make_graph(std::vector<std::string> labels, std::vector<std::pair<int, int>> const &edges);
ProjectionFamily permutation_family(std::vector<std::string> const &rows, std::vector<std::string> const &cols,
                                    std::vector<int> const &f); // f[a] = b, or -1 for an empty row
// [[P, 1-P], [1-P, P]] with P the projection onto (1, 1)/√2.
ProjectionFamily rotated_family();

} // namespace qrel
