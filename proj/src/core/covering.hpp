#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "geometry.hpp"
#include "operators.hpp"

namespace epsnum::covering {

// n+1 points of the true set, pairwise at least min_separation apart;
// certifies eps_n >= min_separation / 2.
struct PackingWitness {
  int dim = 0;
  std::size_t count = 0;
  std::vector<double> points;  // count * dim
  double min_separation = 0.0;
};

// Centers drawn from the covered cloud plus the measured covering
// radius; certifies eps_n <= radius + cloud density.
struct Net {
  int dim = 0;
  std::vector<std::size_t> center_indices;
  std::vector<double> centers;
  double radius = 0.0;
};

// Certified two-sided bracket for the n-th entropy number.
struct EntropyBracket {
  int n = 1;
  double lower = 0.0;
  double upper = 0.0;
  double eta = 0.0;  // achieved density of the cloud the oracle used
  bool truncated_search = false;
  std::vector<std::string> methods;
  std::optional<PackingWitness> lower_witness;
  std::optional<Net> upper_witness;
};

// Greedy n+1-point dispersion (farthest-point traversal from the
// largest-norm point, one replacement sweep); returns s/2 for the
// realized min pairwise separation s. Requires subset_certified.
double packing_lower_bound(const geom::PointCloud& cloud, int n,
                           PackingWitness* witness = nullptr);

// Gonzalez farthest-point traversal; radius measured over the cloud.
Net greedy_covering(const geom::PointCloud& cloud, int n);

struct RefineOptions {
  std::uint64_t node_budget = 300'000;
  double requested_eta = 0.0;  // binary search stops at width requested_eta/2
};

// Binary search on the covering radius with exact feasibility decisions
// (chain deciders on certified ball/segment shapes, dominance-pruned
// branch and bound otherwise). Returns a tightened, still certified
// bracket; a exhausted node budget only truncates the search.
EntropyBracket exact_covering_refine(const geom::PointCloud& cloud, int n,
                                     const EntropyBracket& start,
                                     const RefineOptions& opts = {});

enum class Effort { Greedy, Exact };

struct BracketOptions {
  std::size_t cloud_budget = 50'000;
  std::uint64_t node_budget = 300'000;
  bool witnesses = true;
};

// The entropy-number oracle: discretize the domain ball, push it through
// the operator, combine packing / greedy covering / exact refinement with
// the closed-form diagonal and norm bounds.
EntropyBracket entropy_bracket(const linop::DenseOperator& op, int n, double eta,
                               Effort effort, const BracketOptions& opts = {});

}  // namespace epsnum::covering
