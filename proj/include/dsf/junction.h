#pragma once

#include "dsf/dst.h"
#include "dsf/instance.h"
#include "dsf/ledger.h"
#include "dsf/lp.h"

#include <optional>

namespace dsf {

/// Bucket j holds the pairs with y ∈ (1/2^{j+1}, 1/2^j], for j = 0..⌊log₂ k⌋.
struct BucketChoice {
  int theta = 0;
  std::vector<PairId> pairs;
  Rational mass;
};

/// Smallest j whose bucket mass reaches 1/(2⌊log₂ k⌋+2). Requires Σ y = 1.
BucketChoice bucket_theta(const std::map<PairId, Rational>& y_t, std::size_t k);

/// Index of the bucket containing y > 0, possibly beyond ⌊log₂ k⌋.
int bucket_index(const Rational& y);

struct JunctionSearchState {
  VertexId root;
  FractionalSolution fractional;
  int theta = 0;
  std::vector<PairId> bucket_pairs;
  Rational bucket_mass;
  DstResult forward;   // root → sinks of the bucket
  DstResult backward;  // sources of the bucket → root
};

struct ScaledFeasibility {
  bool pass = true;
  std::vector<std::string> violations;
};

/// Checks that 2^{θ+1}·x* carries a unit of flow from the root to every sink
/// of the bucket and from every source of the bucket to the root.
ScaledFeasibility check_scaled_feasibility(const JunctionSearchState& state, const Instance& inst);

struct JunctionCandidate {
  JunctionTree tree;
  JunctionSearchState state;
};

/// Den-LP at the root, bucketing, then one DST call each way. nullopt when no
/// pair can route through the root. DST-LP bounds are not computed here.
std::optional<JunctionCandidate> build_junction_tree(const Instance& inst, VertexId root,
                                                     DstStrategy strategy);

struct JunctionOptions {
  DstStrategy strategy = DstStrategy::exact_fpt;
  std::size_t parallelism = 1;
  /// Run check_scaled_feasibility on every root's state.
  bool check_every_root = true;
};

struct JunctionSearchResult {
  JunctionTree tree;
  JunctionSearchState state;  // of the winning root, with DST-LP bounds
  std::vector<Inequality> ledger;
  std::size_t roots_tried = 0;
  std::size_t roots_feasible = 0;
  std::size_t scaled_checks = 0;
  std::vector<std::string> failures;  // scaled-feasibility or definition failures
};

/// Best junction over all roots: minimum density, then smaller root id.
JunctionSearchResult find_min_density_junction(const Instance& inst,
                                               const JunctionOptions& options = {});

}  // namespace dsf
