#pragma once

#include "dsf/instance.h"

#include <cstdint>
#include <span>

namespace dsf {

struct OracleResult {
  Rational opt_cost;
  Solution witness;
  std::uint64_t explored = 0;  // search nodes visited
};

/// Exact DSF by branch and bound over the relevant edges (those lying on some
/// s_i→t_i walk). `edge_budget` caps the number of relevant edges.
OracleResult brute_force_dsf(const Instance& inst, std::size_t edge_budget = 20);

/// Optimal directed Steiner tree by dynamic programming over terminal subsets.
Solution exact_dst(const Digraph& g, VertexId root, std::span<const VertexId> terminals);
constexpr std::size_t kMaxExactTerminals = 16;

/// A minimum-density junction with its edge set.
using DensityOracleResult = JunctionTree;

/// Minimum of c(F)/|covered(F, r)| over all subsets F of the relevant edges
/// and all roots r. Ties prefer more covered pairs, then the
/// lexicographically smallest edge-id set, then the smaller root.
DensityOracleResult brute_force_min_density_junction(const Instance& inst,
                                                     std::size_t edge_budget = 18);

/// DST-LP optimum; never exceeds the cost of exact_dst.
Rational dst_lp_lower_bound(const Digraph& g, VertexId root, std::span<const VertexId> terminals);

}  // namespace dsf
