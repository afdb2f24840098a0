#pragma once

#include "dsf/graph.h"

#include <optional>
#include <span>
#include <string_view>

namespace dsf {

enum class DstStrategy { exact_fpt, shortest_path_union };

std::string_view to_string(DstStrategy s);
/// Accepts "exact-fpt" and "shortest-path-union".
std::optional<DstStrategy> parse_dst_strategy(std::string_view text);

struct DstResult {
  std::vector<EdgeId> edges;  // sorted, unique
  Rational cost;
  /// DST-LP optimum for the same terminals, and cost / lp_bound (1 when both
  /// are 0). Left empty when the caller skipped the LP.
  std::optional<Rational> lp_bound;
  std::optional<Rational> alpha;
};

/// A root→t dipath for every terminal.
DstResult dst_solve(const Digraph& g, VertexId root, std::span<const VertexId> terminals,
                    DstStrategy strategy, bool with_lp_bound = true);

/// An s→root dipath for every source: dst_solve on the reversed graph, whose
/// edge ids are those of g.
DstResult dst_solve_reversed(const Digraph& g, VertexId root, std::span<const VertexId> sources,
                             DstStrategy strategy, bool with_lp_bound = true);

/// Fills lp_bound and alpha. `reversed` selects the orientation used by
/// dst_solve_reversed.
void attach_lp_bound(DstResult& result, const Digraph& g, VertexId root,
                     std::span<const VertexId> terminals, bool reversed);

}  // namespace dsf
