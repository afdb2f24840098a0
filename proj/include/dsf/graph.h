#pragma once

#include "dsf/rational.h"

#include <algorithm>
#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace dsf {

/// Malformed input handed to a library operation (unknown id, violated
/// precondition on arguments).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A well-formed request that has no answer (infeasible instance, budget
/// exceeded, iteration cap hit).
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct VertexId {
  std::uint32_t value = 0;
  friend constexpr auto operator<=>(VertexId, VertexId) = default;
};

struct EdgeId {
  std::uint32_t value = 0;
  friend constexpr auto operator<=>(EdgeId, EdgeId) = default;
};

struct Edge {
  EdgeId id;
  VertexId tail;
  VertexId head;
  Rational cost;

  bool is_loop() const { return tail == head; }
};

enum class Direction { forward, backward };
enum class PathMetric { cost, hops };

/// Directed multigraph with stable vertex and edge identities. Immutable once
/// built; vertices are kept in ascending id order and edges in ascending id
/// order, so a vertex's position (its "index") is its rank.
///
/// Self-loops are stored but never appear in adjacency lists.
class Digraph {
 public:
  Digraph() = default;
  Digraph(std::vector<VertexId> vertices, std::vector<Edge> edges,
          std::map<VertexId, std::string> labels = {});

  std::size_t num_vertices() const { return vertices_.size(); }
  std::size_t num_edges() const { return edges_.size(); }
  std::span<const VertexId> vertices() const { return vertices_; }
  std::span<const Edge> edges() const { return edges_; }

  bool has_vertex(VertexId v) const { return find_vertex(v).has_value(); }
  bool has_edge(EdgeId e) const { return find_edge(e).has_value(); }
  std::optional<std::size_t> find_vertex(VertexId v) const;
  std::optional<std::size_t> find_edge(EdgeId e) const;
  /// Throws InputError for an undeclared vertex.
  std::size_t vertex_index(VertexId v) const;
  std::size_t edge_index(EdgeId e) const;
  const Edge& edge(EdgeId e) const { return edges_[edge_index(e)]; }

  std::size_t tail_index(std::size_t edge_index) const { return tails_[edge_index]; }
  std::size_t head_index(std::size_t edge_index) const { return heads_[edge_index]; }

  /// Indices of non-loop edges leaving / entering the vertex at `vertex_index`.
  std::span<const std::uint32_t> out_edges(std::size_t vertex_index) const;
  std::span<const std::uint32_t> in_edges(std::size_t vertex_index) const;

  const std::map<VertexId, std::string>& labels() const { return labels_; }
  std::string display_name(VertexId v) const;

  Rational total_cost() const;
  Rational cost_of(std::span<const EdgeId> edges) const;

  /// Smallest id strictly greater than every vertex (edge) id in the graph.
  VertexId fresh_vertex_id() const;
  EdgeId fresh_edge_id() const;

 private:
  std::vector<VertexId> vertices_;
  std::vector<Edge> edges_;
  std::vector<std::uint32_t> tails_, heads_;
  std::vector<std::uint32_t> out_offsets_, out_list_;
  std::vector<std::uint32_t> in_offsets_, in_list_;
  std::map<VertexId, std::string> labels_;
};

/// δ⁺(side): the edges leaving `side`, with their total capacity.
struct Cut {
  std::vector<VertexId> side;
  std::vector<EdgeId> crossing_edges;
  Rational capacity;
};

/// Masks over vertex / edge indices restricting a traversal. Empty means "all".
struct TraversalFilter {
  std::span<const char> allowed_vertices;
  std::span<const char> allowed_edges;
};

/// Index-level reachability: mark[i] != 0 iff vertex i is reachable from (or,
/// backward, can reach) one of `sources` using allowed vertices and edges.
std::vector<char> reach_mask(const Digraph& g, std::span<const std::size_t> sources,
                             Direction direction, TraversalFilter filter = {});

std::vector<VertexId> reachable_set(const Digraph& g, std::span<const VertexId> sources,
                                    Direction direction);

/// Minimum s–t cut under the given capacities (indexed by edge position).
/// The returned side is the set of vertices reachable from s in the residual
/// network of a maximum flow.
Cut min_cut(const Digraph& g, std::span<const Rational> capacities, VertexId s, VertexId t);
Cut min_cut(const Digraph& g, const std::map<EdgeId, Rational>& capacities, VertexId s,
            VertexId t);

Digraph contract(const Digraph& g, std::span<const VertexId> block, VertexId new_id);
Digraph reverse(const Digraph& g);

/// Weakly connected components, each sorted, ordered by smallest member.
std::vector<std::vector<VertexId>> weak_components(const Digraph& g);

/// Minimum-metric u→v dipath as a sequence of edge ids. Among optimal paths
/// the fewest-edge ones are preferred, and among those the lexicographically
/// smallest edge-id sequence. nullopt when v is unreachable; empty when u == v.
std::optional<std::vector<EdgeId>> shortest_dipath(const Digraph& g, VertexId u, VertexId v,
                                                   PathMetric metric,
                                                   TraversalFilter filter = {});

/// Graph spanned by the given edges: V(E') plus E'.
Digraph edge_subgraph(const Digraph& g, std::span<const EdgeId> edges);
/// Graph induced on `vertices` (every edge with both endpoints inside).
Digraph induced_subgraph(const Digraph& g, std::span<const VertexId> vertices);
/// Same vertex set, keeping only edges whose position has keep[i] != 0.
Digraph filter_edges(const Digraph& g, std::span<const char> keep);

/// Sorted, deduplicated copy.
template <class T>
std::vector<T> sorted_unique(std::vector<T> values) {
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  return values;
}

}  // namespace dsf

template <>
struct std::hash<dsf::VertexId> {
  std::size_t operator()(dsf::VertexId v) const noexcept { return std::hash<std::uint32_t>{}(v.value); }
};
template <>
struct std::hash<dsf::EdgeId> {
  std::size_t operator()(dsf::EdgeId e) const noexcept { return std::hash<std::uint32_t>{}(e.value); }
};
