#pragma once

#include "dsf/graph.h"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dsf {

struct PairId {
  std::uint32_t value = 0;
  friend constexpr auto operator<=>(PairId, PairId) = default;
};

struct TerminalPair {
  PairId id;
  VertexId s;
  VertexId t;
  friend bool operator==(const TerminalPair&, const TerminalPair&) = default;
};

/// A digraph plus k terminal pairs. Vertex names live in the graph labels;
/// edge and pair names are kept here so files round-trip.
class Instance {
 public:
  Instance() = default;
  Instance(Digraph graph, std::vector<TerminalPair> pairs,
           std::map<EdgeId, std::string> edge_names = {},
           std::map<PairId, std::string> pair_names = {});

  const Digraph& graph() const { return graph_; }
  std::span<const TerminalPair> pairs() const { return pairs_; }
  std::size_t k() const { return pairs_.size(); }
  const TerminalPair& pair(PairId id) const;

  std::string edge_name(EdgeId e) const;
  std::string pair_name(PairId p) const;
  std::string vertex_name(VertexId v) const { return graph_.display_name(v); }
  std::optional<EdgeId> find_edge_by_name(std::string_view name) const;
  std::optional<VertexId> find_vertex_by_name(std::string_view name) const;
  std::optional<PairId> find_pair_by_name(std::string_view name) const;
  const std::map<EdgeId, std::string>& edge_names() const { return edge_names_; }
  const std::map<PairId, std::string>& pair_names() const { return pair_names_; }

  /// Same graph, only the listed pairs (ids preserved).
  Instance with_pairs(std::span<const PairId> keep) const;

  friend bool operator==(const Instance& a, const Instance& b);

 private:
  Digraph graph_;
  std::vector<TerminalPair> pairs_;
  std::map<EdgeId, std::string> edge_names_;
  std::map<PairId, std::string> pair_names_;
};

/// Convenience construction by name, mostly for fixtures. Ids are assigned in
/// declaration order.
class InstanceBuilder {
 public:
  VertexId vertex(const std::string& name);
  EdgeId edge(const std::string& tail, const std::string& head, const Rational& cost,
              std::string name = {});
  EdgeId edge(const std::string& tail, const std::string& head, long cost, std::string name = {}) {
    return edge(tail, head, Rational(cost), std::move(name));
  }
  PairId pair(const std::string& s, const std::string& t, std::string name = {});
  Instance build() const;

 private:
  std::map<std::string, VertexId> by_name_;
  std::vector<VertexId> vertices_;
  std::map<VertexId, std::string> labels_;
  std::vector<Edge> edges_;
  std::map<EdgeId, std::string> edge_names_;
  std::vector<TerminalPair> pairs_;
  std::map<PairId, std::string> pair_names_;
};

/// A DSF solution: edge set, its cost, and one certificate walk per pair.
struct Solution {
  std::vector<EdgeId> edges;  // sorted, unique
  Rational cost;
  std::map<PairId, std::vector<EdgeId>> certificates;
  friend bool operator==(const Solution&, const Solution&) = default;
};

/// Junction tree: every covered pair has an s→root and a root→t dipath inside
/// `edges`. It need not be a tree.
struct JunctionTree {
  VertexId root;
  std::vector<EdgeId> edges;   // sorted, unique
  std::vector<PairId> covered; // sorted, unique, nonempty
  Rational cost;
  Rational density;
  friend bool operator==(const JunctionTree&, const JunctionTree&) = default;
};

/// Fills cost and density from the edge set. Does not check the definition.
JunctionTree make_junction_tree(const Instance& inst, VertexId root, std::vector<EdgeId> edges,
                                std::vector<PairId> covered);

/// Reachability check of the definition on the tree's own edges. On failure
/// `why` (if given) names the first offending pair.
bool is_valid_junction_tree(const Instance& inst, const JunctionTree& tree,
                            std::string* why = nullptr);

/// Builds a Solution over `edges` with a cheapest certificate per pair.
/// Throws DomainError if some pair is not connected inside `edges`.
Solution make_solution(const Instance& inst, std::vector<EdgeId> edges);

/// Instance file error. `field` is a JSON pointer into the document, `line`
/// is 1-based (0 when unknown).
class ParseError : public DomainError {
 public:
  ParseError(const std::string& message, std::string field, std::size_t line);
  const std::string& field() const { return field_; }
  std::size_t line() const { return line_; }

 private:
  std::string field_;
  std::size_t line_;
};

/// Pairs with s == t are dropped; a note is appended to `warnings` if given.
Instance parse_instance(std::string_view text, std::vector<std::string>* warnings = nullptr);
std::string serialize_instance(const Instance& inst);

Solution parse_solution(std::string_view text, const Instance& inst);
std::string serialize_solution(const Solution& sol, const Instance& inst);

struct FeasibilityReport {
  bool feasible = true;
  std::vector<PairId> unreachable;
};

FeasibilityReport validate(const Instance& inst);

struct GridParams {
  int rows = 2;
  int cols = 2;
  std::uint64_t orientation_seed = 1;
  long cost_min = 1;
  long cost_max = 1;
  int k = 1;
  std::uint64_t pair_seed = 1;
  /// Each grid edge is bidirected with probability 1 / bidirected_one_in,
  /// otherwise it gets one direction at random.
  int bidirected_one_in = 3;
};

struct LayeredParams {
  int width = 1;   // edges per layer path
  int layers = 1;  // number of stacked paths
  /// Probability (in percent) that a connector exists at a given column;
  /// one connector per adjacent layer pair is always present.
  int density_percent = 50;
  std::uint64_t structure_seed = 1;
  std::uint64_t pair_seed = 1;
  long cost_min = 1;
  long cost_max = 10;
  int k = 1;
};

/// Thrown when no k feasible pairs are found within the rejection budget.
class GenerationError : public DomainError {
 public:
  using DomainError::DomainError;
};

Instance gen_grid(const GridParams& params);
Instance gen_layered_random(const LayeredParams& params);

/// |E| ≤ 3|V| − 6 on the simple undirected support (|V| ≥ 3).
bool satisfies_planar_edge_bound(const Digraph& g);

}  // namespace dsf

template <>
struct std::hash<dsf::PairId> {
  std::size_t operator()(dsf::PairId p) const noexcept { return std::hash<std::uint32_t>{}(p.value); }
};
