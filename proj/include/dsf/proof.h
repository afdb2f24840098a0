#pragma once

// Replay of the existence argument on a concrete solution: layering, 2-layered
// spanning trees, separator recursion and the one-path interval construction.
// Every step is re-checked on the data rather than trusted.

#include "dsf/instance.h"
#include "dsf/ledger.h"

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace dsf {

struct ClaimCheck {
  std::string name;
  bool holds = true;
  std::string detail;  // first counterexample, or a short summary
};

bool all_hold(const std::vector<ClaimCheck>& claims);

/// A dipath as its vertex sequence and the edges between consecutive vertices.
struct Dipath {
  std::vector<VertexId> vertices;
  std::vector<EdgeId> edges;
};

// --- layering -------------------------------------------------------------

struct LayerGraph {
  Digraph graph;
  VertexId root;
  /// G_0 has nothing to contract, so it gets a fresh root with a zero-cost
  /// edge into v_0. That edge is not part of E*.
  std::optional<EdgeId> virtual_edge;
  Rational cost;  // c(E(G_j)) over edges of E* only
};

struct Layering {
  VertexId base;
  std::vector<std::vector<VertexId>> layers;  // L_0..L_ℓ, each sorted
  std::vector<LayerGraph> layer_graphs;       // G_0..G_{max(ℓ−1, 0)}
  int layer_of(VertexId v) const;
};

/// Throws InputError unless e_star is weakly connected and contains v0.
Layering compute_layering(const Digraph& e_star, VertexId v0);

struct LayeringReport {
  std::vector<ClaimCheck> claims;
  std::vector<Inequality> ledger;
  std::map<PairId, int> witness;  // smallest j with an s→t dipath inside L_j ∪ L_{j+1}
  std::map<EdgeId, std::vector<int>> edge_graphs;  // which G_j contain each edge
};

/// Pairs of `inst` with both endpoints in e_star are checked; others skipped.
LayeringReport verify_layering(const Digraph& e_star, const Layering& layering,
                               const Instance& inst);

// --- 2-layered spanning trees ---------------------------------------------

struct TreeLink {
  VertexId parent;
  EdgeId edge;
  bool away = true;  // the edge points from parent to child
};

struct TwoLayeredTree {
  VertexId root;
  std::map<VertexId, TreeLink> parent;  // every vertex except the root
};

/// Root … v along the tree.
std::vector<VertexId> tree_path(const TwoLayeredTree& tree, VertexId v);

/// The tree path root … v cut into maximal runs of equal orientation, each
/// returned as a dipath in edge direction. Empty for v = root.
std::vector<Dipath> split_dipaths(const TwoLayeredTree& tree, VertexId v);

/// Spanning and at most two dipaths on every root path.
bool is_two_layered_tree(const Digraph& g, const TwoLayeredTree& tree, std::string* why = nullptr);

/// Out-arborescence from the root over what it reaches, then in-paths from
/// the rest. If that does not span, the mirror image is tried. Throws
/// DomainError when neither spans.
TwoLayeredTree build_two_layered_tree(const Digraph& g, VertexId root);

// --- separators -----------------------------------------------------------

/// First nondecreasing triple (by vertex id) whose root paths leave every
/// component of the undirected support with at most half the total weight.
/// Repeated entries stand for fewer paths. Throws DomainError if none works.
std::array<VertexId, 3> find_separator(const Digraph& g, const TwoLayeredTree& tree,
                                       const std::map<VertexId, Rational>& weights);

struct SeparatorComponent {
  std::vector<VertexId> vertices;  // C, root excluded
  Rational weight;
  std::array<VertexId, 3> u{};
  std::vector<Dipath> dipaths;     // S_j^C, root removed
  std::vector<PairId> captured;    // D_j^C
  std::vector<std::vector<VertexId>> children;
  std::vector<Rational> child_weights;
};

struct SeparatorLevel {
  int index = 0;
  std::vector<SeparatorComponent> components;
  std::vector<PairId> captured;  // D_j
};

struct SeparatorReport {
  std::vector<SeparatorLevel> levels;
  std::vector<ClaimCheck> claims;
  std::vector<Inequality> ledger;
  std::optional<int> good_level;  // first j with |D_j| ≥ k/(⌈log₂ k⌉+2)
};

/// Recursion on `g` (2-layered with witness `tree` rooted at `root`) for the
/// given pairs. Each level contracts its separator into the root; the child
/// tree is the parent's, cut where it first meets the separator.
SeparatorReport separator_recursion(const Digraph& g, const TwoLayeredTree& tree,
                                    std::span<const TerminalPair> pairs);

// --- one path -------------------------------------------------------------

struct IntervalPair {
  PairId id;
  VertexId a, b;              // first reachable / last reaching vertex of P
  std::size_t a_pos = 0, b_pos = 0;  // compressed positions
  Dipath to_path;             // P_{s_i}: s_i → a_i
  Dipath from_path;           // P_{t_i}: b_i → t_i
  bool access_avoids_path = true;
};

struct IntervalGroup {
  int j = 0;
  VertexId anchor;
  std::size_t anchor_pos = 0;
  std::vector<PairId> pairs;
};

struct IntervalSystem {
  Dipath path;                        // P as given
  std::vector<VertexId> compressed;   // the a_i / b_i vertices in path order
  std::vector<IntervalPair> pairs;
  std::vector<IntervalGroup> groups;
  std::vector<JunctionTree> trees;    // one per group, same order
  std::size_t compressed_length() const { return compressed.empty() ? 0 : compressed.size() - 1; }
};

struct OnePathReplay {
  IntervalSystem system;
  JunctionTree best;
  std::vector<ClaimCheck> claims;
  std::vector<Inequality> ledger;
  Rational tree_cost_sum;  // Σ_H c(H)
  Rational used_cost;      // c(P[min a, max b] ∪ access paths)
};

/// Throws InputError naming the first pair with no s→t dipath through P.
OnePathReplay one_path_replay(const Digraph& e_star, const Dipath& path,
                              std::span<const TerminalPair> pairs);

// --- full chain -----------------------------------------------------------

struct ExistenceReplay {
  JunctionTree tree;
  std::vector<ClaimCheck> claims;
  std::vector<Inequality> chain;
  std::size_t component = 0;   // weak component of E* that was used
  int layer = 0;               // j of G_j
  std::vector<PairId> layer_pairs;
  int level = 0;               // j*
  std::vector<VertexId> separator_component;
  std::vector<PairId> component_pairs;  // D_{j*}^C
  Dipath path;                 // Q
  std::vector<PairId> path_pairs;  // D*
  std::vector<Layering> layerings;
  std::vector<LayeringReport> layering_reports;
  SeparatorReport separator;
  OnePathReplay one_path;
};

/// Throws InputError if sol does not connect every pair.
ExistenceReplay existence_replay(const Instance& inst, const Solution& sol);

/// 2·6·(⌈log₂k⌉+2)·(10⌊log₂(2k)⌋+12)·c/k.
Rational existence_bound(std::size_t k, const Rational& cost);

}  // namespace dsf
