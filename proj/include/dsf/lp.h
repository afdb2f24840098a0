#pragma once

#include "dsf/instance.h"

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace dsf {

enum class Relation { greater_equal, equal };

/// min objective·x subject to the constraints and x ≥ lower.
struct LinearProgram {
  struct Term {
    std::size_t var;
    Rational coef;
  };
  struct Constraint {
    std::vector<Term> terms;
    Relation relation = Relation::greater_equal;
    Rational rhs;
  };

  std::vector<std::string> names;
  std::vector<Rational> lower;
  std::vector<Rational> objective;
  std::vector<Constraint> constraints;

  std::size_t add_variable(std::string name, Rational lower_bound = 0, Rational cost = 0);
  void add_constraint(std::vector<Term> terms, Relation relation, Rational rhs);
  std::size_t num_vars() const { return names.size(); }
};

enum class LpStatus { optimal, infeasible, unbounded };

struct LpResult {
  LpStatus status = LpStatus::infeasible;
  std::vector<Rational> values;
  Rational objective;
};

/// Exact two-phase primal simplex with Bland's rule.
LpResult solve_lp(const LinearProgram& lp);

/// Human-readable listing for debugging; not a stable format.
std::string dump_lp(const LinearProgram& lp);

enum class DemandDirection { from_root, to_root };

/// A flow requirement between the root and `terminal`.
struct Demand {
  VertexId terminal;
  Rational required;
  DemandDirection direction = DemandDirection::from_root;
};

/// For from_root demands the cut side contains the root; for to_root demands
/// it contains the terminal. Either way crossing_edges = δ⁺(side).
struct ViolatedCut {
  std::size_t demand;  // index into the demand list
  Cut cut;
  Rational shortfall;  // required − capacity > 0
};

/// Min-cut separation: one violated cut per deficient demand, in demand order.
/// Edges missing from `x` count as 0. An empty result certifies feasibility.
std::vector<ViolatedCut> separate_cut_constraints(const Digraph& g,
                                                  const std::map<EdgeId, Rational>& x,
                                                  VertexId root,
                                                  std::span<const Demand> demands);

/// Den-LP / DST-LP point. Edges and pairs absent from the maps are 0.
struct FractionalSolution {
  std::map<EdgeId, Rational> x;
  std::map<PairId, Rational> y_s;
  std::map<PairId, Rational> y_t;
  Rational objective;
};

struct CutLoopStats {
  std::size_t rounds = 0;
  std::size_t cuts = 0;
  bool exact_fallback = false;
};

struct DenLpOptions {
  /// Among optimal points prefer one minimising max_i y_i, which spreads
  /// the normalised demand over as many pairs as the optimum allows.
  bool balance = true;
};

/// Optimal Den-LP point at `root`; nullopt when no pair can route through it.
/// Pairs that cannot route through the root have y fixed to 0.
std::optional<FractionalSolution> solve_den_lp(const Instance& inst, VertexId root,
                                               const DenLpOptions& options = {},
                                               CutLoopStats* stats = nullptr);

/// The point x_e = 1/|D_H| on H, y = 1/|D_H| on covered pairs.
FractionalSolution den_lp_from_junction(const Instance& inst, const JunctionTree& tree);

/// Everything wrong with `sol` as a Den-LP point at `root`: sign and coupling
/// violations plus every deficient cut, as messages. Empty means feasible.
std::vector<std::string> den_lp_violations(const Instance& inst, VertexId root,
                                           const FractionalSolution& sol);

/// DST-LP optimum: min c·x with x(δ⁺(S)) ≥ 1 whenever root ∈ S, t ∉ S.
Rational solve_dst_lp(const Digraph& g, VertexId root, std::span<const VertexId> terminals,
                      CutLoopStats* stats = nullptr);

}  // namespace dsf
