#pragma once

#include "dsf/junction.h"
#include "dsf/oracle.h"

#include <optional>

namespace dsf {

struct CoverIteration {
  JunctionTree tree;
  std::vector<PairId> removed;  // D_j, equal to tree.covered
  std::size_t remaining = 0;    // k_j: pairs left before this iteration
  Rational density;
  std::vector<Inequality> junction_ledger;
  std::size_t roots_feasible = 0;
  std::size_t scaled_checks = 0;
  std::vector<std::string> junction_failures;
};

struct CoverTrace {
  std::vector<CoverIteration> iterations;
  Rational harmonic_sum;  // Σ_j (k_j − k_{j+1}) / k_j
  std::vector<Inequality> ledger;
  std::vector<std::string> failures;  // trace invariants that did not hold
};

struct SolveOptions {
  DstStrategy strategy = DstStrategy::exact_fpt;
  std::size_t parallelism = 1;
  bool check_every_root = true;
};

struct SolveResult {
  Solution solution;
  CoverTrace trace;
};

/// Greedy covering by minimum-density junctions until no pair remains.
/// Throws DomainError naming an unreachable pair before looping.
SolveResult solve_dsf(const Instance& inst, const SolveOptions& options = {});

/// H_k = 1 + 1/2 + … + 1/k.
Rational harmonic_number(std::size_t k);

struct VerifyReport {
  bool pass = true;
  Rational recomputed_cost;
  std::vector<std::string> failures;
};

/// Audits reachability inside sol.edges from scratch, then every certificate
/// walk edge by edge, then the stated cost.
VerifyReport verify_solution(const Instance& inst, const Solution& sol);

struct RatioReport {
  Rational cost;
  Rational opt;
  std::optional<Rational> ratio;  // nullopt when opt = 0 < cost
  /// density_j · k_j / OPT per iteration; the greedy charges each pair this much.
  std::vector<Rational> iteration_ratios;
  Rational harmonic_sum;
  Rational harmonic_k;
  std::vector<Inequality> ledger;
};

RatioReport ratio_report(const Instance& inst, const Solution& sol, const CoverTrace& trace,
                         const OracleResult& oracle);

}  // namespace dsf
