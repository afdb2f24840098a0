#include "dsf/pipeline.h"

#include <deque>
#include <set>

namespace dsf {

namespace {

std::vector<EdgeId> walk_through(const Digraph& g, const std::vector<char>& keep, VertexId s,
                                 VertexId root, VertexId t) {
  TraversalFilter filter{{}, keep};
  auto in = shortest_dipath(g, s, root, PathMetric::cost, filter);
  auto out = shortest_dipath(g, root, t, PathMetric::cost, filter);
  if (!in || !out) throw std::logic_error("junction tree does not route a covered pair");
  in->insert(in->end(), out->begin(), out->end());
  return *in;
}

}  // namespace

Rational harmonic_number(std::size_t k) {
  Rational h = 0;
  for (std::size_t i = 1; i <= k; ++i) h += Rational(1, static_cast<unsigned long>(i));
  return h;
}

SolveResult solve_dsf(const Instance& inst, const SolveOptions& options) {
  auto feas = validate(inst);
  if (!feas.feasible)
    throw DomainError("infeasible instance: pair " + inst.pair_name(feas.unreachable.front()) +
                      " has no dipath");
  const auto& g = inst.graph();
  SolveResult out;
  auto& trace = out.trace;
  std::vector<PairId> remaining;
  for (const auto& p : inst.pairs()) remaining.push_back(p.id);
  std::vector<EdgeId> all_edges;
  std::map<PairId, std::vector<EdgeId>> certificates;
  trace.harmonic_sum = 0;

  while (!remaining.empty()) {
    auto sub = inst.with_pairs(remaining);
    auto found = find_min_density_junction(
        sub, {.strategy = options.strategy, .parallelism = options.parallelism,
              .check_every_root = options.check_every_root});
    CoverIteration it;
    it.remaining = remaining.size();
    it.density = found.tree.density;
    it.removed = found.tree.covered;
    it.junction_ledger = std::move(found.ledger);
    it.roots_feasible = found.roots_feasible;
    it.scaled_checks = found.scaled_checks;
    it.junction_failures = std::move(found.failures);

    std::vector<char> keep(g.num_edges(), 0);
    for (auto e : found.tree.edges) keep[g.edge_index(e)] = 1;
    for (auto id : it.removed) {
      const auto& p = inst.pair(id);
      certificates[id] = walk_through(g, keep, p.s, found.tree.root, p.t);
    }
    all_edges.insert(all_edges.end(), found.tree.edges.begin(), found.tree.edges.end());

    std::vector<PairId> next;
    std::set_difference(remaining.begin(), remaining.end(), it.removed.begin(), it.removed.end(),
                        std::back_inserter(next));
    if (next.size() + it.removed.size() != remaining.size())
      trace.failures.push_back("iteration " + std::to_string(trace.iterations.size()) +
                               " removed a pair that was not remaining");
    if (it.removed.empty()) throw std::logic_error("junction covers no pair");
    trace.harmonic_sum += Rational(static_cast<unsigned long>(it.removed.size()),
                                   static_cast<unsigned long>(it.remaining));
    it.tree = std::move(found.tree);
    trace.iterations.push_back(std::move(it));
    remaining = std::move(next);
  }

  auto& sol = out.solution;
  sol.edges = sorted_unique(std::move(all_edges));
  sol.cost = g.cost_of(sol.edges);
  sol.certificates = std::move(certificates);

  Rational charged = 0;
  std::set<PairId> seen;
  for (const auto& it : trace.iterations) {
    charged += it.density * Rational(static_cast<unsigned long>(it.removed.size()));
    for (auto id : it.removed)
      if (!seen.insert(id).second)
        trace.failures.push_back("pair " + inst.pair_name(id) + " removed twice");
  }
  if (seen.size() != inst.k()) trace.failures.push_back("some pair was never removed");
  trace.ledger.push_back(check_le("c(solution) <= sum_j |D_j| * density_j", sol.cost, charged));
  trace.ledger.push_back(
      check_le("sum_j (k_j - k_{j+1}) / k_j <= H_k", trace.harmonic_sum, harmonic_number(inst.k())));
  return out;
}

VerifyReport verify_solution(const Instance& inst, const Solution& sol) {
  const auto& g = inst.graph();
  VerifyReport rep;
  auto fail = [&](std::string msg) {
    rep.pass = false;
    rep.failures.push_back(std::move(msg));
  };

  std::set<EdgeId> in_solution;
  rep.recomputed_cost = 0;
  for (auto e : sol.edges) {
    if (!g.has_edge(e)) {
      fail("edge id " + std::to_string(e.value) + " is not in the graph");
      continue;
    }
    if (!in_solution.insert(e).second) fail("edge " + inst.edge_name(e) + " listed twice");
    else rep.recomputed_cost += g.edge(e).cost;
  }
  if (rep.recomputed_cost != sol.cost)
    fail("stated cost " + to_string(sol.cost) + " but edges sum to " + to_string(rep.recomputed_cost));

  // Plain BFS over the solution edges, independent of the certificates.
  std::map<VertexId, std::vector<VertexId>> out;
  for (auto e : in_solution) out[g.edge(e).tail].push_back(g.edge(e).head);
  for (const auto& p : inst.pairs()) {
    std::set<VertexId> seen{p.s};
    std::deque<VertexId> queue{p.s};
    while (!queue.empty()) {
      auto v = queue.front();
      queue.pop_front();
      for (auto w : out[v])
        if (seen.insert(w).second) queue.push_back(w);
    }
    if (!seen.count(p.t)) fail("pair " + inst.pair_name(p.id) + ": sink not reachable in solution");
  }

  for (const auto& p : inst.pairs()) {
    const auto name = inst.pair_name(p.id);
    auto it = sol.certificates.find(p.id);
    if (it == sol.certificates.end()) {
      fail("pair " + name + ": no certificate");
      continue;
    }
    VertexId at = p.s;
    bool ok = true;
    for (auto e : it->second) {
      if (!in_solution.count(e)) {
        fail("pair " + name + ": certificate uses edge " +
             (g.has_edge(e) ? inst.edge_name(e) : std::to_string(e.value)) + " outside the solution");
        ok = false;
        break;
      }
      if (g.edge(e).tail != at) {
        fail("pair " + name + ": certificate breaks at edge " + inst.edge_name(e));
        ok = false;
        break;
      }
      at = g.edge(e).head;
    }
    if (ok && at != p.t) fail("pair " + name + ": certificate ends at " + inst.vertex_name(at));
  }
  for (const auto& [id, walk] : sol.certificates) {
    bool known = false;
    for (const auto& p : inst.pairs()) known = known || p.id == id;
    if (!known) fail("certificate for unknown pair id " + std::to_string(id.value));
  }
  return rep;
}

RatioReport ratio_report(const Instance& inst, const Solution& sol, const CoverTrace& trace,
                         const OracleResult& oracle) {
  RatioReport rep;
  rep.cost = sol.cost;
  rep.opt = oracle.opt_cost;
  if (sgn(rep.opt) > 0) rep.ratio = rep.cost / rep.opt;
  else if (sgn(rep.cost) == 0) rep.ratio = Rational(1);
  rep.harmonic_sum = trace.harmonic_sum;
  rep.harmonic_k = harmonic_number(inst.k());

  Rational charged = 0;
  Rational worst = 0;
  for (const auto& it : trace.iterations) {
    charged += it.density * Rational(static_cast<unsigned long>(it.removed.size()));
    if (sgn(rep.opt) > 0) {
      Rational r = it.density * Rational(static_cast<unsigned long>(it.remaining)) / rep.opt;
      worst = std::max(worst, r);
      rep.iteration_ratios.push_back(r);
    }
  }
  rep.ledger.push_back(check_le("OPT <= c(solution)", rep.opt, rep.cost));
  rep.ledger.push_back(check_le("c(solution) <= sum_j |D_j| * density_j", rep.cost, charged));
  rep.ledger.push_back(check_le("sum_j (k_j - k_{j+1}) / k_j <= H_k", rep.harmonic_sum, rep.harmonic_k));
  if (sgn(rep.opt) > 0)
    rep.ledger.push_back(check_le("sum_j |D_j| * density_j <= max_j(density_j k_j / OPT) * harmonic sum * OPT",
                                  charged, worst * rep.harmonic_sum * rep.opt));
  return rep;
}

}  // namespace dsf
