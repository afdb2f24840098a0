#include "dsf/oracle.h"

#include "dsf/lp.h"

#include <bit>
#include <limits>
#include <queue>

namespace dsf {

namespace {

using i128 = __int128;

// Edges (u,v) with some s_i reaching u and v reaching t_i. Every edge of a
// minimal DSF solution or junction lies on such a walk.
std::vector<std::size_t> relevant_edges(const Instance& inst) {
  const auto& g = inst.graph();
  std::vector<char> keep(g.num_edges(), 0);
  for (const auto& p : inst.pairs()) {
    std::size_t s = g.vertex_index(p.s), t = g.vertex_index(p.t);
    auto fwd = reach_mask(g, {&s, 1}, Direction::forward);
    auto bwd = reach_mask(g, {&t, 1}, Direction::backward);
    for (std::size_t e = 0; e < g.num_edges(); ++e)
      if (!g.edges()[e].is_loop() && fwd[g.tail_index(e)] && bwd[g.head_index(e)]) keep[e] = 1;
  }
  std::vector<std::size_t> out;
  for (std::size_t e = 0; e < g.num_edges(); ++e)
    if (keep[e]) out.push_back(e);
  return out;
}

void require_feasible(const Instance& inst) {
  auto report = validate(inst);
  if (!report.feasible)
    throw DomainError("instance is infeasible: pair " + inst.pair_name(report.unreachable.front()) +
                      " has no dipath");
}

std::vector<std::int64_t> scaled_costs(const Digraph& g, std::span<const std::size_t> edges) {
  std::vector<Rational> costs;
  for (auto e : edges) costs.push_back(g.edges()[e].cost);
  auto scaled = scale_to_integers(costs);
  if (!scaled) throw DomainError("edge costs too large for the exact oracle");
  return scaled->values;
}

// Branch and bound over the relevant edges, local indices throughout.
class DsfSearch {
 public:
  DsfSearch(std::size_t n, std::vector<std::pair<std::size_t, std::size_t>> arcs,
            std::vector<std::int64_t> cost, std::vector<std::pair<std::size_t, std::size_t>> pairs)
      : n_(n), arcs_(std::move(arcs)), cost_(std::move(cost)), pairs_(std::move(pairs)),
        state_(arcs_.size(), 0), out_(n) {
    for (std::size_t e = 0; e < arcs_.size(); ++e) out_[arcs_[e].first].push_back(e);
  }

  std::vector<std::size_t> run() {
    for (std::size_t e = 0; e < arcs_.size(); ++e)
      if (cost_[e] == 0) state_[e] = kIn;  // free edges never hurt
    best_ = std::numeric_limits<std::int64_t>::max();
    dfs(0);
    return best_set_;
  }

  std::uint64_t explored() const { return explored_; }

 private:
  static constexpr char kOpen = 0, kIn = 1, kOut = 2;
  static constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;

  // Cheapest s→t walk where included edges are free and excluded ones absent;
  // fills `path` with its open edges.
  std::int64_t distance(std::size_t s, std::size_t t, std::vector<std::size_t>* path) {
    dist_.assign(n_, kInf);
    via_.assign(n_, SIZE_MAX);
    using Item = std::pair<std::int64_t, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    dist_[s] = 0;
    pq.emplace(0, s);
    while (!pq.empty()) {
      auto [d, u] = pq.top();
      pq.pop();
      if (d != dist_[u]) continue;
      if (u == t) break;
      for (auto e : out_[u]) {
        if (state_[e] == kOut) continue;
        const auto w = arcs_[e].second;
        const std::int64_t nd = d + (state_[e] == kIn ? 0 : cost_[e]);
        if (nd < dist_[w]) {
          dist_[w] = nd;
          via_[w] = e;
          pq.emplace(nd, w);
        }
      }
    }
    if (path && dist_[t] < kInf) {
      path->clear();
      for (auto x = t; x != s; x = arcs_[via_[x]].first)
        if (state_[via_[x]] == kOpen) path->push_back(via_[x]);
      std::reverse(path->begin(), path->end());
    }
    return dist_[t];
  }

  void dfs(std::int64_t included) {
    ++explored_;
    if (included >= best_) return;
    std::int64_t worst = 0;
    std::vector<std::size_t> branch_path;
    for (const auto& [s, t] : pairs_) {
      std::vector<std::size_t> path;
      const auto d = distance(s, t, &path);
      if (d >= kInf) return;
      if (d > worst) {
        worst = d;
        branch_path = std::move(path);
      }
    }
    if (included + worst >= best_) return;
    if (worst == 0) {
      best_ = included;
      best_set_.clear();
      for (std::size_t e = 0; e < arcs_.size(); ++e)
        if (state_[e] == kIn) best_set_.push_back(e);
      return;
    }
    const auto e = branch_path.front();
    state_[e] = kIn;
    dfs(included + cost_[e]);
    state_[e] = kOut;
    dfs(included);
    state_[e] = kOpen;
  }

  std::size_t n_;
  std::vector<std::pair<std::size_t, std::size_t>> arcs_;
  std::vector<std::int64_t> cost_;
  std::vector<std::pair<std::size_t, std::size_t>> pairs_;
  std::vector<char> state_;
  std::vector<std::vector<std::size_t>> out_;
  std::vector<std::int64_t> dist_;
  std::vector<std::size_t> via_;
  std::int64_t best_ = 0;
  std::vector<std::size_t> best_set_;
  std::uint64_t explored_ = 0;
};

}  // namespace

OracleResult brute_force_dsf(const Instance& inst, std::size_t edge_budget) {
  require_feasible(inst);
  const auto& g = inst.graph();
  const auto rel = relevant_edges(inst);
  if (rel.size() > edge_budget)
    throw DomainError("brute force refused: " + std::to_string(rel.size()) +
                      " relevant edges exceed the budget of " + std::to_string(edge_budget));
  std::vector<std::pair<std::size_t, std::size_t>> arcs;
  for (auto e : rel) arcs.emplace_back(g.tail_index(e), g.head_index(e));
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (const auto& p : inst.pairs()) pairs.emplace_back(g.vertex_index(p.s), g.vertex_index(p.t));
  DsfSearch search(g.num_vertices(), std::move(arcs), scaled_costs(g, rel), std::move(pairs));
  auto chosen = search.run();
  std::vector<EdgeId> edges;
  for (auto local : chosen) edges.push_back(g.edges()[rel[local]].id);
  OracleResult out;
  out.witness = make_solution(inst, std::move(edges));
  out.opt_cost = out.witness.cost;
  out.explored = search.explored();
  return out;
}

Solution exact_dst(const Digraph& g, VertexId root, std::span<const VertexId> terminals) {
  const std::size_t r = g.vertex_index(root);
  const auto from_root = reach_mask(g, {&r, 1}, Direction::forward);
  std::vector<std::size_t> term;
  for (auto t : terminals) {
    const auto ti = g.vertex_index(t);
    if (!from_root[ti]) throw DomainError("terminal " + g.display_name(t) + " is unreachable from the root");
    if (ti != r) term.push_back(ti);
  }
  term = sorted_unique(std::move(term));
  if (term.size() > kMaxExactTerminals)
    throw DomainError("exact DST refused: " + std::to_string(term.size()) + " terminals exceed " +
                      std::to_string(kMaxExactTerminals));
  Solution sol;
  sol.cost = 0;
  if (term.empty()) return sol;

  std::vector<std::size_t> all(g.num_edges());
  for (std::size_t e = 0; e < all.size(); ++e) all[e] = e;
  const auto cost = scaled_costs(g, all);
  const std::size_t n = g.num_vertices();
  const std::size_t K = term.size();
  const std::size_t full = (std::size_t{1} << K) - 1;
  constexpr i128 kInf = static_cast<i128>(1) << 100;

  // dp[S][v]: cheapest subgraph in which v reaches every terminal of S.
  struct Back {
    std::uint8_t kind = 0;  // 0 none, 1 terminal itself, 2 split, 3 edge
    std::uint32_t data = 0;
  };
  std::vector<i128> dp((full + 1) * n, kInf);
  std::vector<Back> back((full + 1) * n);
  auto at = [n](std::size_t S, std::size_t v) { return S * n + v; };

  for (std::size_t S = 1; S <= full; ++S) {
    if (std::has_single_bit(S)) {
      const auto v = term[static_cast<std::size_t>(std::countr_zero(S))];
      dp[at(S, v)] = 0;
      back[at(S, v)] = {1, 0};
    } else {
      for (std::size_t v = 0; v < n; ++v) {
        for (std::size_t A = (S - 1) & S; A > 0; A = (A - 1) & S) {
          const std::size_t B = S ^ A;
          if (A < B) continue;  // each split once
          const i128 c = dp[at(A, v)] + dp[at(B, v)];
          if (c < dp[at(S, v)]) {
            dp[at(S, v)] = c;
            back[at(S, v)] = {2, static_cast<std::uint32_t>(A)};
          }
        }
      }
    }
    // Pull along edges: dp[S][u] ≤ c(u,v) + dp[S][v].
    using Item = std::pair<i128, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    for (std::size_t v = 0; v < n; ++v)
      if (dp[at(S, v)] < kInf) pq.emplace(dp[at(S, v)], v);
    while (!pq.empty()) {
      auto [d, v] = pq.top();
      pq.pop();
      if (d != dp[at(S, v)]) continue;
      for (auto e : g.in_edges(v)) {
        const auto u = g.tail_index(e);
        const i128 c = d + cost[e];
        if (c < dp[at(S, u)]) {
          dp[at(S, u)] = c;
          back[at(S, u)] = {3, static_cast<std::uint32_t>(e)};
          pq.emplace(c, u);
        }
      }
    }
  }

  std::vector<char> used(g.num_edges(), 0);
  std::vector<std::pair<std::size_t, std::size_t>> stack{{full, r}};
  while (!stack.empty()) {
    auto [S, v] = stack.back();
    stack.pop_back();
    const auto& b = back[at(S, v)];
    if (b.kind == 2) {
      stack.emplace_back(b.data, v);
      stack.emplace_back(S ^ b.data, v);
    } else if (b.kind == 3) {
      used[b.data] = 1;
      stack.emplace_back(S, g.head_index(b.data));
    } else if (b.kind == 0) {
      throw std::logic_error("exact_dst: broken back-pointer");
    }
  }
  i128 total = 0;
  for (std::size_t e = 0; e < used.size(); ++e)
    if (used[e]) {
      sol.edges.push_back(g.edges()[e].id);
      total += cost[e];
    }
  if (total != dp[at(full, r)]) throw std::logic_error("exact_dst: tree cost differs from the table");
  sol.cost = g.cost_of(sol.edges);
  return sol;
}

DensityOracleResult brute_force_min_density_junction(const Instance& inst,
                                                     std::size_t edge_budget) {
  const auto& g = inst.graph();
  const auto rel = relevant_edges(inst);
  if (rel.size() > edge_budget)
    throw DomainError("density oracle refused: " + std::to_string(rel.size()) +
                      " relevant edges exceed the budget of " + std::to_string(edge_budget));
  if (rel.size() > 30) throw DomainError("density oracle supports at most 30 edges");
  // Local vertex numbering over endpoints of relevant edges.
  std::vector<int> local(g.num_vertices(), -1);
  std::vector<std::size_t> global;
  auto loc = [&](std::size_t v) {
    if (local[v] < 0) {
      local[v] = static_cast<int>(global.size());
      global.push_back(v);
    }
    return static_cast<std::size_t>(local[v]);
  };
  std::vector<std::pair<std::size_t, std::size_t>> arcs;
  for (auto e : rel) {
    auto u = loc(g.tail_index(e));
    auto v = loc(g.head_index(e));
    arcs.emplace_back(u, v);
  }
  const std::size_t n = global.size();
  if (n > 64) throw DomainError("density oracle supports at most 64 vertices");
  std::vector<std::pair<int, int>> pairs;
  for (const auto& p : inst.pairs())
    pairs.emplace_back(local[g.vertex_index(p.s)], local[g.vertex_index(p.t)]);
  const auto cost = scaled_costs(g, rel);

  const std::size_t m = rel.size();
  std::vector<std::uint64_t> out(n), in(n);
  auto closure = [&](int start, const std::vector<std::uint64_t>& adj) -> std::uint64_t {
    if (start < 0) return 0;
    std::uint64_t seen = std::uint64_t{1} << start, frontier = seen;
    while (frontier) {
      std::uint64_t next = 0;
      for (auto f = frontier; f; f &= f - 1) next |= adj[static_cast<std::size_t>(std::countr_zero(f))];
      frontier = next & ~seen;
      seen |= next;
    }
    return seen;
  };

  bool found = false;
  std::int64_t best_cost = 0;
  std::size_t best_count = 0, best_root = 0;
  std::uint64_t best_mask = 0;
  std::vector<std::uint64_t> fwd(pairs.size()), bwd(pairs.size());
  // Bit order follows edge id: compare the sorted edge-id lists of two masks.
  auto lex_less = [&](std::uint64_t a, std::uint64_t b) {
    while (a && b) {
      const int la = std::countr_zero(a), lb = std::countr_zero(b);
      if (la != lb) return la < lb;
      a &= a - 1;
      b &= b - 1;
    }
    return a == 0 && b != 0;
  };
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << m); ++mask) {
    std::fill(out.begin(), out.end(), 0);
    std::fill(in.begin(), in.end(), 0);
    std::int64_t c = 0;
    for (auto f = mask; f; f &= f - 1) {
      const auto e = static_cast<std::size_t>(std::countr_zero(f));
      out[arcs[e].first] |= std::uint64_t{1} << arcs[e].second;
      in[arcs[e].second] |= std::uint64_t{1} << arcs[e].first;
      c += cost[e];
    }
    std::uint64_t any = 0;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      fwd[i] = closure(pairs[i].first, out);
      bwd[i] = closure(pairs[i].second, in);
      any |= fwd[i] & bwd[i];
    }
    for (auto f = any; f; f &= f - 1) {
      const auto r = static_cast<std::size_t>(std::countr_zero(f));
      std::size_t q = 0;
      for (std::size_t i = 0; i < pairs.size(); ++i) q += (fwd[i] & bwd[i]) >> r & 1;
      bool better = !found;
      if (!better) {
        const i128 lhs = static_cast<i128>(c) * static_cast<i128>(best_count);
        const i128 rhs = static_cast<i128>(best_cost) * static_cast<i128>(q);
        if (lhs != rhs) better = lhs < rhs;
        else if (q != best_count) better = q > best_count;
        else if (mask != best_mask) better = lex_less(mask, best_mask);
        else better = g.vertices()[global[r]] < g.vertices()[global[best_root]];
      }
      if (better) {
        found = true;
        best_cost = c;
        best_count = q;
        best_mask = mask;
        best_root = r;
      }
    }
  }
  if (!found) throw DomainError("no root covers any pair");
  const auto r = best_root;
  std::vector<EdgeId> edges;
  std::vector<PairId> covered;
  for (auto f = best_mask; f; f &= f - 1)
    edges.push_back(g.edges()[rel[static_cast<std::size_t>(std::countr_zero(f))]].id);
  std::fill(out.begin(), out.end(), 0);
  std::fill(in.begin(), in.end(), 0);
  for (auto f = best_mask; f; f &= f - 1) {
    const auto e = static_cast<std::size_t>(std::countr_zero(f));
    out[arcs[e].first] |= std::uint64_t{1} << arcs[e].second;
    in[arcs[e].second] |= std::uint64_t{1} << arcs[e].first;
  }
  for (std::size_t i = 0; i < pairs.size(); ++i)
    if ((closure(pairs[i].first, out) & closure(pairs[i].second, in)) >> r & 1)
      covered.push_back(inst.pairs()[i].id);
  return make_junction_tree(inst, g.vertices()[global[r]], std::move(edges), std::move(covered));
}

Rational dst_lp_lower_bound(const Digraph& g, VertexId root, std::span<const VertexId> terminals) {
  return solve_dst_lp(g, root, terminals);
}

}  // namespace dsf
