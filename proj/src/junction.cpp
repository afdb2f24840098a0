#include "dsf/junction.h"

#include "dsf/detail/parallel.h"

namespace dsf {

namespace {

Rational pow2(int e) {
  Rational r = 1;
  for (int i = 0; i < e; ++i) r *= 2;
  return r;
}

std::vector<VertexId> sinks_of(const Instance& inst, std::span<const PairId> ids) {
  std::vector<VertexId> out;
  for (auto id : ids) out.push_back(inst.pair(id).t);
  return sorted_unique(std::move(out));
}

std::vector<VertexId> sources_of(const Instance& inst, std::span<const PairId> ids) {
  std::vector<VertexId> out;
  for (auto id : ids) out.push_back(inst.pair(id).s);
  return sorted_unique(std::move(out));
}

}  // namespace

int bucket_index(const Rational& y) {
  if (sgn(y) <= 0) throw InputError("bucket_index needs y > 0");
  int j = 0;
  Rational threshold(1, 2);
  while (!(y > threshold)) {
    ++j;
    threshold /= 2;
  }
  return j;
}

BucketChoice bucket_theta(const std::map<PairId, Rational>& y_t, std::size_t k) {
  if (k == 0) throw InputError("bucket_theta needs k ≥ 1");
  Rational total = 0;
  for (const auto& [id, y] : y_t) {
    if (sgn(y) < 0 || y > 1) throw InputError("y values must lie in [0, 1]");
    total += y;
  }
  if (total != 1) throw InputError("y values must sum to 1");
  const int L = floor_log2(k);
  std::vector<BucketChoice> buckets(static_cast<std::size_t>(L) + 1);
  for (int j = 0; j <= L; ++j) {
    buckets[static_cast<std::size_t>(j)].theta = j;
    buckets[static_cast<std::size_t>(j)].mass = 0;
  }
  for (const auto& [id, y] : y_t) {
    if (sgn(y) == 0) continue;
    const int j = bucket_index(y);
    if (j > L) continue;
    buckets[static_cast<std::size_t>(j)].pairs.push_back(id);
    buckets[static_cast<std::size_t>(j)].mass += y;
  }
  const Rational need(1, static_cast<unsigned long>(2 * L + 2));
  for (auto& b : buckets)
    if (b.mass >= need) return b;
  throw std::logic_error("no bucket reaches mass 1/(2 log k + 2)");
}

ScaledFeasibility check_scaled_feasibility(const JunctionSearchState& state, const Instance& inst) {
  ScaledFeasibility out;
  const auto factor = pow2(state.theta + 1);
  std::map<EdgeId, Rational> scaled;
  for (const auto& [e, v] : state.fractional.x) scaled.emplace(e, v * factor);
  std::vector<Demand> demands;
  for (auto t : sinks_of(inst, state.bucket_pairs)) demands.push_back({t, 1, DemandDirection::from_root});
  for (auto s : sources_of(inst, state.bucket_pairs)) demands.push_back({s, 1, DemandDirection::to_root});
  for (const auto& v : separate_cut_constraints(inst.graph(), scaled, state.root, demands)) {
    const auto& d = demands[v.demand];
    std::string edges;
    for (auto e : v.cut.crossing_edges) edges += (edges.empty() ? "" : ",") + inst.edge_name(e);
    out.pass = false;
    out.violations.push_back(
        "root " + inst.vertex_name(state.root) +
        (d.direction == DemandDirection::from_root ? ": cut to sink " : ": cut from source ") +
        inst.vertex_name(d.terminal) + " {" + edges + "} short by " + to_string(v.shortfall));
  }
  return out;
}

std::optional<JunctionCandidate> build_junction_tree(const Instance& inst, VertexId root,
                                                     DstStrategy strategy) {
  auto frac = solve_den_lp(inst, root);
  if (!frac) return std::nullopt;
  auto bucket = bucket_theta(frac->y_t, inst.k());
  JunctionSearchState st;
  st.root = root;
  st.fractional = std::move(*frac);
  st.theta = bucket.theta;
  st.bucket_pairs = std::move(bucket.pairs);
  st.bucket_mass = bucket.mass;
  const auto& g = inst.graph();
  const auto sinks = sinks_of(inst, st.bucket_pairs);
  const auto sources = sources_of(inst, st.bucket_pairs);
  st.forward = dst_solve(g, root, sinks, strategy, false);
  st.backward = dst_solve_reversed(g, root, sources, strategy, false);
  std::vector<EdgeId> edges = st.forward.edges;
  edges.insert(edges.end(), st.backward.edges.begin(), st.backward.edges.end());
  JunctionCandidate c{make_junction_tree(inst, root, std::move(edges), st.bucket_pairs), std::move(st)};
  return c;
}

JunctionSearchResult find_min_density_junction(const Instance& inst, const JunctionOptions& options) {
  const auto& g = inst.graph();
  const auto n = g.num_vertices();
  std::vector<std::optional<JunctionCandidate>> found(n);
  std::vector<ScaledFeasibility> scaled(n);
  std::vector<std::string> definition(n);
  detail::parallel_for(n, options.parallelism, [&](std::size_t i) {
    found[i] = build_junction_tree(inst, g.vertices()[i], options.strategy);
    if (!found[i]) return;
    if (options.check_every_root) scaled[i] = check_scaled_feasibility(found[i]->state, inst);
    std::string why;
    if (!is_valid_junction_tree(inst, found[i]->tree, &why)) definition[i] = why;
  });

  JunctionSearchResult out;
  out.roots_tried = n;
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < n; ++i) {
    if (!found[i]) continue;
    ++out.roots_feasible;
    if (options.check_every_root) {
      ++out.scaled_checks;
      for (auto& v : scaled[i].violations) out.failures.push_back("scaled feasibility: " + v);
    }
    if (!definition[i].empty())
      out.failures.push_back("junction definition at root " + g.display_name(g.vertices()[i]) + ": " +
                             definition[i]);
    // Roots are scanned in id order, so a strict improvement keeps the smaller root on ties.
    if (!best || found[i]->tree.density < found[*best]->tree.density) best = i;
  }
  if (!best) throw DomainError("no root yields a junction tree; the instance is infeasible");

  out.tree = std::move(found[*best]->tree);
  out.state = std::move(found[*best]->state);
  auto& st = out.state;
  if (!options.check_every_root) {
    ++out.scaled_checks;
    for (auto& v : check_scaled_feasibility(st, inst).violations)
      out.failures.push_back("scaled feasibility: " + v);
  }
  attach_lp_bound(st.forward, g, st.root, sinks_of(inst, st.bucket_pairs), false);
  attach_lp_bound(st.backward, g, st.root, sources_of(inst, st.bucket_pairs), true);

  const int L = floor_log2(inst.k());
  const Rational lp_opt = st.fractional.objective;
  const Rational alpha = std::max(*st.forward.alpha, *st.backward.alpha);
  const Rational two_theta = pow2(st.theta);
  const Rational groups(static_cast<long>(2 * L + 2));
  auto& led = out.ledger;
  led.push_back(check_le("bucket mass >= 1/(2 floor(log2 k) + 2)", 1 / groups, st.bucket_mass));
  led.push_back(check_le("forward DST-LP <= 2^(theta+1) * LP", *st.forward.lp_bound, 2 * two_theta * lp_opt));
  led.push_back(check_le("backward DST-LP <= 2^(theta+1) * LP", *st.backward.lp_bound, 2 * two_theta * lp_opt));
  led.push_back(check_le("c(T_t) + c(T_s) <= alpha * 2^(theta+2) * LP", st.forward.cost + st.backward.cost,
                         alpha * 4 * two_theta * lp_opt));
  led.push_back(check_le("|D_theta| >= 2^theta / (2 floor(log2 k) + 2)", two_theta / groups,
                         Rational(static_cast<long>(st.bucket_pairs.size()))));
  led.push_back(check_le("density <= 8 alpha (floor(log2 k) + 1) * LP", out.tree.density,
                         8 * alpha * (L + 1) * lp_opt));
  return out;
}

}  // namespace dsf
