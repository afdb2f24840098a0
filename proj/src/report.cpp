#include "dsf/report.h"

namespace dsf::report {

namespace {

json edge_names(const Instance& inst, std::span<const EdgeId> edges) {
  json out = json::array();
  for (auto e : edges) out.push_back(inst.edge_name(e));
  return out;
}

json pair_names(const Instance& inst, std::span<const PairId> pairs) {
  json out = json::array();
  for (auto p : pairs) out.push_back(inst.pair_name(p));
  return out;
}

json vertex_names(const Digraph& g, std::span<const VertexId> vs) {
  json out = json::array();
  for (auto v : vs) out.push_back(g.display_name(v));
  return out;
}

json strings(const std::vector<std::string>& xs) { return json(xs); }

json dipath(const Instance& inst, const Digraph& g, const Dipath& d) {
  return {{"vertices", vertex_names(g, d.vertices)}, {"edges", edge_names(inst, d.edges)}};
}

json dst(const Instance& inst, const DstResult& r) {
  json out{{"edges", edge_names(inst, r.edges)}, {"cost", rational(r.cost)}};
  if (r.lp_bound) out["lp_bound"] = rational(*r.lp_bound);
  if (r.alpha) out["alpha"] = rational(*r.alpha);
  return out;
}

}  // namespace

json rational(const Rational& r) { return to_string(r); }

json ledger(const std::vector<Inequality>& inequalities) {
  json out = json::array();
  for (const auto& q : inequalities)
    out.push_back({{"name", q.name}, {"lhs", rational(q.lhs)}, {"rhs", rational(q.rhs)}, {"holds", q.holds}});
  return out;
}

json claims(const std::vector<ClaimCheck>& checks) {
  json out = json::array();
  for (const auto& c : checks) out.push_back({{"name", c.name}, {"holds", c.holds}, {"detail", c.detail}});
  return out;
}

json junction(const Instance& inst, const JunctionTree& tree) {
  return {{"root", inst.vertex_name(tree.root)},
          {"edges", edge_names(inst, tree.edges)},
          {"covered", pair_names(inst, tree.covered)},
          {"cost", rational(tree.cost)},
          {"density", rational(tree.density)}};
}

json junction_search(const Instance& inst, const JunctionSearchResult& result) {
  const auto& st = result.state;
  json y = json::object();
  for (const auto& [p, v] : st.fractional.y_t) y[inst.pair_name(p)] = rational(v);
  json x = json::object();
  for (const auto& [e, v] : st.fractional.x)
    if (sgn(v) != 0) x[inst.edge_name(e)] = rational(v);
  return {{"tree", junction(inst, result.tree)},
          {"den_lp", {{"objective", rational(st.fractional.objective)}, {"x", x}, {"y", y}}},
          {"theta", st.theta},
          {"bucket_pairs", pair_names(inst, st.bucket_pairs)},
          {"bucket_mass", rational(st.bucket_mass)},
          {"forward_dst", dst(inst, st.forward)},
          {"backward_dst", dst(inst, st.backward)},
          {"ledger", ledger(result.ledger)},
          {"roots_tried", result.roots_tried},
          {"roots_feasible", result.roots_feasible},
          {"scaled_checks", result.scaled_checks},
          {"failures", strings(result.failures)}};
}

json solution(const Instance& inst, const Solution& sol) {
  json certs = json::object();
  for (const auto& [p, walk] : sol.certificates) certs[inst.pair_name(p)] = edge_names(inst, walk);
  return {{"edges", edge_names(inst, sol.edges)}, {"cost", rational(sol.cost)}, {"certificates", certs}};
}

json trace(const Instance& inst, const CoverTrace& t) {
  json its = json::array();
  for (const auto& it : t.iterations)
    its.push_back({{"tree", junction(inst, it.tree)},
                   {"removed", pair_names(inst, it.removed)},
                   {"remaining", it.remaining},
                   {"density", rational(it.density)},
                   {"junction_ledger", ledger(it.junction_ledger)},
                   {"roots_feasible", it.roots_feasible},
                   {"scaled_checks", it.scaled_checks},
                   {"junction_failures", strings(it.junction_failures)}});
  return {{"iterations", its},
          {"harmonic_sum", rational(t.harmonic_sum)},
          {"ledger", ledger(t.ledger)},
          {"failures", strings(t.failures)}};
}

json ratio(const RatioReport& rep) {
  json rs = json::array();
  for (const auto& r : rep.iteration_ratios) rs.push_back(rational(r));
  return {{"cost", rational(rep.cost)},
          {"opt", rational(rep.opt)},
          {"ratio", rep.ratio ? rational(*rep.ratio) : json(nullptr)},
          {"iteration_ratios", rs},
          {"harmonic_sum", rational(rep.harmonic_sum)},
          {"harmonic_k", rational(rep.harmonic_k)},
          {"ledger", ledger(rep.ledger)}};
}

json verify(const VerifyReport& rep) {
  return {{"pass", rep.pass}, {"recomputed_cost", rational(rep.recomputed_cost)}, {"failures", strings(rep.failures)}};
}

json proof_replay(const Instance& inst, const ExistenceReplay& r) {
  json layerings = json::array();
  for (std::size_t c = 0; c < r.layerings.size(); ++c) {
    const auto& lay = r.layerings[c];
    const auto& rep = r.layering_reports[c];
    json layers = json::array();
    for (const auto& l : lay.layers) layers.push_back(vertex_names(inst.graph(), l));
    json graphs = json::array();
    for (const auto& lg : lay.layer_graphs) {
      std::vector<EdgeId> es;
      for (const auto& e : lg.graph.edges())
        if (!lg.virtual_edge || e.id != *lg.virtual_edge) es.push_back(e.id);
      graphs.push_back({{"root", lg.graph.display_name(lg.root)},
                        {"edges", edge_names(inst, es)},
                        {"cost", rational(lg.cost)},
                        {"virtual_root_edge", lg.virtual_edge.has_value()}});
    }
    json witness = json::object();
    for (const auto& [p, j] : rep.witness) witness[inst.pair_name(p)] = j;
    layerings.push_back({{"base", inst.vertex_name(lay.base)},
                         {"layers", layers},
                         {"layer_graphs", graphs},
                         {"pair_layer", witness},
                         {"claims", claims(rep.claims)},
                         {"ledger", ledger(rep.ledger)}});
  }

  const auto& lg = r.layerings[r.component].layer_graphs[static_cast<std::size_t>(r.layer)];
  const auto& g = lg.graph;
  json levels = json::array();
  for (const auto& lv : r.separator.levels) {
    json comps = json::array();
    for (const auto& sc : lv.components) {
      json paths = json::array();
      for (const auto& d : sc.dipaths) paths.push_back(dipath(inst, g, d));
      json weights = json::array();
      for (const auto& w : sc.child_weights) weights.push_back(rational(w));
      comps.push_back({{"vertices", vertex_names(g, sc.vertices)},
                       {"weight", rational(sc.weight)},
                       {"separator_vertices", vertex_names(g, sc.u)},
                       {"dipaths", paths},
                       {"captured", pair_names(inst, sc.captured)},
                       {"child_weights", weights}});
    }
    levels.push_back({{"index", lv.index}, {"components", comps}, {"captured", pair_names(inst, lv.captured)}});
  }

  const auto& sys = r.one_path.system;
  json ipairs = json::array();
  for (const auto& ip : sys.pairs)
    ipairs.push_back({{"pair", inst.pair_name(ip.id)},
                      {"a", g.display_name(ip.a)},
                      {"b", g.display_name(ip.b)},
                      {"a_pos", ip.a_pos},
                      {"b_pos", ip.b_pos},
                      {"to_path", dipath(inst, g, ip.to_path)},
                      {"from_path", dipath(inst, g, ip.from_path)},
                      {"access_avoids_path", ip.access_avoids_path}});
  json groups = json::array();
  for (std::size_t i = 0; i < sys.groups.size(); ++i) {
    const auto& grp = sys.groups[i];
    groups.push_back({{"j", grp.j},
                      {"anchor", g.display_name(grp.anchor)},
                      {"anchor_pos", grp.anchor_pos},
                      {"pairs", pair_names(inst, grp.pairs)},
                      {"tree_cost", rational(sys.trees[i].cost)}});
  }

  return {{"all_pass", all_hold(r.claims) && all_hold(r.chain)},
          {"tree", junction(inst, r.tree)},
          {"claims", claims(r.claims)},
          {"chain", ledger(r.chain)},
          {"layerings", layerings},
          {"chosen", {{"component", r.component},
                      {"layer", r.layer},
                      {"layer_pairs", pair_names(inst, r.layer_pairs)},
                      {"level", r.level},
                      {"separator_component", vertex_names(g, r.separator_component)},
                      {"component_pairs", pair_names(inst, r.component_pairs)},
                      {"path", dipath(inst, g, r.path)},
                      {"path_pairs", pair_names(inst, r.path_pairs)}}},
          {"separator", {{"levels", levels},
                         {"claims", claims(r.separator.claims)},
                         {"ledger", ledger(r.separator.ledger)},
                         {"good_level", r.separator.good_level ? json(*r.separator.good_level) : json(nullptr)}}},
          {"one_path", {{"compressed", vertex_names(g, sys.compressed)},
                        {"compressed_length", sys.compressed_length()},
                        {"pairs", ipairs},
                        {"groups", groups},
                        {"best", junction(inst, r.one_path.best)},
                        {"tree_cost_sum", rational(r.one_path.tree_cost_sum)},
                        {"used_cost", rational(r.one_path.used_cost)},
                        {"claims", claims(r.one_path.claims)},
                        {"ledger", ledger(r.one_path.ledger)}}}};
}

std::string dump(const json& doc) { return doc.dump(2) + "\n"; }

}  // namespace dsf::report
