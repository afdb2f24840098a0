#include "dsf/dst.h"

#include "dsf/lp.h"
#include "dsf/oracle.h"

namespace dsf {

std::string_view to_string(DstStrategy s) {
  return s == DstStrategy::exact_fpt ? "exact-fpt" : "shortest-path-union";
}

std::optional<DstStrategy> parse_dst_strategy(std::string_view text) {
  if (text == "exact-fpt") return DstStrategy::exact_fpt;
  if (text == "shortest-path-union") return DstStrategy::shortest_path_union;
  return std::nullopt;
}

namespace {

void set_alpha(DstResult& r, Rational bound) {
  if (sgn(bound) == 0) {
    if (sgn(r.cost) != 0) throw std::logic_error("positive DST cost over a zero LP bound");
    r.alpha = Rational(1);
  } else {
    r.alpha = r.cost / bound;
  }
  r.lp_bound = std::move(bound);
}

DstResult solve_oriented(const Digraph& g, VertexId root, std::span<const VertexId> terminals,
                         DstStrategy strategy, bool with_lp_bound) {
  if (terminals.empty()) throw InputError("DST needs at least one terminal");
  DstResult out;
  if (strategy == DstStrategy::exact_fpt) {
    auto sol = exact_dst(g, root, terminals);
    out.edges = std::move(sol.edges);
  } else {
    std::vector<VertexId> sorted(terminals.begin(), terminals.end());
    sorted = sorted_unique(std::move(sorted));
    for (auto t : sorted) {
      auto path = shortest_dipath(g, root, t, PathMetric::cost);
      if (!path) throw DomainError("terminal " + g.display_name(t) + " is unreachable from the root");
      out.edges.insert(out.edges.end(), path->begin(), path->end());
    }
  }
  out.edges = sorted_unique(std::move(out.edges));
  out.cost = g.cost_of(out.edges);
  if (with_lp_bound) set_alpha(out, solve_dst_lp(g, root, terminals));
  return out;
}

}  // namespace

DstResult dst_solve(const Digraph& g, VertexId root, std::span<const VertexId> terminals,
                    DstStrategy strategy, bool with_lp_bound) {
  return solve_oriented(g, root, terminals, strategy, with_lp_bound);
}

DstResult dst_solve_reversed(const Digraph& g, VertexId root, std::span<const VertexId> sources,
                             DstStrategy strategy, bool with_lp_bound) {
  return solve_oriented(reverse(g), root, sources, strategy, with_lp_bound);
}

void attach_lp_bound(DstResult& result, const Digraph& g, VertexId root,
                     std::span<const VertexId> terminals, bool reversed) {
  set_alpha(result, reversed ? solve_dst_lp(reverse(g), root, terminals)
                             : solve_dst_lp(g, root, terminals));
}

}  // namespace dsf
