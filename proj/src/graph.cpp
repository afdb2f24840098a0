#include "dsf/graph.h"

#include "dsf/detail/max_flow.h"

#include <numeric>
#include <queue>
#include <tuple>

namespace dsf {

Digraph::Digraph(std::vector<VertexId> vertices, std::vector<Edge> edges,
                 std::map<VertexId, std::string> labels)
    : vertices_(std::move(vertices)), edges_(std::move(edges)), labels_(std::move(labels)) {
  std::sort(vertices_.begin(), vertices_.end());
  if (std::adjacent_find(vertices_.begin(), vertices_.end()) != vertices_.end())
    throw InputError("duplicate vertex id");
  std::sort(edges_.begin(), edges_.end(), [](const Edge& a, const Edge& b) { return a.id < b.id; });
  for (std::size_t i = 1; i < edges_.size(); ++i)
    if (edges_[i - 1].id == edges_[i].id)
      throw InputError("duplicate edge id " + std::to_string(edges_[i].id.value));

  const auto n = vertices_.size();
  tails_.resize(edges_.size());
  heads_.resize(edges_.size());
  std::vector<std::uint32_t> out_deg(n, 0), in_deg(n, 0);
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const auto& e = edges_[i];
    if (sgn(e.cost) < 0) throw InputError("negative cost on edge " + std::to_string(e.id.value));
    auto t = find_vertex(e.tail);
    auto h = find_vertex(e.head);
    if (!t || !h)
      throw InputError("edge " + std::to_string(e.id.value) + " references an unknown vertex");
    tails_[i] = static_cast<std::uint32_t>(*t);
    heads_[i] = static_cast<std::uint32_t>(*h);
    if (e.is_loop()) continue;
    ++out_deg[*t];
    ++in_deg[*h];
  }
  auto build = [&](std::vector<std::uint32_t>& offsets, std::vector<std::uint32_t>& list,
                   const std::vector<std::uint32_t>& deg, const std::vector<std::uint32_t>& key) {
    offsets.assign(n + 1, 0);
    for (std::size_t v = 0; v < n; ++v) offsets[v + 1] = offsets[v] + deg[v];
    list.resize(offsets[n]);
    std::vector<std::uint32_t> fill(offsets.begin(), offsets.end() - 1);
    for (std::size_t i = 0; i < edges_.size(); ++i) {
      if (edges_[i].is_loop()) continue;
      list[fill[key[i]]++] = static_cast<std::uint32_t>(i);
    }
  };
  build(out_offsets_, out_list_, out_deg, tails_);
  build(in_offsets_, in_list_, in_deg, heads_);
}

std::optional<std::size_t> Digraph::find_vertex(VertexId v) const {
  auto it = std::lower_bound(vertices_.begin(), vertices_.end(), v);
  if (it == vertices_.end() || *it != v) return std::nullopt;
  return static_cast<std::size_t>(it - vertices_.begin());
}

std::optional<std::size_t> Digraph::find_edge(EdgeId e) const {
  auto it = std::lower_bound(edges_.begin(), edges_.end(), e,
                             [](const Edge& a, EdgeId id) { return a.id < id; });
  if (it == edges_.end() || it->id != e) return std::nullopt;
  return static_cast<std::size_t>(it - edges_.begin());
}

std::size_t Digraph::vertex_index(VertexId v) const {
  auto i = find_vertex(v);
  if (!i) throw InputError("unknown vertex " + std::to_string(v.value));
  return *i;
}

std::size_t Digraph::edge_index(EdgeId e) const {
  auto i = find_edge(e);
  if (!i) throw InputError("unknown edge " + std::to_string(e.value));
  return *i;
}

std::span<const std::uint32_t> Digraph::out_edges(std::size_t v) const {
  return std::span<const std::uint32_t>(out_list_).subspan(out_offsets_[v],
                                                            out_offsets_[v + 1] - out_offsets_[v]);
}

std::span<const std::uint32_t> Digraph::in_edges(std::size_t v) const {
  return std::span<const std::uint32_t>(in_list_).subspan(in_offsets_[v],
                                                           in_offsets_[v + 1] - in_offsets_[v]);
}

std::string Digraph::display_name(VertexId v) const {
  if (auto it = labels_.find(v); it != labels_.end()) return it->second;
  return "#" + std::to_string(v.value);
}

Rational Digraph::total_cost() const {
  Rational sum = 0;
  for (const auto& e : edges_) sum += e.cost;
  return sum;
}

Rational Digraph::cost_of(std::span<const EdgeId> edges) const {
  Rational sum = 0;
  for (auto id : edges) sum += edge(id).cost;
  return sum;
}

VertexId Digraph::fresh_vertex_id() const {
  return vertices_.empty() ? VertexId{0} : VertexId{vertices_.back().value + 1};
}

EdgeId Digraph::fresh_edge_id() const {
  return edges_.empty() ? EdgeId{0} : EdgeId{edges_.back().id.value + 1};
}

std::vector<char> reach_mask(const Digraph& g, std::span<const std::size_t> sources,
                             Direction direction, TraversalFilter filter) {
  std::vector<char> mark(g.num_vertices(), 0);
  std::vector<std::size_t> stack;
  auto vertex_ok = [&](std::size_t v) {
    return filter.allowed_vertices.empty() || filter.allowed_vertices[v];
  };
  for (auto s : sources) {
    if (!vertex_ok(s) || mark[s]) continue;
    mark[s] = 1;
    stack.push_back(s);
  }
  const bool fwd = direction == Direction::forward;
  while (!stack.empty()) {
    auto u = stack.back();
    stack.pop_back();
    for (auto e : fwd ? g.out_edges(u) : g.in_edges(u)) {
      if (!filter.allowed_edges.empty() && !filter.allowed_edges[e]) continue;
      auto w = fwd ? g.head_index(e) : g.tail_index(e);
      if (mark[w] || !vertex_ok(w)) continue;
      mark[w] = 1;
      stack.push_back(w);
    }
  }
  return mark;
}

std::vector<VertexId> reachable_set(const Digraph& g, std::span<const VertexId> sources,
                                    Direction direction) {
  std::vector<std::size_t> idx;
  idx.reserve(sources.size());
  for (auto s : sources) idx.push_back(g.vertex_index(s));
  auto mark = reach_mask(g, idx, direction);
  std::vector<VertexId> out;
  for (std::size_t i = 0; i < mark.size(); ++i)
    if (mark[i]) out.push_back(g.vertices()[i]);
  return out;
}

Cut min_cut(const Digraph& g, std::span<const Rational> capacities, VertexId s, VertexId t) {
  if (s == t) throw InputError("min_cut requires distinct source and sink");
  if (capacities.size() != g.num_edges()) throw InputError("capacity vector size mismatch");
  const auto si = g.vertex_index(s);
  const auto ti = g.vertex_index(t);
  std::vector<detail::Arc> arcs(g.num_edges());
  for (std::size_t i = 0; i < g.num_edges(); ++i) {
    if (sgn(capacities[i]) < 0) throw InputError("negative capacity");
    arcs[i] = {static_cast<std::uint32_t>(g.tail_index(i)),
               static_cast<std::uint32_t>(g.head_index(i))};
  }
  auto result = detail::exact_max_flow(g.num_vertices(), arcs, capacities, si, ti);
  Cut cut;
  for (std::size_t v = 0; v < g.num_vertices(); ++v)
    if (result.source_side[v]) cut.side.push_back(g.vertices()[v]);
  cut.capacity = 0;
  for (std::size_t i = 0; i < g.num_edges(); ++i) {
    if (result.source_side[g.tail_index(i)] && !result.source_side[g.head_index(i)]) {
      cut.crossing_edges.push_back(g.edges()[i].id);
      cut.capacity += capacities[i];
    }
  }
  return cut;
}

Cut min_cut(const Digraph& g, const std::map<EdgeId, Rational>& capacities, VertexId s,
            VertexId t) {
  std::vector<Rational> caps(g.num_edges());
  for (std::size_t i = 0; i < g.num_edges(); ++i) {
    auto it = capacities.find(g.edges()[i].id);
    if (it == capacities.end())
      throw InputError("missing capacity for edge " + std::to_string(g.edges()[i].id.value));
    caps[i] = it->second;
  }
  return min_cut(g, caps, s, t);
}

Digraph contract(const Digraph& g, std::span<const VertexId> block, VertexId new_id) {
  if (block.empty()) throw InputError("contract: empty block");
  std::vector<char> in_block(g.num_vertices(), 0);
  for (auto v : block) in_block[g.vertex_index(v)] = 1;
  if (auto i = g.find_vertex(new_id); i && !in_block[*i])
    throw InputError("contract: new id collides with a vertex outside the block");
  std::vector<VertexId> vertices{new_id};
  std::map<VertexId, std::string> labels;
  for (std::size_t i = 0; i < g.num_vertices(); ++i) {
    if (in_block[i]) continue;
    auto v = g.vertices()[i];
    vertices.push_back(v);
    if (auto it = g.labels().find(v); it != g.labels().end()) labels.emplace(v, it->second);
  }
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < g.num_edges(); ++i) {
    Edge e = g.edges()[i];
    if (in_block[g.tail_index(i)]) e.tail = new_id;
    if (in_block[g.head_index(i)]) e.head = new_id;
    if (e.is_loop()) continue;
    edges.push_back(std::move(e));
  }
  return Digraph(std::move(vertices), std::move(edges), std::move(labels));
}

Digraph reverse(const Digraph& g) {
  std::vector<Edge> edges(g.edges().begin(), g.edges().end());
  for (auto& e : edges) std::swap(e.tail, e.head);
  return Digraph({g.vertices().begin(), g.vertices().end()}, std::move(edges), g.labels());
}

std::vector<std::vector<VertexId>> weak_components(const Digraph& g) {
  const auto n = g.num_vertices();
  std::vector<int> comp(n, -1);
  std::vector<std::vector<VertexId>> out;
  for (std::size_t s = 0; s < n; ++s) {
    if (comp[s] >= 0) continue;
    const int id = static_cast<int>(out.size());
    out.emplace_back();
    std::vector<std::size_t> stack{s};
    comp[s] = id;
    while (!stack.empty()) {
      auto u = stack.back();
      stack.pop_back();
      out.back().push_back(g.vertices()[u]);
      auto visit = [&](std::size_t w) {
        if (comp[w] < 0) {
          comp[w] = id;
          stack.push_back(w);
        }
      };
      for (auto e : g.out_edges(u)) visit(g.head_index(e));
      for (auto e : g.in_edges(u)) visit(g.tail_index(e));
    }
    std::sort(out.back().begin(), out.back().end());
  }
  return out;
}

std::optional<std::vector<EdgeId>> shortest_dipath(const Digraph& g, VertexId u, VertexId v,
                                                   PathMetric metric, TraversalFilter filter) {
  const auto ui = g.vertex_index(u);
  const auto vi = g.vertex_index(v);
  auto vertex_ok = [&](std::size_t x) {
    return filter.allowed_vertices.empty() || filter.allowed_vertices[x];
  };
  auto edge_ok = [&](std::size_t e) { return filter.allowed_edges.empty() || filter.allowed_edges[e]; };
  if (!vertex_ok(ui) || !vertex_ok(vi)) return std::nullopt;
  if (ui == vi) return std::vector<EdgeId>{};

  // Distance to v as (metric value, hop count), computed backwards from v.
  struct Key {
    Rational primary;
    std::size_t hops;
    bool operator<(const Key& o) const {
      int c = cmp(primary, o.primary);
      return c != 0 ? c < 0 : hops < o.hops;
    }
    bool operator==(const Key& o) const { return primary == o.primary && hops == o.hops; }
  };
  const auto n = g.num_vertices();
  std::vector<std::optional<Key>> dist(n);
  std::vector<char> done(n, 0);
  using Item = std::tuple<Key, std::size_t>;
  auto greater = [](const Item& a, const Item& b) {
    if (std::get<0>(b) < std::get<0>(a)) return true;
    if (std::get<0>(a) < std::get<0>(b)) return false;
    return std::get<1>(a) > std::get<1>(b);
  };
  std::priority_queue<Item, std::vector<Item>, decltype(greater)> pq(greater);
  dist[vi] = Key{0, 0};
  pq.emplace(*dist[vi], vi);
  auto weight = [&](std::size_t e) -> Rational {
    return metric == PathMetric::cost ? g.edges()[e].cost : Rational(1);
  };
  while (!pq.empty()) {
    auto [key, x] = pq.top();
    pq.pop();
    if (done[x]) continue;
    done[x] = 1;
    for (auto e : g.in_edges(x)) {
      if (!edge_ok(e)) continue;
      auto w = g.tail_index(e);
      if (!vertex_ok(w) || done[w]) continue;
      Key cand{key.primary + weight(e), key.hops + 1};
      if (!dist[w] || cand < *dist[w]) {
        dist[w] = cand;
        pq.emplace(cand, w);
      }
    }
  }
  if (!dist[ui]) return std::nullopt;

  std::vector<EdgeId> path;
  std::size_t x = ui;
  while (x != vi) {
    std::optional<std::size_t> chosen;
    for (auto e : g.out_edges(x)) {  // ascending edge id
      if (!edge_ok(e)) continue;
      auto y = g.head_index(e);
      if (!dist[y]) continue;
      Key via{dist[y]->primary + weight(e), dist[y]->hops + 1};
      if (via == *dist[x]) {
        chosen = e;
        break;
      }
    }
    path.push_back(g.edges()[*chosen].id);
    x = g.head_index(*chosen);
  }
  return path;
}

Digraph edge_subgraph(const Digraph& g, std::span<const EdgeId> edges) {
  std::vector<Edge> kept;
  std::vector<VertexId> vertices;
  for (auto id : edges) {
    const auto& e = g.edge(id);
    kept.push_back(e);
    vertices.push_back(e.tail);
    vertices.push_back(e.head);
  }
  vertices = sorted_unique(std::move(vertices));
  std::map<VertexId, std::string> labels;
  for (auto v : vertices)
    if (auto it = g.labels().find(v); it != g.labels().end()) labels.emplace(v, it->second);
  std::sort(kept.begin(), kept.end(), [](const Edge& a, const Edge& b) { return a.id < b.id; });
  kept.erase(std::unique(kept.begin(), kept.end(),
                         [](const Edge& a, const Edge& b) { return a.id == b.id; }),
             kept.end());
  return Digraph(std::move(vertices), std::move(kept), std::move(labels));
}

Digraph induced_subgraph(const Digraph& g, std::span<const VertexId> vertices) {
  std::vector<char> inside(g.num_vertices(), 0);
  std::vector<VertexId> vs;
  std::map<VertexId, std::string> labels;
  for (auto v : vertices) {
    auto i = g.vertex_index(v);
    if (inside[i]) continue;
    inside[i] = 1;
    vs.push_back(v);
    if (auto it = g.labels().find(v); it != g.labels().end()) labels.emplace(v, it->second);
  }
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < g.num_edges(); ++i)
    if (inside[g.tail_index(i)] && inside[g.head_index(i)]) edges.push_back(g.edges()[i]);
  return Digraph(std::move(vs), std::move(edges), std::move(labels));
}

Digraph filter_edges(const Digraph& g, std::span<const char> keep) {
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < g.num_edges(); ++i)
    if (keep[i]) edges.push_back(g.edges()[i]);
  return Digraph({g.vertices().begin(), g.vertices().end()}, std::move(edges), g.labels());
}

}  // namespace dsf
